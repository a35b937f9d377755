#include <gtest/gtest.h>

#include <random>

#include "cazac/cazac.hpp"
#include "oracles.hpp"

using namespace cazac;

namespace {

constexpr double sample_tol = 1e-12; // long double oracle vs exact-integer phase reduction
constexpr double cazac_tol = 1e-9;

double max_diff(std::span<const cplx> a, const std::vector<cplx>& b)
{
    double worst = 0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

} // namespace

TEST(ZadoffChu, MatchesDirectFormula)
{
    for (auto [n, p] : {std::pair<std::int64_t, std::int64_t>{7, 1}, {101, 5}, {1019, 21}, {35537, 21}, {35535, 19}}) {
        const auto seq = generate_zc({n, p});
        ASSERT_EQ(seq.length(), static_cast<std::size_t>(n));
        EXPECT_LT(max_diff(seq.samples(), oracle::zc(n, p)), sample_tol * std::max<double>(1.0, n / 100.0))
            << "N=" << n << " p=" << p;
        EXPECT_EQ(seq.kind(), SequenceKind::zadoff_chu);
    }
}

TEST(ZadoffChu, IsCazacForEveryValidRoot)
{
    for (std::int64_t n : {3, 7, 15, 63, 101, 105}) {
        for (std::int64_t p = 1; p < n; ++p) {
            if (!coprime(p, n)) continue;
            const auto report = verify_cazac(generate_zc({n, p}), cazac_tol);
            EXPECT_TRUE(report.constant_amplitude && report.zero_autocorrelation) << "N=" << n << " p=" << p;
        }
    }
    const auto big = verify_cazac(generate_zc({35537, 21}), cazac_tol);
    EXPECT_TRUE(big.constant_amplitude);
    EXPECT_TRUE(big.zero_autocorrelation);
}

TEST(ZadoffChu, RejectsInvalidParameters)
{
    EXPECT_THROW(generate_zc({8, 1}), std::invalid_argument);
    EXPECT_THROW(generate_zc({7, 0}), std::invalid_argument);
    EXPECT_THROW(generate_zc({7, 7}), std::invalid_argument);
    EXPECT_THROW(generate_zc({15, 3}), std::invalid_argument);
    EXPECT_THROW(generate_zc({-5, 1}), std::invalid_argument);
}

TEST(GeneralCazac, MatchesDirectFormula)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> psi_dist(0.0, 10.0);
    for (auto [r, m] : {std::pair<std::int64_t, std::int64_t>{5, 1}, {7, 2}, {9, 3}, {12, 2}, {101, 3}}) {
        for (std::int64_t phi = 1; phi < r; phi += 2) {
            if (!coprime(phi, r)) continue;
            CazacParams params;
            params.r = r;
            params.m = m;
            params.phi = phi;
            params.slope = (phi * 3) % (r / m + 1);
            for (std::int64_t g = 0; g < m; ++g) params.psi.push_back(psi_dist(rng));
            const auto seq = generate_cazac(params);
            EXPECT_LT(max_diff(seq.samples(), oracle::cazac(r, m, phi, oracle::linear_varphi(r, m, params.slope),
                                                            params.psi)),
                      1e-11)
                << params.describe();
        }
    }
}

TEST(GeneralCazac, ValidOverSmallGridWithRandomPsi)
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> psi_dist(-50.0, 50.0);
    for (std::int64_t r : {5, 7, 9, 12}) {
        for (std::int64_t m : {1, 2, 3}) {
            for (std::int64_t phi = 1; phi < r; ++phi) {
                if (!coprime(phi, r)) continue;
                for (std::int64_t a = 0; a <= r / m; ++a) {
                    CazacParams params;
                    params.r = r;
                    params.m = m;
                    params.phi = phi;
                    params.slope = a;
                    const auto plain = verify_cazac(generate_cazac(params), cazac_tol);
                    for (std::int64_t g = 0; g < m; ++g) params.psi.push_back(psi_dist(rng));
                    const auto with_psi = verify_cazac(generate_cazac(params), cazac_tol);
                    EXPECT_TRUE(plain.constant_amplitude && plain.zero_autocorrelation) << params.describe();
                    EXPECT_EQ(plain.constant_amplitude, with_psi.constant_amplitude);
                    EXPECT_EQ(plain.zero_autocorrelation, with_psi.zero_autocorrelation);
                }
            }
        }
    }
}

TEST(GeneralCazac, PermutationTablesAreCazac)
{
    CazacParams params;
    params.r = 7;
    params.m = 3;
    params.phi = 4;
    params.varphi = std::vector<std::int64_t>{2 + 3 * 5, 0 + 3 * 1, 1 + 3 * 6};
    const auto report = verify_cazac(generate_cazac(params), cazac_tol);
    EXPECT_TRUE(report.constant_amplitude && report.zero_autocorrelation);
}

TEST(GeneralCazac, RejectsInvalidParameters)
{
    CazacParams params;
    params.r = 7;
    params.m = 4; // not square-free
    EXPECT_THROW(params.validate(), std::invalid_argument);
    params.m = 2;
    params.phi = 7;
    EXPECT_THROW(params.validate(), std::invalid_argument);
    params.phi = 1;
    params.slope = 4; // > floor(7/2)
    EXPECT_THROW(params.validate(), std::invalid_argument);
    params.slope = 0;
    params.varphi = std::vector<std::int64_t>{0, 2}; // residues {0, 0}
    EXPECT_THROW(params.validate(), std::invalid_argument);
    params.varphi = std::vector<std::int64_t>{1};
    EXPECT_THROW(params.validate(), std::invalid_argument);
    params.varphi.reset();
    params.psi = {0.0};
    EXPECT_THROW(params.validate(), std::invalid_argument);
}

TEST(Verify, FlagsNonCazacSequences)
{
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    std::vector<cplx> noise(64);
    for (auto& x : noise) x = {g(rng), g(rng)};
    const auto report = verify_cazac(ComplexSequence(noise), cazac_tol);
    EXPECT_FALSE(report.constant_amplitude);
    EXPECT_FALSE(report.zero_autocorrelation);
    EXPECT_THROW(verify_cazac(ComplexSequence{}, cazac_tol), std::invalid_argument);
}

TEST(DifferentialZc, IsRunningProductOfZc)
{
    for (auto [n, p] : {std::pair<std::int64_t, std::int64_t>{101, 1}, {1019, 21}, {35537, 1}}) {
        const auto seq = generate_dzc({n, p});
        EXPECT_LT(max_diff(seq.samples(), oracle::dzc(n, p)), 1e-9) << "N=" << n;
        EXPECT_EQ(seq.kind(), SequenceKind::differential_zc);
    }
}

TEST(DifferentialZc, DecodedPeakSitsAtDelayForAnyDoppler)
{
    const std::int64_t n = 1019;
    const ZcParams base{n, 1};
    const auto tx = generate_dzc(base);
    for (std::int64_t tau : {0, 1, 500, 1018}) {
        for (double vn : {-0.95, -0.5, -0.1, 0.0, 0.1, 0.5, 0.95}) {
            const auto profile = dzc_receive_chain(apply_doppler_delay(tx, tau, vn / n), base);
            EXPECT_EQ(profile.peak_index(), static_cast<std::size_t>(tau)) << "tau=" << tau << " vN=" << vn;
        }
    }
}

TEST(DifferentialZc, NoiselessZeroDopplerMatchesPlainZcChain)
{
    const ZcParams base{1019, 1};
    const auto dzc = dzc_receive_chain(apply_doppler_delay(generate_dzc(base), 500, 0.0), base);
    const auto zc = circular_xcorr(apply_doppler_delay(generate_zc(base), 500, 0.0), generate_zc(base));
    const RoI roi{47.79};
    EXPECT_TRUE(pslr(dzc, roi).saturated);
    EXPECT_TRUE(pslr(zc, roi).saturated);
    EXPECT_NEAR(dzc.peak_magnitude(), zc.peak_magnitude(), 1e-9 * 1019);
}

TEST(Correspondence, ProductFormWithMEqualOneMatchesZcProfile)
{
    // m = 1, r = N prime: same Doppler-corrupted correlation magnitudes as ZC root <-2 phi>_N.
    std::mt19937_64 rng(17);
    for (std::int64_t n : {101, 211, 1019}) {
        for (std::int64_t phi : {1, 2, 5, 37}) {
            CazacParams params;
            params.r = n;
            params.m = 1;
            params.phi = phi;
            const auto z = generate_cazac(params);
            const std::int64_t p = ((-2 * phi) % n + n) % n;
            const auto s = generate_zc({n, p});
            const double v = std::uniform_real_distribution<double>(-0.9, 0.9)(rng) / static_cast<double>(n);
            const auto rz = circular_xcorr(apply_doppler_delay(z, 7, v), z);
            const auto rs = circular_xcorr(apply_doppler_delay(s, 7, v), s);
            double worst = 0;
            for (std::size_t k = 0; k < rz.size(); ++k) worst = std::max(worst, std::abs(rz.magnitudes()[k] - rs.magnitudes()[k]));
            EXPECT_LT(worst, 1e-9 * static_cast<double>(n)) << "N=" << n << " phi=" << phi;
            EXPECT_TRUE(verify_cazac(z, cazac_tol).zero_autocorrelation);
        }
    }
}

TEST(ComplexSequenceType, CarriesMetadata)
{
    const auto seq = generate_zc({7, 3});
    EXPECT_EQ(seq.provenance(), "zc(N=7,p=3)");
    EXPECT_EQ(to_string(seq.kind()), "zadoff_chu");
    EXPECT_FALSE(seq.empty());
    auto copy = seq;
    const auto moved = std::move(copy).release();
    EXPECT_EQ(moved.size(), 7u);
    EXPECT_EQ(seq.length(), 7u);
}
