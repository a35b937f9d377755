// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "cazac/cazac.hpp"
#include "oracles.hpp"

using namespace cazac;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

constexpr double closed_form_rel_tol = 1e-6;  // window PSLR vs brute force
constexpr double magnitude_tol = 1e-9;        // times N, closed-form magnitudes
constexpr double cazac_tol = 1e-9;
constexpr double verify_db_tol = 0.5;
constexpr double noise_rel_tol = 0.10;
constexpr std::uint64_t fixed_seed = 1;

std::int64_t random_odd(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi)
{
    return std::uniform_int_distribution<std::int64_t>((lo - 1) / 2, (hi - 1) / 2)(rng) * 2 + 1;
}

std::int64_t random_root(std::mt19937_64& rng, std::int64_t n, std::int64_t hi)
{
    std::uniform_int_distribution<std::int64_t> dist(1, hi);
    for (;;) {
        const auto p = dist(rng);
        if (std::gcd(p, n) == 1) return p;
    }
}

std::string fmt(const char* f, double a)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

Outcome doppler_constant()
{
    const double v = max_normalized_doppler(SensingRequirements{});
    return {v == 6.4e-6, "v_bar = " + fmt("%.17g", v)};
}

Outcome root_selection()
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto d = zc_best_root(35537, SensingRequirements{});
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {d.feasible && d.root == 21 && secs < 1.0,
            "p = " + std::to_string(d.root) + ", " + d.diagnostics + ", " + fmt("%.3f s", secs)};
}

Outcome window_pslr_equivalence()
{
    std::mt19937_64 rng(fixed_seed);
    double worst = 0;
    double printed_worst = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::int64_t n = random_odd(rng, 101, 4001);
        const std::int64_t p = random_root(rng, n, (n - 1) / 2);
        const double v = std::uniform_real_distribution<double>(1e-3, 0.9)(rng) / static_cast<double>(n);
        const double brute = oracle::window_pslr(n, p, v);
        worst = std::max(worst, std::abs(zc_window_pslr(n, p, v) / brute - 1.0));
        printed_worst = std::max(printed_worst, std::abs(zc_window_pslr_printed(n, p, v) / brute - 1.0));
    }
    return {worst <= closed_form_rel_tol, "max rel err " + fmt("%.2e", worst) +
                                              " (sign-as-printed form: " + fmt("%.2e", printed_worst) + ")"};
}

Outcome magnitude_equivalence()
{
    std::mt19937_64 rng(fixed_seed + 1);
    double worst = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::int64_t n = random_odd(rng, 7, 1201);
        const std::int64_t p = random_root(rng, n, n - 1);
        const std::int64_t tau = std::uniform_int_distribution<std::int64_t>(0, n - 1)(rng);
        const double v = std::uniform_real_distribution<double>(-0.999, 0.999)(rng) / static_cast<double>(n);
        const auto s = oracle::zc(n, p);
        const auto mags = oracle::magnitudes(oracle::xcorr(oracle::echo(s, tau, v), s));
        for (std::int64_t k = 0; k < n; ++k) {
            const double err = std::abs(zc_xcorr_closed_form({n, p}, tau, v, k) - mags[static_cast<std::size_t>(k)]);
            worst = std::max(worst, err / static_cast<double>(n));
        }
    }
    return {worst <= magnitude_tol, "max |err|/N " + fmt("%.2e", worst)};
}

Outcome cazac_validity()
{
    std::mt19937_64 rng(fixed_seed + 2);
    std::uniform_real_distribution<double> psi_dist(-100.0, 100.0);
    int checked = 0;
    int failed = 0;
    for (std::int64_t r : {5, 7, 9, 12, 101}) {
        for (std::int64_t m : {1, 2, 3}) {
            std::vector<std::int64_t> phis;
            for (std::int64_t phi = 1; phi < r; ++phi) {
                if (std::gcd(phi, r) == 1) phis.push_back(phi);
            }
            std::shuffle(phis.begin(), phis.end(), rng);
            phis.resize(std::min<std::size_t>(phis.size(), 5));
            for (std::int64_t phi : phis) {
                for (int draw = 0; draw < 3; ++draw) {
                    CazacParams params;
                    params.r = r;
                    params.m = m;
                    params.phi = phi;
                    params.slope = std::uniform_int_distribution<std::int64_t>(0, r / m)(rng);
                    for (std::int64_t g = 0; g < m; ++g) params.psi.push_back(psi_dist(rng));
                    const auto report = verify_cazac(generate_cazac(params), cazac_tol);
                    ++checked;
                    failed += (report.constant_amplitude && report.zero_autocorrelation) ? 0 : 1;
                }
            }
        }
    }
    return {failed == 0, std::to_string(checked) + " sequences, " + std::to_string(failed) + " failed"};
}

Outcome exhaustive_search()
{
    SensingRequirements req;
    req.sampling_period_s = 2e-8;
    req.speed_limit_mps = 300;
    const double v = max_normalized_doppler(req);
    const double n_max = roi_lag_bound(req);
    const auto found = cazac_search(7, 2, req, {0, true});
    double best = -1;
    std::int64_t best_phi = 0;
    std::int64_t best_a = 0;
    std::size_t count = 0;
    std::size_t phi_count = 0;
    bool grid_ok = true;
    for (std::int64_t phi = 1; phi < 7; ++phi) {
        if (std::gcd(phi, std::int64_t{7}) != 1) continue;
        ++phi_count;
        for (std::int64_t a = 0; a <= 7 / 2; ++a) {
            const auto z = oracle::cazac(7, 2, phi, oracle::linear_varphi(7, 2, a), {});
            const double value =
                oracle::pslr_after_peak(oracle::magnitudes(oracle::xcorr(oracle::echo(z, 0, v), z)), n_max);
            if (count < found.grid.size())
                grid_ok = grid_ok && std::abs(found.grid[count].pslr.linear / value - 1.0) < 1e-9;
            ++count;
            if (value > best * (1.0 + 1e-9)) {
                best = value;
                best_phi = phi;
                best_a = a;
            }
        }
    }
    const bool pass = grid_ok && found.design.evaluations == phi_count * (7 / 2 + 1) &&
                      found.design.evaluations == count && found.design.phi == best_phi &&
                      found.design.slope == best_a && std::abs(found.design.achieved.linear / best - 1.0) < 1e-9;
    return {pass, "(phi, a) = (" + std::to_string(found.design.phi) + ", " + std::to_string(found.design.slope) +
                      ") vs oracle (" + std::to_string(best_phi) + ", " + std::to_string(best_a) + "), " +
                      std::to_string(found.design.evaluations) + " evaluations"};
}

Outcome designed_pslr()
{
    const SensingRequirements req;
    const auto check = verify_root(35537, 21, req);
    const double closed = amplitude_db(zc_window_pslr(35537, 21, max_normalized_doppler(req)));
    const double printed = amplitude_db(zc_window_pslr_printed(35537, 21, max_normalized_doppler(req)));
    return {std::abs(check.measured.db() - closed) <= verify_db_tol,
            "simulated " + fmt("%.4f dB", check.measured.db()) + ", closed form " + fmt("%.4f dB", closed) +
                " (sign-as-printed " + fmt("%.4f dB", printed) + ")"};
}

Outcome doppler_ordering()
{
    ExperimentConfig c;
    c.experiment = ExperimentId::pslr_vs_doppler;
    c.seed = fixed_seed;
    c.apply_desk_scale();
    c.apply_default_grids();
    c.validate();
    const auto t = run_pslr_vs_doppler(c).tables.front();
    const auto v = t.values("velocity_mps");
    const auto p1 = t.values("zc_p1");
    const auto d = t.values("zc_designed");
    bool ordered = true;
    for (std::size_t i = 0; i < v.size(); ++i) ordered = ordered && (v[i] == 0.0 || d[i] >= p1[i]);
    double tv_d = 0;
    double tv_1 = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        tv_d += std::abs(d[i] - d[i - 1]);
        tv_1 += std::abs(p1[i] - p1[i - 1]);
    }
    return {ordered && tv_d < tv_1, std::string(ordered ? "designed >= p=1 at every v != 0" : "ordering violated") +
                                        ", total variation " + fmt("%.2f dB", tv_d) + " vs " + fmt("%.2f dB", tv_1)};
}

std::string fa_levels(const RocCurve& curve)
{
    std::ostringstream s;
    s << curve.label << " FA@DR[";
    bool first = true;
    for (double level : roc_levels()) {
        s << (first ? "" : " ") << fmt("%.5g", roc_fa_at(curve, level));
        first = false;
    }
    s << "]";
    return s.str();
}

double fa_at_gamma(const RocCurve& curve, double gamma)
{
    for (const auto& p : curve.points) {
        if (p.gamma >= gamma) return p.false_alarm_rate;
    }
    return curve.points.back().false_alarm_rate;
}

Outcome roc_dominance()
{
    ExperimentConfig c;
    c.seed = fixed_seed;
    c.apply_desk_scale();
    c.trials = 50;
    c.explicit_keys.insert("trials");
    c.experiment = ExperimentId::roc;
    c.apply_default_grids();
    c.validate();
    const auto zc = run_roc(c).curves;
    c.experiment = ExperimentId::cazac_roc;
    const auto cz = run_cazac_roc(c).curves;
    const auto& p1 = zc[0];
    const auto& designed = zc[1];
    const auto& dzc = zc[2];
    const bool over_p1 = roc_dominates(designed, p1);
    const bool over_dzc = roc_dominates(designed, dzc);
    const bool over_avg = roc_dominates(cz[0], cz[1]);
    std::ostringstream s;
    s << "designed>p1 " << (over_p1 ? "yes" : "no") << ", designed>dzc " << (over_dzc ? "yes" : "no")
      << ", cazac designed>average " << (over_avg ? "yes" : "no") << "; " << fa_levels(designed) << " "
      << fa_levels(p1) << " " << fa_levels(dzc) << " " << fa_levels(cz[0]) << " " << fa_levels(cz[1])
      << "; FA at Gamma=10: designed " << fmt("%.4f", fa_at_gamma(designed, 10)) << " p1 "
      << fmt("%.4f", fa_at_gamma(p1, 10)) << " dzc " << fmt("%.4f", fa_at_gamma(dzc, 10));
    return {over_p1 && over_dzc && over_avg, s.str()};
}

Outcome dzc_noise()
{
    // excess power of decode(s + w) over decode(s), per sample, against 2 sigma^2 + sigma^4
    const ZcParams base{1019, 1};
    Scenario noisy;
    noisy.length = 1019;
    noisy.seed = fixed_seed;
    noisy.physical.sampling_period_s *= 35537.0 / 1019.0;
    noisy.targets = {Target{5.0, 0.0, {1, 0}}};
    Scenario clean = noisy;
    clean.noiseless = true;
    Scenario pure = noisy;
    pure.targets.clear();
    const double s2 = noisy.noise_variance();
    const auto tx = generate_dzc(base);
    const auto reference = dzc_receive_chain(synthesize_echo(clean, tx, 0), base);
    long double excess = 0;
    long double noise_only = 0;
    const int blocks = 982; // 982 * 1019 >= 1e6
    for (int k = 0; k < blocks; ++k) {
        const auto a = dzc_receive_chain(synthesize_echo(noisy, tx, k), base);
        const auto b = dzc_receive_chain(synthesize_echo(pure, tx, k), base);
        for (std::size_t n = 0; n < a.size(); ++n) {
            excess += std::norm(a.values()[n] - reference.values()[n]);
            noise_only += std::norm(b.values()[n]);
        }
    }
    const double scale = 1019.0 * 1019.0 * blocks;
    const double measured = static_cast<double>(excess) / scale;
    const double expected = 2 * s2 + s2 * s2;
    return {std::abs(measured / expected - 1.0) <= noise_rel_tol,
            "sigma^2 = " + fmt("%.4f", s2) + ": excess " + fmt("%.4f", measured) + " vs 2s^2+s^4 " +
                fmt("%.4f", expected) + "; noise-only " + fmt("%.4f", static_cast<double>(noise_only) / scale) +
                " vs s^4 " + fmt("%.4f", s2 * s2)};
}

Outcome rdm_localization()
{
    Scenario s;
    s.length = 1019;
    s.repetitions = 16;
    s.noiseless = true;
    s.physical.sampling_period_s *= 35537.0 / 1019.0;
    const auto w = Waveform::zadoff_chu({1019, 21}, "zc_designed");
    const auto bins = static_cast<std::size_t>(s.doppler_bins());
    const MatchContext ctx{1019, bins, s.physical};
    std::mt19937_64 rng(fixed_seed + 3);
    int hits = 0;
    int inverted = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const double d = std::uniform_real_distribution<double>(0, s.physical.sensing_range_m)(rng);
        const double u = std::uniform_real_distribution<double>(-s.physical.speed_limit_mps, s.physical.speed_limit_mps)(rng);
        s.targets = {Target{d, u, std::polar(1.0, std::uniform_real_distribution<double>(0, 2 * pi)(rng))}};
        const auto [n, q] = simulate_rdm(s, w).argmax();
        const auto tau = static_cast<std::size_t>(delay_samples(d, s.physical, 1019));
        const auto q_star = doppler_bin(normalized_doppler(u, s.physical), 1019, bins);
        hits += (n == tau && q == q_star) ? 1 : 0;
        inverted += ctx.matches(n, q, s.targets.front()) ? 1 : 0;
    }
    return {hits == 100 && inverted == 100,
            std::to_string(hits) + "/100 at (tau, q*), " + std::to_string(inverted) + "/100 within tolerances"};
}

Outcome feasibility_consistency()
{
    std::mt19937_64 rng(fixed_seed + 4);
    int roots = 0;
    int failed = 0;
    int nonempty = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const std::int64_t n = random_odd(rng, 101, 1009);
        SensingRequirements req;
        req.sampling_period_s = 0.2e-9 * 35537.0 / static_cast<double>(n);
        req.sensing_range_m = std::uniform_real_distribution<double>(5, 60)(rng);
        req.speed_limit_mps = std::uniform_real_distribution<double>(5, 30)(rng);
        req.pslr_threshold = amplitude_from_db(std::uniform_real_distribution<double>(0, 35)(rng));
        const auto range = zc_feasible_range(n, req);
        nonempty += range.empty() ? 0 : 1;
        for (std::int64_t p : range.roots) {
            ++roots;
            failed += verify_root(n, p, req).passes ? 0 : 1;
        }
    }
    return {failed == 0 && roots > 0, std::to_string(roots) + " roots from " + std::to_string(nonempty) +
                                          " nonempty ranges, " + std::to_string(failed) + " failed verification"};
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"normalized Doppler constant", doppler_constant},
        {"root selection N=35537", root_selection},
        {"window PSLR closed form vs brute force", window_pslr_equivalence},
        {"correlation magnitude closed form vs brute force", magnitude_equivalence},
        {"CAZAC construction validity", cazac_validity},
        {"(phi, a) search vs exhaustive enumeration", exhaustive_search},
        {"designed ZC PSLR simulated vs closed form", designed_pslr},
        {"PSLR vs Doppler ordering", doppler_ordering},
        {"ROC dominance", roc_dominance},
        {"DZC decode noise power", dzc_noise},
        {"RDM localization", rdm_localization},
        {"feasible range consistency", feasibility_consistency}};
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[i].second();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failures += out.pass ? 0 : 1;
        std::printf("%s %2zu %s: %s [%.2f s]\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    out.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
