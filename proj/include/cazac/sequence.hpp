// Zadoff-Chu, general (r, m) CAZAC and differential ZC generators, plus a CAZAC checker.
//
// Phases are reduced in exact integer arithmetic before conversion to double, so
// sample phase error stays at a few ulp even for lengths in the tens of thousands.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cazac/fft.hpp"
#include "cazac/number_theory.hpp"
#include "cazac/types.hpp"

namespace cazac {

/// Zadoff-Chu parameters: odd length N and root index p, 0 < p < N, gcd(p, N) = 1.
struct ZcParams {
    std::int64_t length = 0;
    std::int64_t root = 0;

    void validate() const
    {
        if (length < 1 || length % 2 == 0)
            throw std::invalid_argument("ZC length must be a positive odd integer, got " +
                                        std::to_string(length));
        if (root <= 0 || root >= length)
            throw std::invalid_argument("ZC root " + std::to_string(root) + " outside (0, " +
                                        std::to_string(length) + ")");
        if (!coprime(root, length))
            throw std::invalid_argument("ZC root " + std::to_string(root) +
                                        " is not coprime with length " + std::to_string(length));
    }

    friend bool operator==(const ZcParams&, const ZcParams&) = default;
};

/// Parameters of the unified CAZAC construction of length r*m^2.
///
/// The coset phase map varphi(gamma) is either the linear family
/// <a*m*gamma + gamma>_{rm} (when `varphi` is empty) or an explicit table whose
/// residues modulo m form a permutation of Z_m. `psi` is an arbitrary real phase
/// per coset (all zeros when empty).
struct CazacParams {
    std::int64_t r = 0;
    std::int64_t m = 1;
    std::int64_t phi = 1;
    std::int64_t slope = 0;
    std::vector<double> psi;
    std::optional<std::vector<std::int64_t>> varphi;

    [[nodiscard]] std::int64_t length() const { return r * m * m; }
    [[nodiscard]] std::int64_t coset_length() const { return r * m; }
    /// 2*c_r, i.e. 2 for odd r and 1 for even r, keeping g(beta, gamma) integral after doubling.
    [[nodiscard]] std::int64_t twice_cr() const { return (r % 2 != 0) ? 2 : 1; }
    [[nodiscard]] std::int64_t max_slope() const { return r / m; }

    [[nodiscard]] std::int64_t varphi_at(std::int64_t gamma) const
    {
        if (varphi) return (*varphi)[static_cast<std::size_t>(gamma)];
        const std::int64_t rm = coset_length();
        return ((slope * m * gamma + gamma) % rm + rm) % rm;
    }

    [[nodiscard]] double psi_at(std::int64_t gamma) const
    {
        return psi.empty() ? 0.0 : psi[static_cast<std::size_t>(gamma)];
    }

    void validate() const
    {
        if (r < 1) throw std::invalid_argument("CAZAC r must be positive");
        if (!is_square_free(m))
            throw std::invalid_argument("CAZAC m = " + std::to_string(m) + " is not square-free");
        if (phi < 0 || !coprime(phi, r))
            throw std::invalid_argument("CAZAC phi = " + std::to_string(phi) +
                                        " is not coprime with r = " + std::to_string(r));
        if (!psi.empty() && psi.size() != static_cast<std::size_t>(m))
            throw std::invalid_argument("CAZAC psi table must have m entries");
        if (varphi) {
            if (varphi->size() != static_cast<std::size_t>(m))
                throw std::invalid_argument("CAZAC varphi table must have m entries");
            std::vector<bool> seen(static_cast<std::size_t>(m), false);
            for (std::int64_t value : *varphi) {
                if (value < 0 || value >= coset_length())
                    throw std::invalid_argument("CAZAC varphi entry outside [0, r*m)");
                seen[static_cast<std::size_t>(value % m)] = true;
            }
            if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
                throw std::invalid_argument("CAZAC varphi residues mod m are not a permutation");
        } else if (slope < 0 || slope > max_slope()) {
            throw std::invalid_argument("CAZAC slope a = " + std::to_string(slope) +
                                        " outside [0, floor(r/m)] = [0, " +
                                        std::to_string(max_slope()) + "]");
        }
    }

    [[nodiscard]] std::string describe() const
    {
        std::ostringstream out;
        out << "cazac(r=" << r << ",m=" << m << ",phi=" << phi;
        if (varphi) {
            out << ",varphi=[";
            for (std::size_t i = 0; i < varphi->size(); ++i) out << (i ? "," : "") << (*varphi)[i];
            out << "]";
        } else {
            out << ",a=" << slope;
        }
        out << ")";
        return out.str();
    }
};

/// s[n] = exp(-j pi p n (n+1) / N).
inline ComplexSequence generate_zc(const ZcParams& params)
{
    params.validate();
    const std::int64_t n_len = params.length;
    const std::int64_t modulus = 2 * n_len;
    std::vector<cplx> samples(static_cast<std::size_t>(n_len));
    for (std::int64_t n = 0; n < n_len; ++n) {
        const std::int64_t quad = (n % modulus) * ((n + 1) % modulus) % modulus;
        const std::int64_t turns = params.root * quad % modulus; // phase = -pi * turns / N
        samples[static_cast<std::size_t>(n)] =
            std::polar(1.0, -pi * static_cast<double>(turns) / static_cast<double>(n_len));
    }
    return ComplexSequence(std::move(samples), SequenceKind::zadoff_chu,
                           "zc(N=" + std::to_string(n_len) + ",p=" + std::to_string(params.root) + ")");
}

/// z[n] = exp(j 2 pi g(beta, gamma) / (r m)), beta = floor(n/m), gamma = n - beta m,
/// g = m c_r phi beta^2 + varphi(gamma) beta + psi(gamma).
inline ComplexSequence generate_cazac(const CazacParams& params)
{
    params.validate();
    const std::int64_t rm = params.coset_length();
    const std::int64_t modulus = 2 * rm; // 2g is an integer (plus 2 psi)
    const std::int64_t quad_coeff = params.twice_cr() * params.m * params.phi % modulus;

    std::vector<cplx> samples(static_cast<std::size_t>(params.length()));
    for (std::int64_t n = 0; n < params.length(); ++n) {
        const std::int64_t beta = n / params.m;
        const std::int64_t gamma = n - beta * params.m;
        const std::int64_t beta_mod = beta % modulus;
        std::int64_t twice_g = quad_coeff * (beta_mod * beta_mod % modulus) % modulus;
        twice_g = (twice_g + 2 * (params.varphi_at(gamma) % modulus) * beta_mod) % modulus;
        const double phase = pi * static_cast<double>(twice_g) / static_cast<double>(rm) +
                             2.0 * pi * params.psi_at(gamma) / static_cast<double>(rm);
        samples[static_cast<std::size_t>(n)] = std::polar(1.0, phase);
    }
    return ComplexSequence(std::move(samples), SequenceKind::general_cazac, params.describe());
}

/// Differential ZC: x[n] = prod_{k<=n} s[k]. The running product of
/// exp(-j pi p k(k+1)/N) has phase -pi p n(n+1)(n+2) / (3N), evaluated exactly.
inline ComplexSequence generate_dzc(const ZcParams& base)
{
    base.validate();
    const std::int64_t n_len = base.length;
    const std::int64_t modulus = 2 * n_len;
    std::vector<cplx> samples(static_cast<std::size_t>(n_len));
    for (std::int64_t n = 0; n < n_len; ++n) {
        const __int128 cubic = static_cast<__int128>(n) * (n + 1) * (n + 2) / 3;
        const auto reduced = static_cast<std::int64_t>(cubic % modulus);
        const std::int64_t turns = static_cast<std::int64_t>(
            static_cast<__int128>(base.root) * reduced % modulus);
        samples[static_cast<std::size_t>(n)] =
            std::polar(1.0, -pi * static_cast<double>(turns) / static_cast<double>(n_len));
    }
    return ComplexSequence(std::move(samples), SequenceKind::differential_zc,
                           "dzc(N=" + std::to_string(n_len) + ",p=" + std::to_string(base.root) + ")");
}

/// Circular autocorrelation a[n] = sum_i s[i] conj(s[i - n]) via FFT.
inline std::vector<cplx> circular_autocorrelation(std::span<const cplx> seq)
{
    std::vector<cplx> spectrum(seq.begin(), seq.end());
    detail::fft_forward(spectrum);
    for (auto& bin : spectrum) bin = std::norm(bin);
    detail::fft_backward(spectrum);
    const double scale = 1.0 / static_cast<double>(seq.size());
    for (auto& v : spectrum) v *= scale;
    return spectrum;
}

struct CazacReport {
    bool constant_amplitude = false;
    bool zero_autocorrelation = false;
    double max_amplitude_deviation = 0.0; ///< max | |s[n]| - 1 |
    double max_sidelobe = 0.0;            ///< max over nonzero lags of |autocorrelation|
    std::size_t worst_lag = 0;
};

/// Measures the two defining CAZAC properties: constant amplitude within `tol`
/// and off-peak autocorrelation magnitude within `tol * N`.
inline CazacReport verify_cazac(const ComplexSequence& seq, double tol)
{
    if (seq.empty()) throw std::invalid_argument("verify_cazac: empty sequence");
    CazacReport report;
    for (const cplx& s : seq) {
        report.max_amplitude_deviation = std::max(report.max_amplitude_deviation, std::abs(std::abs(s) - 1.0));
    }
    const auto acf = circular_autocorrelation(seq.samples());
    for (std::size_t lag = 1; lag < acf.size(); ++lag) {
        const double mag = std::abs(acf[lag]);
        if (mag > report.max_sidelobe) {
            report.max_sidelobe = mag;
            report.worst_lag = lag;
        }
    }
    const double n = static_cast<double>(seq.length());
    report.constant_amplitude = report.max_amplitude_deviation <= tol;
    report.zero_autocorrelation = report.max_sidelobe <= tol * n;
    return report;
}

} // namespace cazac
