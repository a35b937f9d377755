// Doppler-corrupted circular correlation: numerical routes, closed forms, and PSLR.
//
// Conventions (shared by the whole library):
//   echo[n]  = gain * s[<n - tau>_N] * exp(+j 2 pi n v)
//   r[n]     = sum_i echo[i] * conj(s[<i - n>_N])
// With the ZC phase exp(-j pi p n(n+1)/N) this gives
//   |r[n]| = f(<p (n - tau) - v N>_N),  f(x) = |sin(pi x) / sin(pi x / N)|.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "cazac/fft.hpp"
#include "cazac/number_theory.hpp"
#include "cazac/sequence.hpp"
#include "cazac/types.hpp"

namespace cazac {

/// Correlation output per lag; magnitudes and the peak are derived once on construction.
class RangeProfile {
public:
    RangeProfile() = default;

    explicit RangeProfile(std::vector<cplx> values) : values_(std::move(values))
    {
        magnitudes_.resize(values_.size());
        double best = -1.0;
        for (std::size_t n = 0; n < values_.size(); ++n) {
            magnitudes_[n] = std::abs(values_[n]);
            if (magnitudes_[n] > best) { // strict: smallest lag wins ties
                best = magnitudes_[n];
                peak_index_ = n;
            }
        }
    }

    [[nodiscard]] std::span<const cplx> values() const noexcept { return values_; }
    [[nodiscard]] std::span<const double> magnitudes() const noexcept { return magnitudes_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] std::size_t peak_index() const noexcept { return peak_index_; }
    [[nodiscard]] double peak_magnitude() const { return magnitudes_.at(peak_index_); }

private:
    std::vector<cplx> values_;
    std::vector<double> magnitudes_;
    std::size_t peak_index_ = 0;
};

/// Range of interest: the lags strictly between the peak and peak + n_max.
struct RoI {
    double n_max = 0.0;

    /// Number of sidelobe lags examined: ceil(n_max) - 1, capped at N - 1.
    [[nodiscard]] std::size_t lag_count(std::size_t length) const
    {
        if (!(n_max > 1.0)) return 0;
        const double count = std::ceil(n_max) - 1.0;
        return static_cast<std::size_t>(std::min(count, static_cast<double>(length) - 1.0));
    }
};

/// y[n] = gain * seq[<n - tau>] * exp(j 2 pi n v).
inline ComplexSequence apply_doppler_delay(const ComplexSequence& seq, std::int64_t tau, double v,
                                           cplx gain = {1.0, 0.0})
{
    const auto n_len = static_cast<std::int64_t>(seq.length());
    if (tau < 0 || tau >= n_len)
        throw std::invalid_argument("apply_doppler_delay: tau outside [0, N)");
    std::vector<cplx> out(seq.length());
    for (std::int64_t n = 0; n < n_len; ++n) {
        const std::int64_t src = (n - tau + n_len) % n_len;
        out[static_cast<std::size_t>(n)] =
            gain * seq[static_cast<std::size_t>(src)] * std::polar(1.0, 2.0 * pi * static_cast<double>(n) * v);
    }
    return ComplexSequence(std::move(out), SequenceKind::custom, "echo(" + seq.provenance() + ")");
}

enum class CorrelationMethod { fft, direct };

/// r[n] = sum_i received[i] conj(reference[<i - n>_N]).
inline RangeProfile circular_xcorr(std::span<const cplx> received, std::span<const cplx> reference,
                                   CorrelationMethod method = CorrelationMethod::fft)
{
    if (received.size() != reference.size())
        throw std::invalid_argument("circular_xcorr: length mismatch");
    const std::size_t n_len = received.size();
    std::vector<cplx> out(n_len);
    if (n_len == 0) return RangeProfile(std::move(out));

    if (method == CorrelationMethod::direct) {
        for (std::size_t lag = 0; lag < n_len; ++lag) {
            cplx acc{};
            for (std::size_t i = 0; i < n_len; ++i) {
                acc += received[i] * std::conj(reference[(i + n_len - lag) % n_len]);
            }
            out[lag] = acc;
        }
        return RangeProfile(std::move(out));
    }

    // R[k] = Y[k] conj(S[k])
    std::vector<cplx> ref(reference.begin(), reference.end());
    out.assign(received.begin(), received.end());
    detail::fft_forward(out);
    detail::fft_forward(ref);
    for (std::size_t k = 0; k < n_len; ++k) out[k] *= std::conj(ref[k]);
    detail::fft_backward(out);
    const double scale = 1.0 / static_cast<double>(n_len);
    for (auto& v : out) v *= scale;
    return RangeProfile(std::move(out));
}

inline RangeProfile circular_xcorr(const ComplexSequence& received, const ComplexSequence& reference,
                                   CorrelationMethod method = CorrelationMethod::fft)
{
    return circular_xcorr(received.samples(), reference.samples(), method);
}

/// |r[n]| for ZC(N, p) against its echo with delay tau and normalized Doppler v.
inline double zc_xcorr_closed_form(const ZcParams& params, std::int64_t tau, double v, std::int64_t n)
{
    params.validate();
    const std::int64_t n_len = params.length;
    const std::int64_t code = centered_mod(params.root * centered_mod(n - tau, n_len), n_len);
    // x = code - vN, split into integer and fractional parts for the kernel.
    const double shift = v * static_cast<double>(n_len);
    const double whole = std::nearbyint(shift);
    return dirichlet_magnitude(code - static_cast<std::int64_t>(whole), -(shift - whole), n_len);
}

/// Sample of f(x) = |sin(pi x) / sin(pi x / N)|.
inline double fx(double x, std::int64_t length) { return dirichlet_magnitude(x, length); }

/// Root-index residue permutation: entry k is |<p k>_N| (centered) for k = 0..(N-1)/2.
struct ResidueTable {
    std::int64_t length = 0;
    std::int64_t root = 0;
    std::int64_t a = 0; ///< floor((N-1) / (2p))
    std::int64_t b = 0; ///< (N-1)/2 - a p
    std::vector<std::int64_t> values;

    /// Closed-form entry for k <= 2a: p k up to a, then (a - j) p + 2b + 1 for k = a + j.
    [[nodiscard]] std::int64_t pattern(std::int64_t k) const
    {
        if (k <= a) return k * root;
        return (a - (k - a)) * root + 2 * b + 1;
    }
};

inline ResidueTable residue_map(std::int64_t length, std::int64_t root)
{
    if (length < 1 || length % 2 == 0) throw std::invalid_argument("residue_map: N must be odd");
    if (root <= 0 || !coprime(root, length))
        throw std::invalid_argument("residue_map: gcd(p, N) must be 1");
    ResidueTable table;
    table.length = length;
    table.root = root;
    table.a = (length - 1) / (2 * root);
    table.b = (length - 1) / 2 - table.a * root;
    const std::int64_t half = (length - 1) / 2;
    table.values.resize(static_cast<std::size_t>(half + 1));
    for (std::int64_t k = 0; k <= half; ++k) {
        table.values[static_cast<std::size_t>(k)] = std::abs(centered_mod(root % length * k, length));
    }
    return table;
}

struct PslrResult {
    static constexpr double saturation = 1e15;

    double linear = 0.0;
    bool saturated = false;
    std::size_t worst_lag = 0; ///< absolute lag of the largest RoI sidelobe

    [[nodiscard]] double db() const { return amplitude_db(linear); }
};

/// Peak magnitude over the largest magnitude at lags peak+1 .. peak+ceil(n_max)-1 (mod N).
/// Sidelobes at or below 1e-9 of the peak count as perfect (saturated, 1e15).
inline PslrResult pslr(const RangeProfile& profile, const RoI& roi)
{
    const std::size_t n_len = profile.size();
    const std::size_t lags = roi.lag_count(n_len);
    if (lags == 0) throw std::invalid_argument("pslr: empty range of interest");
    const auto mags = profile.magnitudes();
    const std::size_t peak = profile.peak_index();
    PslrResult result;
    double worst = -1.0;
    for (std::size_t k = 1; k <= lags; ++k) {
        const std::size_t lag = (peak + k) % n_len;
        if (mags[lag] > worst) {
            worst = mags[lag];
            result.worst_lag = lag;
        }
    }
    const double peak_mag = mags[peak];
    if (worst <= 1e-9 * peak_mag) {
        result.linear = PslrResult::saturation;
        result.saturated = true;
    } else {
        result.linear = std::min(peak_mag / worst, PslrResult::saturation);
        result.saturated = result.linear >= PslrResult::saturation;
    }
    return result;
}

namespace detail {
inline void check_window_args(std::int64_t length, std::int64_t root, double v_max)
{
    if (length < 3 || length % 2 == 0) throw std::invalid_argument("window PSLR: N must be odd and >= 3");
    if (root <= 0 || root >= length) throw std::invalid_argument("window PSLR: root outside (0, N)");
    if (!(v_max > 0.0)) throw std::domain_error("window PSLR: v_max must be > 0 (v_max = 0 is perfect AC)");
    if (!(v_max * static_cast<double>(length) < 1.0)) throw std::domain_error("window PSLR: requires v_max N < 1");
}
} // namespace detail

/// Exact PSLR of ZC(N, p) under Doppler v_max over the lag window
/// 0 < |n - tau| < 2 floor((N-1)/(2p)):  |sin(pi (p - v_max N) / N) / sin(pi v_max)|.
/// The largest in-window sidelobe sits next to the peak at |x| = p - v_max N.
inline double zc_window_pslr(std::int64_t length, std::int64_t root, double v_max)
{
    detail::check_window_args(length, root, v_max);
    const double n = static_cast<double>(length);
    return std::abs(std::sin(pi / n * (static_cast<double>(root) - v_max * n)) / std::sin(pi * v_max));
}

/// The mirrored expression |sin(pi (p + v_max N) / N) / sin(pi v_max)|: the PSLR over
/// the side of the window where Doppler pushes the adjacent sidelobe away from the peak.
/// It overestimates the two-sided window PSLR; kept for comparison only.
inline double zc_window_pslr_printed(std::int64_t length, std::int64_t root, double v_max)
{
    detail::check_window_args(length, root, v_max);
    const double n = static_cast<double>(length);
    return std::abs(std::sin(pi / n * (static_cast<double>(root) + v_max * n)) / std::sin(pi * v_max));
}

/// Upper bound on |r[n]| for a general CAZAC sequence under delay tau and Doppler v:
/// sum over cosets gamma of f_{rm}(x(gamma, n)), where with
///   gamma - tau = b_tau m + g_tau,  gamma - n = b_n m + g_n  (g in [0, m)),
///   x = 2 c_r m phi (b_tau - b_n) + varphi(g_tau) - varphi(g_n) + v r m^2.
inline double cazac_xcorr_bound(const CazacParams& params, std::int64_t tau, double v, std::int64_t n)
{
    params.validate();
    const std::int64_t m = params.m;
    const std::int64_t rm = params.coset_length();
    const double shift = v * static_cast<double>(params.length());
    const double shift_whole = std::nearbyint(shift);
    double total = 0.0;
    for (std::int64_t gamma = 0; gamma < m; ++gamma) {
        const std::int64_t b_tau = floor_div(gamma - tau, m);
        const std::int64_t g_tau = gamma - tau - b_tau * m;
        const std::int64_t b_n = floor_div(gamma - n, m);
        const std::int64_t g_n = gamma - n - b_n * m;
        const std::int64_t beta_term =
            centered_mod(params.twice_cr() * m % rm * params.phi % rm * centered_mod(b_tau - b_n, rm), rm);
        const std::int64_t code =
            beta_term + params.varphi_at(g_tau) - params.varphi_at(g_n) + static_cast<std::int64_t>(shift_whole);
        total += dirichlet_magnitude(code, shift - shift_whole, rm);
    }
    return total;
}

} // namespace cazac
