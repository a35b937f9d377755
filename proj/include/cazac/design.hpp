// Sequence design: root-index feasibility for ZC, best root, direct verification,
// and the (phi, a) grid search for general CAZAC sequences.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cazac/correlation.hpp"
#include "cazac/parallel.hpp"
#include "cazac/sequence.hpp"
#include "cazac/types.hpp"

namespace cazac {

/// Physical setup that drives the design. `pslr_threshold` is a linear amplitude ratio.
struct SensingRequirements {
    double carrier_hz = 240e9;
    double sampling_period_s = 0.2e-9;
    double sensing_range_m = 50.0;
    double speed_limit_mps = 20.0;
    double pslr_threshold = 1.0;
    double propagation_speed = 3.0e8;

    void validate() const
    {
        if (!(carrier_hz > 0.0)) throw std::invalid_argument("carrier frequency must be > 0");
        if (!(sampling_period_s > 0.0)) throw std::invalid_argument("sampling period must be > 0");
        if (!(sensing_range_m > 0.0)) throw std::invalid_argument("sensing range must be > 0");
        if (!(speed_limit_mps >= 0.0)) throw std::invalid_argument("speed limit must be >= 0");
        if (!(propagation_speed > 0.0)) throw std::invalid_argument("propagation speed must be > 0");
        if (!(pslr_threshold > 0.0)) throw std::invalid_argument("PSLR threshold must be > 0");
    }
};

/// v = 2 u f_c T_s / c for a relative speed u.
inline double normalized_doppler(double speed_mps, const SensingRequirements& req)
{
    return 2.0 * speed_mps * req.carrier_hz * req.sampling_period_s / req.propagation_speed;
}

inline double max_normalized_doppler(const SensingRequirements& req)
{
    return normalized_doppler(req.speed_limit_mps, req);
}

/// Largest round-trip delay inside the sensing range, in samples: 2 D_r / (c T_s).
inline double roi_lag_bound(const SensingRequirements& req)
{
    if (!(req.sensing_range_m > 0.0)) throw std::invalid_argument("roi_lag_bound: sensing range must be > 0");
    if (!(req.sampling_period_s > 0.0)) throw std::invalid_argument("roi_lag_bound: sampling period must be > 0");
    return 2.0 * req.sensing_range_m / (req.propagation_speed * req.sampling_period_s);
}

struct DesignResult {
    std::int64_t root = 0; ///< ZC designs
    std::int64_t phi = 0;  ///< CAZAC designs
    std::int64_t slope = 0;
    PslrResult achieved;
    double roi_bound = 0.0;
    bool feasible = false;
    std::string diagnostics;
    std::size_t evaluations = 0;
};

/// Half-width of the sidelobe-free window for root p, A = floor((N-1)/(2p)).
constexpr std::int64_t window_half_width(std::int64_t length, std::int64_t root)
{
    return (length - 1) / (2 * root);
}

struct FeasibleRange {
    std::vector<std::int64_t> roots; ///< ascending, all coprime with N
    double lower_bound = 0.0;        ///< continuous lower bound on p (NaN when unachievable)
    double upper_bound = 0.0;        ///< (N-1-2B) c T_s / (2 D_r) at the largest accepted p
    std::optional<std::int64_t> lowest_above_lower; ///< smallest coprime p meeting the PSLR bound
    std::optional<std::int64_t> highest_below_upper; ///< largest coprime p whose window holds the RoI
    bool threshold_unachievable = false;
    std::string diagnostic;

    [[nodiscard]] bool empty() const { return roots.empty(); }
};

namespace detail {
inline double checked_doppler(std::int64_t length, const SensingRequirements& req, bool require_positive)
{
    req.validate();
    const double v_bar = max_normalized_doppler(req);
    if (require_positive && !(v_bar > 0.0))
        throw std::domain_error("design requires a nonzero maximum Doppler shift");
    if (!(v_bar * static_cast<double>(length) < 1.0)) {
        std::ostringstream msg;
        msg << "assumption violated: v_bar N = " << v_bar * static_cast<double>(length) << " >= 1";
        throw std::domain_error(msg.str());
    }
    return v_bar;
}

inline bool window_holds_roi(std::int64_t length, std::int64_t root, double n_max)
{
    return 2.0 * static_cast<double>(window_half_width(length, root)) >= n_max;
}
} // namespace detail

/// All root indices p with gcd(p, N) = 1 satisfying
///   (N/pi) asin(P_r sin(pi v_bar)) + v_bar N  <=  p  <=  (N - 1 - 2B(p)) c T_s / (2 D_r).
/// The upper inequality is equivalent to 2 floor((N-1)/(2p)) >= 2 D_r / (c T_s) and is
/// tested per candidate because B depends on p.
inline FeasibleRange zc_feasible_range(std::int64_t length, const SensingRequirements& req)
{
    if (length < 3 || length % 2 == 0) throw std::invalid_argument("zc_feasible_range: N must be odd and >= 3");
    if (!(req.pslr_threshold >= 1.0)) throw std::invalid_argument("zc_feasible_range: P_r must be >= 1");
    const double v_bar = detail::checked_doppler(length, req, true);
    const double n_max = roi_lag_bound(req);
    const double n = static_cast<double>(length);

    FeasibleRange range;
    const double arg = req.pslr_threshold * std::sin(pi * v_bar);
    const std::int64_t half = (length - 1) / 2;
    for (std::int64_t p = half; p >= 1; --p) {
        if (coprime(p, length) && detail::window_holds_roi(length, p, n_max)) {
            range.highest_below_upper = p;
            const std::int64_t b = half - window_half_width(length, p) * p;
            range.upper_bound = static_cast<double>(length - 1 - 2 * b) / n_max;
            break;
        }
    }
    if (arg > 1.0) {
        range.threshold_unachievable = true;
        range.lower_bound = std::numeric_limits<double>::quiet_NaN();
        range.diagnostic = "threshold unachievable: P_r sin(pi v_bar) > 1";
        return range;
    }
    range.lower_bound = n / pi * std::asin(arg) + v_bar * n;
    for (std::int64_t p = 1; p <= half; ++p) {
        if (!coprime(p, length) || static_cast<double>(p) < range.lower_bound) continue;
        if (!range.lowest_above_lower) range.lowest_above_lower = p;
        if (detail::window_holds_roi(length, p, n_max)) range.roots.push_back(p);
    }
    std::ostringstream diag;
    diag << "lower bound " << range.lower_bound << ", upper bound " << range.upper_bound;
    if (range.roots.empty()) diag << "; no root index satisfies both bounds";
    range.diagnostic = diag.str();
    return range;
}

/// Builds ZC(N, p), applies the worst-case Doppler +v_bar at tau = 0 and measures the
/// PSLR over the range of interest.
struct RootCheck {
    bool passes = false;
    PslrResult measured;
};

inline RootCheck verify_root(std::int64_t length, std::int64_t root, const SensingRequirements& req)
{
    req.validate();
    const auto seq = generate_zc({length, root});
    const auto echo = apply_doppler_delay(seq, 0, max_normalized_doppler(req));
    const auto profile = circular_xcorr(echo, seq);
    RootCheck check;
    check.measured = pslr(profile, RoI{roi_lag_bound(req)});
    check.passes = check.measured.linear >= req.pslr_threshold;
    return check;
}

/// Largest root index whose sidelobe-free window contains the RoI (and that is coprime
/// with N). Scans down from floor((N-1) c T_s / (2 D_r)).
inline DesignResult zc_best_root(std::int64_t length, const SensingRequirements& req)
{
    if (length < 3 || length % 2 == 0) throw std::invalid_argument("zc_best_root: N must be odd and >= 3");
    const double v_bar = detail::checked_doppler(length, req, false);
    const double n_max = roi_lag_bound(req);
    const double scale = 1.0 / n_max; // c T_s / (2 D_r)
    const std::int64_t half = (length - 1) / 2;

    DesignResult result;
    result.roi_bound = n_max;
    const double start = std::floor(static_cast<double>(length - 1) * scale);
    const std::int64_t first = std::min<std::int64_t>(half, static_cast<std::int64_t>(std::max(0.0, start)));
    for (std::int64_t p = first; p >= 1; --p) {
        ++result.evaluations;
        if (!coprime(p, length) || !detail::window_holds_roi(length, p, n_max)) continue;
        result.root = p;
        result.feasible = true;
        break;
    }

    std::ostringstream diag;
    if (!result.feasible) {
        diag << "infeasible: no root index has 2 floor((N-1)/(2p)) >= " << n_max;
        result.diagnostics = diag.str();
        return result;
    }
    const std::int64_t a = window_half_width(length, result.root);
    const std::int64_t b = half - a * result.root;
    const auto identity = static_cast<std::int64_t>(std::floor(static_cast<double>(length - 1 - 2 * b) * scale));
    if (v_bar > 0.0) {
        const double value = zc_window_pslr(length, result.root, v_bar);
        result.achieved.linear = value;
    } else {
        result.achieved.linear = PslrResult::saturation;
        result.achieved.saturated = true;
    }
    diag << "A=" << a << " B=" << b << " window=" << 2 * a << " roi=" << n_max
         << " floor_identity=" << identity << (identity == result.root ? " (self-consistent)" : " (scan result)");
    result.diagnostics = diag.str();
    return result;
}

struct CazacCandidate {
    std::int64_t phi = 0;
    std::int64_t slope = 0;
    PslrResult pslr;
};

struct CazacSearchOptions {
    unsigned threads = 0;     ///< 0 = hardware concurrency
    bool keep_grid = false;   ///< retain every P(phi, a) for export
};

struct CazacSearchResult {
    DesignResult design;
    std::vector<CazacCandidate> grid; ///< row-major over (phi ascending, a ascending) when kept
};

/// PSLR over the RoI of a sequence correlated against its own +v echo at tau = 0.
inline PslrResult doppler_pslr(const ComplexSequence& seq, double v, double n_max)
{
    const auto echo = apply_doppler_delay(seq, 0, v);
    return pslr(circular_xcorr(echo, seq), RoI{n_max});
}

/// Exhaustive search over phi in [1, r-1] coprime with r and a in [0, floor(r/m)],
/// maximizing P(phi, a); ties go to the smallest phi, then the smallest a.
inline CazacSearchResult cazac_search(std::int64_t r, std::int64_t m, const SensingRequirements& req,
                                      const CazacSearchOptions& options = {})
{
    if (r < 2) throw std::invalid_argument("cazac_search: empty search grid (r must be >= 2)");
    if (!is_square_free(m)) throw std::invalid_argument("cazac_search: m must be square-free");
    const std::int64_t length = r * m * m;
    const double v_bar = detail::checked_doppler(length, req, false);
    const double n_max = roi_lag_bound(req);

    std::vector<std::int64_t> phis;
    for (std::int64_t phi = 1; phi < r; ++phi) {
        if (coprime(phi, r)) phis.push_back(phi);
    }
    const std::int64_t slopes = r / m + 1;
    std::vector<CazacCandidate> grid(phis.size() * static_cast<std::size_t>(slopes));

    parallel_for(grid.size(), [&](std::size_t idx) {
        CazacCandidate& cell = grid[idx];
        cell.phi = phis[idx / static_cast<std::size_t>(slopes)];
        cell.slope = static_cast<std::int64_t>(idx % static_cast<std::size_t>(slopes));
        CazacParams params;
        params.r = r;
        params.m = m;
        params.phi = cell.phi;
        params.slope = cell.slope;
        cell.pslr = doppler_pslr(generate_cazac(params), v_bar, n_max);
    }, options.threads);

    CazacSearchResult out;
    std::size_t best = 0;
    for (std::size_t idx = 1; idx < grid.size(); ++idx) {
        if (grid[idx].pslr.linear > grid[best].pslr.linear) best = idx; // row-major order keeps tie rule
    }
    DesignResult& design = out.design;
    design.phi = grid[best].phi;
    design.slope = grid[best].slope;
    design.achieved = grid[best].pslr;
    design.roi_bound = n_max;
    design.feasible = true;
    design.evaluations = grid.size();
    std::ostringstream diag;
    diag << "evaluated " << grid.size() << " candidates (" << phis.size() << " phi x " << slopes << " a)";
    design.diagnostics = diag.str();
    if (options.keep_grid) out.grid = std::move(grid);
    return out;
}

} // namespace cazac
