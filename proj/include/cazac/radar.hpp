// Multi-target radar simulation: echo synthesis over K phase-continuous repetitions,
// range-Doppler map, global-average hypothesis test, truth matching and ROC sweeps.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cazac/correlation.hpp"
#include "cazac/design.hpp"
#include "cazac/fft.hpp"
#include "cazac/parallel.hpp"
#include "cazac/rng.hpp"
#include "cazac/sequence.hpp"
#include "cazac/types.hpp"

namespace cazac {

struct Target {
    double distance_m = 0.0;
    double velocity_mps = 0.0;
    cplx gain{1.0, 0.0};
};

/// One simulation instance. The noise variance per complex sample is 10^(-snr_db/10)
/// relative to the unit-power sequence; `noiseless` (or snr_db = +inf) removes noise.
struct Scenario {
    std::vector<Target> targets;
    double snr_db = -5.0;
    bool noiseless = false;
    std::int64_t length = 0;
    std::int64_t repetitions = 1;
    std::int64_t fft_factor = 4;
    std::uint64_t seed = 0;
    SensingRequirements physical;

    [[nodiscard]] double noise_variance() const
    {
        if (noiseless || (std::isinf(snr_db) && snr_db > 0)) return 0.0;
        return power_from_db(-snr_db);
    }

    [[nodiscard]] std::int64_t doppler_bins() const { return fft_factor * repetitions; }

    void validate() const
    {
        physical.validate();
        if (length < 1) throw std::invalid_argument("scenario: sequence length must be positive");
        if (repetitions < 1) throw std::invalid_argument("scenario: K must be >= 1");
        if (fft_factor < 1) throw std::invalid_argument("scenario: omega must be >= 1");
        for (const auto& t : targets) {
            if (!(t.distance_m >= 0.0)) throw std::invalid_argument("scenario: target distance must be >= 0");
            if (std::abs(t.velocity_mps) > physical.speed_limit_mps)
                throw std::invalid_argument("scenario: target speed exceeds the speed limit");
        }
    }
};

/// Integer round-trip delay, rounded to the nearest sample and wrapped into [0, N).
inline std::int64_t delay_samples(double distance_m, const SensingRequirements& req, std::int64_t length)
{
    const double delay = 2.0 * distance_m / (req.propagation_speed * req.sampling_period_s);
    const auto lag = static_cast<std::int64_t>(std::llround(delay));
    return ((lag % length) + length) % length;
}

/// y_k[n] = sum_l h_l s[<n - tau_l>] exp(j 2 pi (k N + n) v_l) + w_k[n].
/// Noise is keyed by (seed, k, n) so any repetition can be regenerated on its own.
inline ComplexSequence synthesize_echo(const Scenario& scenario, const ComplexSequence& seq, std::int64_t k)
{
    if (static_cast<std::int64_t>(seq.length()) != scenario.length)
        throw std::invalid_argument("synthesize_echo: sequence length does not match the scenario");
    const std::int64_t n_len = scenario.length;
    std::vector<cplx> out(static_cast<std::size_t>(n_len), cplx{});

    for (const Target& target : scenario.targets) {
        const std::int64_t tau = delay_samples(target.distance_m, scenario.physical, n_len);
        const double v = normalized_doppler(target.velocity_mps, scenario.physical);
        for (std::int64_t n = 0; n < n_len; ++n) {
            const double cycles = static_cast<double>(k * n_len + n) * v;
            const double phase = 2.0 * pi * (cycles - std::floor(cycles));
            out[static_cast<std::size_t>(n)] +=
                target.gain * seq[static_cast<std::size_t>((n - tau + n_len) % n_len)] * std::polar(1.0, phase);
        }
    }

    const double variance = scenario.noise_variance();
    if (variance > 0.0) {
        const CounterRng rng(scenario.seed);
        for (std::int64_t n = 0; n < n_len; ++n) {
            out[static_cast<std::size_t>(n)] +=
                rng.complex_normal(RngStream::noise, static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(n), variance);
        }
    }
    return ComplexSequence(std::move(out), SequenceKind::custom, "echo k=" + std::to_string(k));
}

/// Range-Doppler map, row-major over (lag n, Doppler bin q).
class Rdm {
public:
    Rdm() = default;
    Rdm(std::size_t lags, std::size_t bins, std::vector<cplx> values)
        : lags_(lags), bins_(bins), values_(std::move(values))
    {
        if (values_.size() != lags_ * bins_) throw std::invalid_argument("Rdm: value count != N * K0");
    }

    [[nodiscard]] std::size_t lags() const noexcept { return lags_; }
    [[nodiscard]] std::size_t bins() const noexcept { return bins_; }
    [[nodiscard]] const cplx& at(std::size_t n, std::size_t q) const { return values_[n * bins_ + q]; }
    [[nodiscard]] std::span<const cplx> values() const noexcept { return values_; }

    /// Cell with the largest |E|; ties resolve to the first in row-major order.
    [[nodiscard]] std::pair<std::size_t, std::size_t> argmax() const
    {
        std::size_t best = 0;
        double best_power = -1.0;
        for (std::size_t i = 0; i < values_.size(); ++i) {
            const double power = std::norm(values_[i]);
            if (power > best_power) {
                best_power = power;
                best = i;
            }
        }
        return {best / bins_, best % bins_};
    }

private:
    std::size_t lags_ = 0;
    std::size_t bins_ = 0;
    std::vector<cplx> values_;
};

/// E(n, q) = sum_k r_k[n] exp(-j 2 pi k q / K0), computed as a zero-padded FFT per lag.
inline Rdm compute_rdm(std::span<const RangeProfile> profiles, std::size_t bins)
{
    if (profiles.empty()) throw std::invalid_argument("compute_rdm: no profiles");
    if (bins < profiles.size()) throw std::invalid_argument("compute_rdm: K0 must be >= K");
    const std::size_t lags = profiles.front().size();
    for (const auto& p : profiles) {
        if (p.size() != lags) throw std::invalid_argument("compute_rdm: profiles differ in length");
    }
    std::vector<cplx> values(lags * bins);
    std::vector<cplx> column(bins);
    for (std::size_t n = 0; n < lags; ++n) {
        std::fill(column.begin(), column.end(), cplx{});
        for (std::size_t k = 0; k < profiles.size(); ++k) column[k] = profiles[k].values()[n];
        detail::fft_forward(column);
        std::copy(column.begin(), column.end(), values.begin() + static_cast<std::ptrdiff_t>(n * bins));
    }
    return Rdm(lags, bins, std::move(values));
}

/// Signed Doppler bin: bins above K0/2 fold to negative values.
constexpr std::int64_t signed_bin(std::size_t q, std::size_t bins)
{
    const auto qs = static_cast<std::int64_t>(q);
    return 2 * q > bins ? qs - static_cast<std::int64_t>(bins) : qs;
}

/// Normalized Doppler of bin q: signed_bin(q) / (N K0).
inline double bin_doppler(std::size_t q, std::size_t lags, std::size_t bins)
{
    return static_cast<double>(signed_bin(q, bins)) / (static_cast<double>(lags) * static_cast<double>(bins));
}

/// Nearest Doppler bin of a normalized Doppler shift, round(v N K0) mod K0.
inline std::size_t doppler_bin(double v, std::size_t lags, std::size_t bins)
{
    const auto q = std::llround(v * static_cast<double>(lags) * static_cast<double>(bins));
    const auto k0 = static_cast<long long>(bins);
    return static_cast<std::size_t>(((q % k0) + k0) % k0);
}

/// Cells examined by the detector: lags [lag_first, lag_last] and bins with |v(q)| <= v_limit.
struct DetectionWindow {
    std::size_t lag_first = 0;
    std::size_t lag_last = 0;
    double v_limit = 0.0;
};

struct Detection {
    std::size_t lag = 0;
    std::size_t bin = 0;
    double statistic = 0.0;
};

struct DetectionReport {
    std::vector<Detection> detections;
    std::size_t matched_targets = 0;
    std::size_t false_cells = 0;
    std::size_t cells_tested = 0;
};

/// Test statistic |E(n,q)|^2 / theta(n,q) for every cell in the window, where theta is
/// the mean of |E|^2 over all other N K0 - 1 cells (from one precomputed total).
inline std::vector<Detection> cell_statistics(const Rdm& rdm, const DetectionWindow& window)
{
    const std::size_t lags = rdm.lags();
    const std::size_t bins = rdm.bins();
    double total = 0.0;
    for (const cplx& e : rdm.values()) total += std::norm(e);
    const double others = static_cast<double>(lags * bins) - 1.0;

    std::vector<std::size_t> tested_bins;
    for (std::size_t q = 0; q < bins; ++q) {
        if (std::abs(bin_doppler(q, lags, bins)) <= window.v_limit) tested_bins.push_back(q);
    }
    std::vector<Detection> cells;
    const std::size_t last = std::min(window.lag_last, lags - 1);
    for (std::size_t n = window.lag_first; n <= last && lags > 0; ++n) {
        for (std::size_t q : tested_bins) {
            const double power = std::norm(rdm.at(n, q));
            const double theta = others > 0.0 ? std::max(total - power, 0.0) / others : 0.0;
            double stat = 0.0;
            if (theta > 0.0) stat = power / theta;
            else if (power > 0.0) stat = std::numeric_limits<double>::infinity();
            cells.push_back({n, q, stat});
        }
    }
    return cells;
}

/// H1 at every windowed cell whose statistic exceeds gamma.
inline DetectionReport detect(const Rdm& rdm, double gamma, const DetectionWindow& window)
{
    if (!(gamma >= 0.0)) throw std::invalid_argument("detect: gamma must be >= 0");
    DetectionReport report;
    const auto cells = cell_statistics(rdm, window);
    report.cells_tested = cells.size();
    for (const auto& cell : cells) {
        if (cell.statistic > gamma) report.detections.push_back(cell);
    }
    return report;
}

/// Geometry needed to turn (n, q) back into distance and velocity.
struct MatchContext {
    std::size_t lags = 0;
    std::size_t bins = 0;
    SensingRequirements physical;

    [[nodiscard]] double distance_of(std::size_t n) const
    {
        return static_cast<double>(n) * physical.propagation_speed * physical.sampling_period_s / 2.0;
    }
    [[nodiscard]] double velocity_of(std::size_t q) const
    {
        return bin_doppler(q, lags, bins) * physical.propagation_speed /
               (2.0 * physical.carrier_hz * physical.sampling_period_s);
    }
    [[nodiscard]] double distance_tolerance() const
    {
        return physical.propagation_speed * physical.sampling_period_s / 4.0;
    }
    [[nodiscard]] double velocity_tolerance() const
    {
        return physical.propagation_speed / (4.0 * static_cast<double>(lags) * static_cast<double>(bins) *
                                             physical.sampling_period_s * physical.carrier_hz);
    }
    [[nodiscard]] bool matches(std::size_t n, std::size_t q, const Target& target) const
    {
        return std::abs(distance_of(n) - target.distance_m) < distance_tolerance() &&
               std::abs(velocity_of(q) - target.velocity_mps) < velocity_tolerance();
    }
};

/// Each target is counted once no matter how many cells match it; a firing cell that
/// matches no target is one false cell.
inline DetectionReport match_detections(DetectionReport report, std::span<const Target> truth,
                                        const MatchContext& ctx)
{
    std::vector<bool> found(truth.size(), false);
    report.false_cells = 0;
    for (const auto& det : report.detections) {
        bool any = false;
        for (std::size_t l = 0; l < truth.size(); ++l) {
            if (ctx.matches(det.lag, det.bin, truth[l])) {
                found[l] = true;
                any = true;
            }
        }
        if (!any) ++report.false_cells;
    }
    report.matched_targets = static_cast<std::size_t>(std::count(found.begin(), found.end(), true));
    return report;
}

/// DZC receiver: d[n] = y[n] conj(y[<n-1>]) followed by correlation with the base ZC.
inline RangeProfile dzc_receive_chain(const ComplexSequence& received, const ZcParams& base)
{
    if (static_cast<std::int64_t>(received.length()) != base.length)
        throw std::invalid_argument("dzc_receive_chain: length mismatch");
    const std::size_t n_len = received.length();
    std::vector<cplx> decoded(n_len);
    for (std::size_t n = 0; n < n_len; ++n) {
        decoded[n] = received[n] * std::conj(received[(n + n_len - 1) % n_len]);
    }
    return circular_xcorr(decoded, generate_zc(base).samples());
}

/// Two-block DZC decode, d[n] = y[n] conj(y_ref[<n-1>]). With y_ref the first repetition,
/// the intra-block Doppler still cancels while the slow-time phase 2 pi k N v survives.
inline RangeProfile dzc_receive_chain(const ComplexSequence& received, const ComplexSequence& reference_block,
                                      const ZcParams& base)
{
    if (static_cast<std::int64_t>(received.length()) != base.length ||
        reference_block.length() != received.length())
        throw std::invalid_argument("dzc_receive_chain: length mismatch");
    const std::size_t n_len = received.length();
    std::vector<cplx> decoded(n_len);
    for (std::size_t n = 0; n < n_len; ++n) {
        decoded[n] = received[n] * std::conj(reference_block[(n + n_len - 1) % n_len]);
    }
    return circular_xcorr(decoded, generate_zc(base).samples());
}

enum class WaveformKind { zadoff_chu, differential_zc, general_cazac };

/// A transmit waveform together with how its receiver forms range profiles.
struct Waveform {
    WaveformKind kind = WaveformKind::zadoff_chu;
    ZcParams zc;
    CazacParams cazac;
    std::string label;

    static Waveform zadoff_chu(ZcParams params, std::string label)
    {
        return {WaveformKind::zadoff_chu, params, {}, std::move(label)};
    }
    static Waveform differential(ZcParams params, std::string label)
    {
        return {WaveformKind::differential_zc, params, {}, std::move(label)};
    }
    static Waveform general(CazacParams params, std::string label)
    {
        return {WaveformKind::general_cazac, {}, std::move(params), std::move(label)};
    }

    [[nodiscard]] std::int64_t length() const
    {
        return kind == WaveformKind::general_cazac ? cazac.length() : zc.length;
    }

    [[nodiscard]] ComplexSequence transmit() const
    {
        switch (kind) {
        case WaveformKind::differential_zc: return generate_dzc(zc);
        case WaveformKind::general_cazac: return generate_cazac(cazac);
        case WaveformKind::zadoff_chu: break;
        }
        return generate_zc(zc);
    }

    /// Range profiles for all K echoes of one scan.
    [[nodiscard]] std::vector<RangeProfile> receive(std::span<const ComplexSequence> echoes,
                                                    const ComplexSequence& transmitted) const
    {
        std::vector<RangeProfile> profiles;
        profiles.reserve(echoes.size());
        for (const auto& echo : echoes) {
            if (kind == WaveformKind::differential_zc) {
                profiles.push_back(dzc_receive_chain(echo, echoes.front(), zc));
            } else {
                profiles.push_back(circular_xcorr(echo, transmitted));
            }
        }
        return profiles;
    }
};

/// All K echoes of a scenario, correlated and Doppler-transformed.
inline Rdm simulate_rdm(const Scenario& scenario, const Waveform& waveform)
{
    scenario.validate();
    const auto tx = waveform.transmit();
    std::vector<ComplexSequence> echoes;
    echoes.reserve(static_cast<std::size_t>(scenario.repetitions));
    for (std::int64_t k = 0; k < scenario.repetitions; ++k) echoes.push_back(synthesize_echo(scenario, tx, k));
    const auto profiles = waveform.receive(echoes, tx);
    return compute_rdm(profiles, static_cast<std::size_t>(scenario.doppler_bins()));
}

struct RocPoint {
    double gamma = 0.0;
    double false_alarm_rate = 0.0;
    double detection_rate = 0.0;
};

struct RocCurve {
    std::string label;
    std::vector<RocPoint> points;
    int trials = 0;
    std::uint64_t seed = 0;
};

struct RocOptions {
    std::size_t targets_per_trial = 4;
    std::optional<double> v_limit;        ///< default: v_bar + half a Doppler bin
    std::optional<std::size_t> lag_last;  ///< default: round(2 D_r / (c T_s))
    unsigned threads = 0;
};

/// Targets for trial t, drawn from the scenario seed: d ~ U[0, D_r], u ~ U[-u_max, u_max],
/// unit gain with uniform phase. Identical for every waveform evaluated with the same seed.
inline std::vector<Target> draw_targets(const Scenario& scenario, std::uint64_t trial, std::size_t count)
{
    const CounterRng rng = CounterRng(scenario.seed).derive(trial);
    std::vector<Target> targets(count);
    for (std::size_t l = 0; l < count; ++l) {
        const double ud = rng.uniform(RngStream::targets, l, 0);
        const double uu = rng.uniform(RngStream::targets, l, 1);
        const double uh = rng.uniform(RngStream::targets, l, 2);
        targets[l].distance_m = ud * scenario.physical.sensing_range_m;
        targets[l].velocity_mps = (2.0 * uu - 1.0) * scenario.physical.speed_limit_mps;
        targets[l].gain = std::polar(1.0, 2.0 * pi * uh);
    }
    return targets;
}

inline DetectionWindow default_window(const Scenario& scenario, const RocOptions& options = {})
{
    const auto lags = static_cast<double>(scenario.length);
    const auto bins = static_cast<double>(scenario.doppler_bins());
    DetectionWindow window;
    window.lag_first = 0;
    window.lag_last = options.lag_last.value_or(
        static_cast<std::size_t>(std::llround(roi_lag_bound(scenario.physical))));
    window.v_limit = options.v_limit.value_or(max_normalized_doppler(scenario.physical) + 0.5 / (lags * bins));
    return window;
}

/// ROC over a strictly increasing threshold grid. Each trial draws fresh targets, builds
/// the RDM once and scores every threshold against it; rates are averaged over trials.
/// False-alarm rate = false cells / cells tested per scan; detection rate = matched / L.
inline RocCurve roc_sweep(const Scenario& scenario, const Waveform& waveform, std::span<const double> gammas,
                          int trials, const RocOptions& options = {})
{
    if (gammas.empty()) throw std::invalid_argument("roc_sweep: empty threshold grid");
    for (std::size_t i = 1; i < gammas.size(); ++i) {
        if (!(gammas[i] > gammas[i - 1])) throw std::invalid_argument("roc_sweep: threshold grid must increase strictly");
    }
    if (trials < 1) throw std::invalid_argument("roc_sweep: trials must be >= 1");
    if (options.targets_per_trial < 1) throw std::invalid_argument("roc_sweep: need at least one target");
    if (waveform.length() != scenario.length) throw std::invalid_argument("roc_sweep: waveform length != scenario N");
    scenario.validate();

    const auto tx = waveform.transmit();
    const DetectionWindow window = default_window(scenario, options);
    const MatchContext ctx{static_cast<std::size_t>(scenario.length),
                           static_cast<std::size_t>(scenario.doppler_bins()), scenario.physical};

    struct TrialRates {
        std::vector<double> false_alarm;
        std::vector<double> detection;
    };
    std::vector<TrialRates> per_trial(static_cast<std::size_t>(trials));

    parallel_for(per_trial.size(), [&](std::size_t t) {
        Scenario trial = scenario;
        trial.targets = draw_targets(scenario, t, options.targets_per_trial);
        trial.seed = CounterRng(scenario.seed).derive(t).seed();
        const Rdm rdm = simulate_rdm(trial, waveform);
        const auto cells = cell_statistics(rdm, window);

        std::vector<double> best(trial.targets.size(), -1.0);
        std::vector<double> spurious;
        for (const auto& cell : cells) {
            bool any = false;
            for (std::size_t l = 0; l < trial.targets.size(); ++l) {
                if (ctx.matches(cell.lag, cell.bin, trial.targets[l])) {
                    best[l] = std::max(best[l], cell.statistic);
                    any = true;
                }
            }
            if (!any) spurious.push_back(cell.statistic);
        }
        std::sort(spurious.begin(), spurious.end());

        TrialRates& rates = per_trial[t];
        rates.false_alarm.resize(gammas.size());
        rates.detection.resize(gammas.size());
        const double tested = static_cast<double>(cells.size());
        for (std::size_t g = 0; g < gammas.size(); ++g) {
            const auto above = spurious.end() - std::upper_bound(spurious.begin(), spurious.end(), gammas[g]);
            rates.false_alarm[g] = tested > 0.0 ? static_cast<double>(above) / tested : 0.0;
            const auto hits = std::count_if(best.begin(), best.end(), [&](double s) { return s > gammas[g]; });
            rates.detection[g] = static_cast<double>(hits) / static_cast<double>(best.size());
        }
    }, options.threads);

    RocCurve curve;
    curve.label = waveform.label;
    curve.trials = trials;
    curve.seed = scenario.seed;
    curve.points.resize(gammas.size());
    for (std::size_t g = 0; g < gammas.size(); ++g) {
        double fa = 0.0;
        double dr = 0.0;
        for (const auto& rates : per_trial) {
            fa += rates.false_alarm[g];
            dr += rates.detection[g];
        }
        curve.points[g] = {gammas[g], fa / trials, dr / trials};
    }
    return curve;
}

} // namespace cazac
