// Experiment runners: feasible-region tables, CAZAC design vs random parameters,
// PSLR across Doppler, ROC comparisons and f(x) curves, driven by a JSON config.
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cazac/correlation.hpp"
#include "cazac/design.hpp"
#include "cazac/io.hpp"
#include "cazac/parallel.hpp"
#include "cazac/radar.hpp"
#include "cazac/rng.hpp"
#include "cazac/sequence.hpp"

namespace cazac {

inline constexpr std::string_view toolkit_version = "1.0.0";
inline constexpr int config_schema_version = 1;

/// Full-scale and desk-scale lengths. Desk runs stretch T_s by full/desk length so
/// v_bar N and the RoI-to-N ratio match full scale.
namespace scale {
inline constexpr std::int64_t full_zc_length = 35537;
inline constexpr std::int64_t desk_zc_length = 1019;
inline constexpr std::int64_t full_r = 1009;
inline constexpr std::int64_t desk_r = 101;
inline constexpr std::int64_t cazac_m = 3;
inline constexpr std::int64_t full_repetitions = 100;
inline constexpr std::int64_t desk_repetitions = 16;
inline constexpr int full_trials = 100;
inline constexpr int desk_trials = 20;
inline constexpr int full_random = 10000;
inline constexpr int desk_random = 100;
} // namespace scale

enum class ExperimentId { feasible_region, cazac_pslr, pslr_vs_doppler, roc, cazac_roc, fx_curve };

inline std::string_view to_string(ExperimentId id)
{
    switch (id) {
    case ExperimentId::feasible_region: return "feasible_region";
    case ExperimentId::cazac_pslr: return "cazac_pslr";
    case ExperimentId::pslr_vs_doppler: return "pslr_vs_doppler";
    case ExperimentId::roc: return "roc";
    case ExperimentId::cazac_roc: return "cazac_roc";
    case ExperimentId::fx_curve: return "fx_curve";
    }
    return "unknown";
}

inline ExperimentId parse_experiment_id(std::string_view name)
{
    for (auto id : {ExperimentId::feasible_region, ExperimentId::cazac_pslr, ExperimentId::pslr_vs_doppler,
                    ExperimentId::roc, ExperimentId::cazac_roc, ExperimentId::fx_curve}) {
        if (to_string(id) == name) return id;
    }
    throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

struct ExperimentGrids {
    std::vector<double> sensing_range_m;
    std::vector<double> pslr_threshold_db;
    std::vector<double> speed_limit_mps;
    std::vector<double> velocity_mps;
    std::vector<double> gamma;
    std::vector<double> x;
};

inline std::vector<double> linear_grid(double first, double last, double step)
{
    std::vector<double> grid;
    const auto count = static_cast<std::int64_t>(std::llround((last - first) / step));
    for (std::int64_t i = 0; i <= count; ++i) grid.push_back(first + static_cast<double>(i) * step);
    return grid;
}

/// 10^(e/10) for e = first_db .. last_db in step_db increments.
inline std::vector<double> power_grid(double first_db, double last_db, double step_db)
{
    auto grid = linear_grid(first_db, last_db, step_db);
    for (double& g : grid) g = power_from_db(g);
    return grid;
}

struct ExperimentConfig {
    ExperimentId experiment = ExperimentId::feasible_region;
    bool desk = false;
    std::optional<std::uint64_t> seed;
    std::string output_dir = ".";
    SensingRequirements physical;
    std::int64_t length = scale::full_zc_length;
    std::int64_t r = scale::full_r;
    std::int64_t m = scale::cazac_m;
    std::int64_t repetitions = scale::full_repetitions;
    std::int64_t fft_factor = 4;
    double snr_db = -5.0;
    bool noiseless = false;
    int trials = scale::full_trials;
    int n_random = scale::full_random;
    std::size_t targets_per_trial = 4;
    unsigned threads = 0;
    bool plot = false;
    ExperimentGrids grids;
    std::set<std::string> explicit_keys; ///< top-level keys given in the JSON

    /// Time-axis stretch applied to T_s for ZC experiments (1 at full scale).
    [[nodiscard]] double zc_time_scale() const
    {
        return desk ? static_cast<double>(scale::full_zc_length) / static_cast<double>(scale::desk_zc_length) : 1.0;
    }
    [[nodiscard]] double cazac_time_scale() const
    {
        const double full = static_cast<double>(scale::full_r * scale::cazac_m * scale::cazac_m);
        const double desk_len = static_cast<double>(scale::desk_r * scale::cazac_m * scale::cazac_m);
        return desk ? full / desk_len : 1.0;
    }
    [[nodiscard]] SensingRequirements zc_requirements() const
    {
        SensingRequirements req = physical;
        req.sampling_period_s *= zc_time_scale();
        return req;
    }
    [[nodiscard]] SensingRequirements cazac_requirements() const
    {
        SensingRequirements req = physical;
        req.sampling_period_s *= cazac_time_scale();
        return req;
    }

    [[nodiscard]] std::uint64_t require_seed() const
    {
        if (!seed) throw ConfigError("a seed is required for experiments");
        return *seed;
    }

    /// Switches to the desk presets, keeping any value the config set explicitly.
    void apply_desk_scale()
    {
        desk = true;
        if (!explicit_keys.contains("length")) length = scale::desk_zc_length;
        if (!explicit_keys.contains("r")) r = scale::desk_r;
        if (!explicit_keys.contains("m")) m = scale::cazac_m;
        if (!explicit_keys.contains("repetitions")) repetitions = scale::desk_repetitions;
        if (!explicit_keys.contains("trials")) trials = scale::desk_trials;
        if (!explicit_keys.contains("n_random")) n_random = scale::desk_random;
    }

    /// Fills empty grids with per-experiment defaults.
    void apply_default_grids()
    {
        auto& g = grids;
        if (g.sensing_range_m.empty()) {
            g.sensing_range_m = experiment == ExperimentId::feasible_region ? linear_grid(5, 60, 5)
                                                                              : linear_grid(10, 50, 10);
        }
        if (g.pslr_threshold_db.empty()) g.pslr_threshold_db = linear_grid(0, 40, 2);
        if (g.speed_limit_mps.empty()) {
            g.speed_limit_mps = experiment == ExperimentId::feasible_region ? std::vector<double>{10, 20, 30}
                                                                              : std::vector<double>{physical.speed_limit_mps};
        }
        if (g.velocity_mps.empty()) {
            g.velocity_mps = linear_grid(-physical.speed_limit_mps, physical.speed_limit_mps,
                                         physical.speed_limit_mps / 10.0);
        }
        if (g.gamma.empty()) g.gamma = power_grid(0, 45, 1);
        if (g.x.empty()) g.x = linear_grid(-20, 20, 0.05);
    }

    void validate() const
    {
        try {
            physical.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        auto monotone = [](const std::vector<double>& grid, std::string_view name, bool increasing_only) {
            if (grid.empty()) throw ConfigError("grid '" + std::string(name) + "' is empty");
            bool up = true;
            bool down = true;
            for (std::size_t i = 1; i < grid.size(); ++i) {
                up = up && grid[i] > grid[i - 1];
                down = down && grid[i] < grid[i - 1];
            }
            if (!(up || (down && !increasing_only)))
                throw ConfigError("grid '" + std::string(name) + "' must be strictly " +
                                  (increasing_only ? "increasing" : "monotone"));
            for (double v : grid) {
                if (!std::isfinite(v)) throw ConfigError("grid '" + std::string(name) + "' has a non-finite value");
            }
        };
        monotone(grids.sensing_range_m, "sensing_range_m", false);
        monotone(grids.pslr_threshold_db, "pslr_threshold_db", false);
        monotone(grids.speed_limit_mps, "speed_limit_mps", false);
        monotone(grids.velocity_mps, "velocity_mps", false);
        monotone(grids.gamma, "gamma", true);
        monotone(grids.x, "x", false);
        for (double d : grids.sensing_range_m) {
            if (!(d > 0)) throw ConfigError("sensing ranges must be > 0");
        }
        for (double p : grids.pslr_threshold_db) {
            if (!(p >= 0)) throw ConfigError("PSLR thresholds must be >= 0 dB");
        }
        for (double u : grids.speed_limit_mps) {
            if (!(u >= 0)) throw ConfigError("speed limits must be >= 0");
        }
        for (double u : grids.velocity_mps) {
            if (std::abs(u) > physical.speed_limit_mps)
                throw ConfigError("velocity grid exceeds the speed limit");
        }
        for (double g : grids.gamma) {
            if (!(g >= 0)) throw ConfigError("gamma values must be >= 0");
        }
        if (length < 3 || length % 2 == 0) throw ConfigError("length must be odd and >= 3");
        if (r < 2) throw ConfigError("r must be >= 2");
        if (!is_square_free(m)) throw ConfigError("m must be square-free");
        if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
        if (fft_factor < 1) throw ConfigError("fft_factor must be >= 1");
        if (trials < 1) throw ConfigError("trials must be >= 1");
        if (n_random < 1) throw ConfigError("n_random must be >= 1");
        if (targets_per_trial < 1) throw ConfigError("targets_per_trial must be >= 1");
    }
};

inline io::json grids_to_json(const ExperimentGrids& g)
{
    return io::json{{"sensing_range_m", g.sensing_range_m}, {"pslr_threshold_db", g.pslr_threshold_db},
                    {"speed_limit_mps", g.speed_limit_mps}, {"velocity_mps", g.velocity_mps},
                    {"gamma", g.gamma},                     {"x", g.x}};
}

/// Fully resolved config; loading it back reproduces the same run.
inline io::json config_to_json(const ExperimentConfig& c)
{
    io::json j{{"schema_version", config_schema_version},
               {"experiment", std::string(to_string(c.experiment))},
               {"scale", c.desk ? "desk" : "full"},
               {"output_dir", c.output_dir},
               {"physical", io::requirements_to_json(c.physical)},
               {"length", c.length},
               {"r", c.r},
               {"m", c.m},
               {"repetitions", c.repetitions},
               {"fft_factor", c.fft_factor},
               {"snr_db", c.snr_db},
               {"noiseless", c.noiseless},
               {"trials", c.trials},
               {"n_random", c.n_random},
               {"targets_per_trial", c.targets_per_trial},
               {"threads", c.threads},
               {"plot", c.plot},
               {"grids", grids_to_json(c.grids)}};
    if (c.seed) j["seed"] = *c.seed;
    return j;
}

/// Parses a config object, or the "config" member of a run manifest.
inline ExperimentConfig config_from_json(const io::json& input)
{
    const io::json& j = input.contains("manifest_version") ? input.at("config") : input;
    io::check_keys(j, {"schema_version", "experiment", "scale", "seed", "output_dir", "physical", "length", "r", "m",
                       "repetitions", "fft_factor", "snr_db", "noiseless", "trials", "n_random",
                       "targets_per_trial", "threads", "plot", "grids"},
                   "config");
    if (!j.contains("schema_version")) throw ConfigError("config: missing schema_version");
    if (j.at("schema_version") != config_schema_version)
        throw ConfigError("config: unsupported schema_version " + j.at("schema_version").dump());
    if (!j.contains("experiment")) throw ConfigError("config: missing experiment");

    ExperimentConfig c;
    for (const auto& [key, value] : j.items()) c.explicit_keys.insert(key);
    std::string experiment;
    io::read_field(j, "experiment", experiment);
    c.experiment = parse_experiment_id(experiment);
    if (j.contains("seed")) {
        std::uint64_t seed = 0;
        io::read_field(j, "seed", seed);
        c.seed = seed;
    }
    io::read_field(j, "output_dir", c.output_dir);
    if (j.contains("physical")) c.physical = io::requirements_from_json(j.at("physical"));
    io::read_field(j, "length", c.length);
    io::read_field(j, "r", c.r);
    io::read_field(j, "m", c.m);
    io::read_field(j, "repetitions", c.repetitions);
    io::read_field(j, "fft_factor", c.fft_factor);
    io::read_field(j, "snr_db", c.snr_db);
    io::read_field(j, "noiseless", c.noiseless);
    io::read_field(j, "trials", c.trials);
    io::read_field(j, "n_random", c.n_random);
    io::read_field(j, "targets_per_trial", c.targets_per_trial);
    io::read_field(j, "threads", c.threads);
    io::read_field(j, "plot", c.plot);
    if (j.contains("grids")) {
        const auto& g = j.at("grids");
        io::check_keys(g, {"sensing_range_m", "pslr_threshold_db", "speed_limit_mps", "velocity_mps", "gamma", "x"},
                       "grids");
        io::read_field(g, "sensing_range_m", c.grids.sensing_range_m);
        io::read_field(g, "pslr_threshold_db", c.grids.pslr_threshold_db);
        io::read_field(g, "speed_limit_mps", c.grids.speed_limit_mps);
        io::read_field(g, "velocity_mps", c.grids.velocity_mps);
        io::read_field(g, "gamma", c.grids.gamma);
        io::read_field(g, "x", c.grids.x);
    }
    std::string scale_name = "full";
    io::read_field(j, "scale", scale_name);
    if (scale_name == "desk") c.apply_desk_scale();
    else if (scale_name != "full") throw ConfigError("config: scale must be 'full' or 'desk'");
    c.apply_default_grids();
    c.validate();
    return c;
}

/// Numeric table with '#' comment lines; the CSV form is the source of truth for plots.
struct Table {
    std::string name;
    std::vector<std::string> comments;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    [[nodiscard]] std::size_t column(std::string_view label) const
    {
        const auto it = std::find(columns.begin(), columns.end(), label);
        if (it == columns.end()) throw std::invalid_argument("table '" + name + "' has no column " + std::string(label));
        return static_cast<std::size_t>(it - columns.begin());
    }
    [[nodiscard]] std::vector<double> values(std::string_view label) const
    {
        const std::size_t c = column(label);
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& row : rows) out.push_back(row[c]);
        return out;
    }
};

inline void write_table_csv(std::ostream& out, const Table& table)
{
    for (const auto& c : table.comments) out << "# " << c << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << io::format_double(row[i]);
        out << '\n';
    }
}

inline Table read_table_csv(std::istream& in, std::string name = "table")
{
    Table table;
    table.name = std::move(name);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.front() == '#') {
            table.comments.push_back(line.size() > 2 ? line.substr(2) : "");
            continue;
        }
        const auto fields = io::split_csv_line(line);
        if (table.columns.empty()) {
            for (auto f : fields) table.columns.emplace_back(f);
            continue;
        }
        if (fields.size() != table.columns.size())
            throw std::invalid_argument("malformed table: row width differs from header");
        std::vector<double> row;
        for (auto f : fields) row.push_back(io::parse_double(f));
        table.rows.push_back(std::move(row));
    }
    if (table.columns.empty()) throw std::invalid_argument("malformed table: no header");
    return table;
}

inline Table roc_table(const RocCurve& curve)
{
    Table t;
    t.name = "roc_" + curve.label;
    t.columns = {"gamma", "false_alarm_rate", "detection_rate", "trials", "seed"};
    for (const auto& p : curve.points) {
        t.rows.push_back({p.gamma, p.false_alarm_rate, p.detection_rate, static_cast<double>(curve.trials),
                          static_cast<double>(curve.seed)});
    }
    return t;
}

struct ExperimentResult {
    std::vector<Table> tables;
    std::vector<RocCurve> curves;
    io::json summary = io::json::object();
};

// ---- feasible region ----

inline ExperimentResult run_feasible_region(const ExperimentConfig& config)
{
    const auto& g = config.grids;
    Table table;
    table.name = "feasible_region";
    table.columns = {"P_r_db", "D_r", "u_max", "p_lower", "p_upper", "feasible", "root_min", "root_max"};
    table.comments = {"N=" + std::to_string(config.length) +
                          ", P_r in amplitude dB (20 log10), p_lower/p_upper are the continuous bounds",
                      "root_min/root_max are the extreme admissible root indices (nan when infeasible)"};
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const auto base = config.zc_requirements();

    std::map<std::pair<double, double>, double> upper_seen;
    for (double u : g.speed_limit_mps) {
        for (double d : g.sensing_range_m) {
            for (double pr : g.pslr_threshold_db) {
                SensingRequirements req = base;
                req.speed_limit_mps = u;
                req.sensing_range_m = d;
                req.pslr_threshold = amplitude_from_db(pr);
                std::vector<double> row{pr, d, u, nan, nan, 0.0, nan, nan};
                try {
                    const auto range = zc_feasible_range(config.length, req);
                    row[3] = range.lower_bound;
                    row[4] = range.highest_below_upper ? range.upper_bound : nan;
                    row[5] = range.empty() ? 0.0 : 1.0;
                    if (!range.empty()) {
                        row[6] = static_cast<double>(range.roots.front());
                        row[7] = static_cast<double>(range.roots.back());
                    }
                } catch (const std::domain_error&) {
                    // v_bar N >= 1 or zero Doppler: no design at this point
                }
                table.rows.push_back(row);
                const auto key = std::make_pair(pr, d);
                if (!std::isnan(row[4])) {
                    const auto [it, inserted] = upper_seen.emplace(key, row[4]);
                    if (!inserted && it->second != row[4])
                        throw std::runtime_error("feasible_region: upper bound changed with the speed limit");
                }
            }
        }
    }
    ExperimentResult result;
    result.tables.push_back(std::move(table));
    return result;
}

// ---- CAZAC design vs random parameters ----

/// Full-family parameters: phi uniform over units mod r, varphi(gamma) = pi(gamma) + m U[0, r-1]
/// for a uniform permutation pi of Z_m.
inline CazacParams random_full_family(std::int64_t r, std::int64_t m, const CounterRng& rng, std::uint64_t draw)
{
    CazacParams params;
    params.r = r;
    params.m = m;
    std::vector<std::int64_t> units;
    for (std::int64_t phi = 1; phi < r; ++phi) {
        if (coprime(phi, r)) units.push_back(phi);
    }
    auto pick = [&](std::uint64_t lane, std::size_t count) {
        return static_cast<std::size_t>(rng.uniform(RngStream::parameters, draw, 0, lane) * static_cast<double>(count));
    };
    params.phi = units[std::min(pick(0, units.size()), units.size() - 1)];
    std::vector<std::int64_t> perm(static_cast<std::size_t>(m));
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = perm.size(); i > 1; --i) {
        std::swap(perm[i - 1], perm[std::min(pick(i, i), i - 1)]);
    }
    std::vector<std::int64_t> table(static_cast<std::size_t>(m));
    for (std::size_t gamma = 0; gamma < table.size(); ++gamma) {
        const auto offset = static_cast<std::int64_t>(std::min(pick(100 + gamma, static_cast<std::size_t>(r)),
                                                                static_cast<std::size_t>(r - 1)));
        table[gamma] = perm[gamma] + m * offset;
    }
    params.varphi = std::move(table);
    return params;
}

struct RandomBaseline {
    std::vector<CazacParams> params;
    std::vector<double> pslr_db;
    double mean_db = 0.0;
};

inline RandomBaseline random_cazac_baseline(std::int64_t r, std::int64_t m, const SensingRequirements& req, int count,
                                            std::uint64_t seed, unsigned threads)
{
    const double v_bar = max_normalized_doppler(req);
    const double n_max = roi_lag_bound(req);
    const CounterRng rng(seed);
    RandomBaseline base;
    base.params.resize(static_cast<std::size_t>(count));
    base.pslr_db.resize(static_cast<std::size_t>(count));
    parallel_for(base.params.size(), [&](std::size_t i) {
        base.params[i] = random_full_family(r, m, rng, i);
        base.pslr_db[i] = doppler_pslr(generate_cazac(base.params[i]), v_bar, n_max).db();
    }, threads);
    base.mean_db = std::accumulate(base.pslr_db.begin(), base.pslr_db.end(), 0.0) / count;
    return base;
}

inline ExperimentResult run_cazac_pslr(const ExperimentConfig& config)
{
    const std::uint64_t seed = config.require_seed();
    Table table;
    table.name = "cazac_pslr";
    table.columns = {"D_r", "u_max", "pslr_designed_db", "pslr_average_db", "pslr_restricted_average_db", "phi", "a"};
    table.comments = {"r=" + std::to_string(config.r) + ", m=" + std::to_string(config.m) +
                          ", random baseline: " + std::to_string(config.n_random) + " full-family draws per point",
                      "averages are means of PSLR in dB; restricted average is over the searched (phi, a) grid"};
    const auto base = config.cazac_requirements();
    std::uint64_t point = 0;
    for (double u : config.grids.speed_limit_mps) {
        for (double d : config.grids.sensing_range_m) {
            SensingRequirements req = base;
            req.speed_limit_mps = u;
            req.sensing_range_m = d;
            const auto search = cazac_search(config.r, config.m, req, {config.threads, true});
            double restricted = 0.0;
            for (const auto& cell : search.grid) restricted += cell.pslr.db();
            restricted /= static_cast<double>(search.grid.size());
            const auto baseline = random_cazac_baseline(config.r, config.m, req, config.n_random,
                                                        CounterRng(seed).derive(point++).seed(), config.threads);
            table.rows.push_back({d, u, search.design.achieved.db(), baseline.mean_db, restricted,
                                  static_cast<double>(search.design.phi), static_cast<double>(search.design.slope)});
        }
    }
    ExperimentResult result;
    result.tables.push_back(std::move(table));
    return result;
}

// ---- PSLR across Doppler ----

inline ExperimentResult run_pslr_vs_doppler(const ExperimentConfig& config)
{
    const std::uint64_t seed = config.require_seed();
    const auto req = config.zc_requirements();
    const auto design = zc_best_root(config.length, req);
    if (!design.feasible) throw std::domain_error("pslr_vs_doppler: no feasible root: " + design.diagnostics);
    const ZcParams p1{config.length, 1};
    const ZcParams designed{config.length, design.root};
    const auto zc1 = generate_zc(p1);
    const auto zcd = generate_zc(designed);
    const auto dzc = generate_dzc(p1);
    const RoI roi{roi_lag_bound(req)};

    const auto& velocities = config.grids.velocity_mps;
    const std::size_t points = velocities.size();
    const auto trials = static_cast<std::size_t>(config.trials);
    // [trial][point][waveform]
    std::vector<double> pslr_db(trials * points * 3);

    parallel_for(trials, [&](std::size_t t) {
        Scenario s;
        s.length = config.length;
        s.snr_db = config.snr_db;
        s.noiseless = config.noiseless;
        s.physical = req;
        s.seed = CounterRng(seed).derive(t).seed(); // noise shared by all waveforms and Doppler points
        for (std::size_t g = 0; g < points; ++g) {
            s.targets = {Target{0.0, velocities[g], {1.0, 0.0}}};
            double* out = &pslr_db[(t * points + g) * 3];
            out[0] = pslr(circular_xcorr(synthesize_echo(s, zc1, 0), zc1), roi).db();
            out[1] = pslr(circular_xcorr(synthesize_echo(s, zcd, 0), zcd), roi).db();
            out[2] = pslr(dzc_receive_chain(synthesize_echo(s, dzc, 0), p1), roi).db();
        }
    }, config.threads);

    Table table;
    table.name = "pslr_vs_doppler";
    table.columns = {"velocity_mps", "doppler", "zc_p1", "zc_designed", "dzc"};
    table.comments = {"N=" + std::to_string(config.length) + ", designed root p=" + std::to_string(design.root) +
                          ", snr_db=" + (config.noiseless ? std::string("inf") : io::format_double(config.snr_db)),
                      "PSLR in amplitude dB over the RoI, mean over " + std::to_string(config.trials) +
                          " trials; dzc measured after differential decode"};
    for (std::size_t g = 0; g < points; ++g) {
        std::vector<double> row{velocities[g], normalized_doppler(velocities[g], req), 0.0, 0.0, 0.0};
        for (std::size_t t = 0; t < trials; ++t) {
            for (std::size_t w = 0; w < 3; ++w) row[2 + w] += pslr_db[(t * points + g) * 3 + w];
        }
        for (std::size_t w = 0; w < 3; ++w) row[2 + w] /= static_cast<double>(trials);
        table.rows.push_back(std::move(row));
    }
    ExperimentResult result;
    result.summary["designed_root"] = design.root;
    result.tables.push_back(std::move(table));
    return result;
}

// ---- ROC ----

inline Scenario roc_scenario(const ExperimentConfig& config, std::int64_t length, const SensingRequirements& req)
{
    Scenario s;
    s.length = length;
    s.repetitions = config.repetitions;
    s.fft_factor = config.fft_factor;
    s.snr_db = config.snr_db;
    s.noiseless = config.noiseless;
    s.seed = config.require_seed();
    s.physical = req;
    return s;
}

inline ExperimentResult collect_rocs(const Scenario& scenario, const std::vector<Waveform>& waveforms,
                                     const ExperimentConfig& config)
{
    ExperimentResult result;
    RocOptions options;
    options.targets_per_trial = config.targets_per_trial;
    options.threads = config.threads;
    for (const auto& w : waveforms) {
        result.curves.push_back(roc_sweep(scenario, w, config.grids.gamma, config.trials, options));
        result.tables.push_back(roc_table(result.curves.back()));
    }
    return result;
}

/// ZC p=1, designed ZC and DZC over shared target draws.
inline ExperimentResult run_roc(const ExperimentConfig& config)
{
    const auto req = config.zc_requirements();
    const auto design = zc_best_root(config.length, req);
    if (!design.feasible) throw std::domain_error("roc: no feasible root: " + design.diagnostics);
    const auto scenario = roc_scenario(config, config.length, req);
    auto result = collect_rocs(scenario,
                               {Waveform::zadoff_chu({config.length, 1}, "zc_p1"),
                                Waveform::zadoff_chu({config.length, design.root}, "zc_designed"),
                                Waveform::differential({config.length, 1}, "dzc")},
                               config);
    result.summary["designed_root"] = design.root;
    return result;
}

/// Designed (phi, a) against the sampled full-family parameter set whose PSLR is closest
/// to the sample mean.
inline ExperimentResult run_cazac_roc(const ExperimentConfig& config)
{
    const auto req = config.cazac_requirements();
    const std::int64_t length = config.r * config.m * config.m;
    const auto search = cazac_search(config.r, config.m, req, {config.threads, false});
    const auto baseline = random_cazac_baseline(config.r, config.m, req, config.n_random,
                                                CounterRng(config.require_seed()).derive(0).seed(), config.threads);
    std::size_t typical = 0;
    for (std::size_t i = 1; i < baseline.pslr_db.size(); ++i) {
        if (std::abs(baseline.pslr_db[i] - baseline.mean_db) < std::abs(baseline.pslr_db[typical] - baseline.mean_db))
            typical = i;
    }
    CazacParams designed;
    designed.r = config.r;
    designed.m = config.m;
    designed.phi = search.design.phi;
    designed.slope = search.design.slope;
    const auto scenario = roc_scenario(config, length, req);
    auto result = collect_rocs(scenario,
                               {Waveform::general(designed, "cazac_designed"),
                                Waveform::general(baseline.params[typical], "cazac_average")},
                               config);
    result.summary["designed"] = {{"phi", designed.phi}, {"a", designed.slope},
                                  {"pslr_db", search.design.achieved.db()}};
    result.summary["average"] = {{"params", baseline.params[typical].describe()},
                                 {"pslr_db", baseline.pslr_db[typical]},
                                 {"sample_mean_pslr_db", baseline.mean_db}};
    return result;
}

// ---- f(x) ----

inline ExperimentResult run_fx_curve(const ExperimentConfig& config)
{
    Table table;
    table.name = "fx_curve";
    table.columns = {"x", "fx", "fx_db"};
    table.comments = {"f(x) = |sin(pi x) / sin(pi x / N)|, N=" + std::to_string(config.length)};
    for (double x : config.grids.x) {
        const double f = fx(x, config.length);
        table.rows.push_back({x, f, amplitude_db(f)});
    }
    ExperimentResult result;
    result.tables.push_back(std::move(table));
    return result;
}

inline ExperimentResult run_experiment_tables(const ExperimentConfig& config)
{
    switch (config.experiment) {
    case ExperimentId::feasible_region: return run_feasible_region(config);
    case ExperimentId::cazac_pslr: return run_cazac_pslr(config);
    case ExperimentId::pslr_vs_doppler: return run_pslr_vs_doppler(config);
    case ExperimentId::roc: return run_roc(config);
    case ExperimentId::cazac_roc: return run_cazac_roc(config);
    case ExperimentId::fx_curve: return run_fx_curve(config);
    }
    throw ConfigError("unknown experiment");
}

/// Lowest false-alarm rate among points with detection rate >= level (inf if none).
inline double roc_fa_at(const RocCurve& curve, double level)
{
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : curve.points) {
        if (p.detection_rate >= level) best = std::min(best, p.false_alarm_rate);
    }
    return best;
}

/// Detection-rate levels 0.5, 0.6, ..., 1.0 at which ROC curves are compared.
inline std::vector<double> roc_levels()
{
    std::vector<double> levels;
    for (int i = 5; i <= 10; ++i) levels.push_back(i / 10.0);
    return levels;
}

/// ROC dominance at matched detection rates: at every level, `better` needs a strictly lower
/// false-alarm rate than `other` to reach it. A level only `better` reaches counts as lower;
/// a level neither reaches, or both reach at zero false alarms, is skipped. Needs one
/// compared level at least.
inline bool roc_dominates(const RocCurve& better, const RocCurve& other)
{
    bool compared = false;
    for (double level : roc_levels()) {
        const double fb = roc_fa_at(better, level);
        const double fo = roc_fa_at(other, level);
        if (std::isinf(fb) && std::isinf(fo)) continue;
        if (fb == 0.0 && fo == 0.0) continue;
        compared = true;
        if (!(fb < fo)) return false;
    }
    return compared;
}

} // namespace cazac
