// Runs an experiment and writes its CSV tables, optional SVG plots and a JSON manifest.
#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "cazac/experiments.hpp"
#include "cazac/io.hpp"
#include "cazac/plot.hpp"

namespace cazac {

struct RunOutcome {
    ExperimentResult result;
    std::vector<std::filesystem::path> outputs;
    std::filesystem::path manifest;
};

namespace detail {
inline plot::Series column_series(const Table& t, std::string_view x, std::string_view y, std::string label,
                                  std::string_view filter_column = {}, double filter_value = 0.0)
{
    plot::Series s{std::move(label), {}, {}};
    const std::size_t cx = t.column(x);
    const std::size_t cy = t.column(y);
    const std::size_t cf = filter_column.empty() ? 0 : t.column(filter_column);
    for (const auto& row : t.rows) {
        if (!filter_column.empty() && row[cf] != filter_value) continue;
        s.x.push_back(row[cx]);
        s.y.push_back(row[cy]);
    }
    return s;
}

inline std::vector<std::pair<std::string, std::string>> experiment_plots(const ExperimentConfig& config,
                                                                         const ExperimentResult& result)
{
    std::vector<std::pair<std::string, std::string>> svgs;
    if (config.experiment == ExperimentId::roc || config.experiment == ExperimentId::cazac_roc) {
        std::vector<plot::Series> series;
        for (const auto& c : result.curves) {
            plot::Series s{c.label, {}, {}};
            for (const auto& p : c.points) {
                s.x.push_back(p.false_alarm_rate);
                s.y.push_back(p.detection_rate);
            }
            series.push_back(std::move(s));
        }
        svgs.emplace_back(std::string(to_string(config.experiment)) + ".svg",
                          plot::render_svg(series, {"ROC", "false alarm rate (per cell)", "detection rate", true, false}));
        return svgs;
    }
    const Table& t = result.tables.front();
    switch (config.experiment) {
    case ExperimentId::feasible_region: {
        const double pr = config.grids.pslr_threshold_db.front();
        std::vector<plot::Series> upper{column_series(t, "D_r", "p_upper", "p_upper", "P_r_db", pr)};
        svgs.emplace_back("feasible_region_upper.svg",
                          plot::render_svg(upper, {"Feasible root upper bound", "sensing range D_r (m)", "p"}));
        std::vector<plot::Series> lower;
        const double d = config.grids.sensing_range_m.front();
        const std::size_t cu = t.column("u_max");
        const std::size_t cd = t.column("D_r");
        for (double u : config.grids.speed_limit_mps) {
            plot::Series s{"u_max=" + io::format_double(u) + " m/s", {}, {}};
            for (const auto& row : t.rows) {
                if (row[cu] != u || row[cd] != d) continue;
                s.x.push_back(row[t.column("P_r_db")]);
                s.y.push_back(row[t.column("p_lower")]);
            }
            lower.push_back(std::move(s));
        }
        svgs.emplace_back("feasible_region_lower.svg",
                          plot::render_svg(lower, {"Feasible root lower bound at D_r=" + io::format_double(d) + " m",
                                                   "P_r (dB)", "p"}));
        break;
    }
    case ExperimentId::cazac_pslr: {
        const double u = config.grids.speed_limit_mps.front();
        std::vector<plot::Series> s{column_series(t, "D_r", "pslr_designed_db", "designed", "u_max", u),
                                    column_series(t, "D_r", "pslr_average_db", "random average", "u_max", u)};
        svgs.emplace_back("cazac_pslr.svg", plot::render_svg(s, {"CAZAC PSLR", "sensing range D_r (m)", "PSLR (dB)"}));
        break;
    }
    case ExperimentId::pslr_vs_doppler: {
        std::vector<plot::Series> s{column_series(t, "velocity_mps", "zc_p1", "ZC p=1"),
                                    column_series(t, "velocity_mps", "zc_designed", "ZC designed"),
                                    column_series(t, "velocity_mps", "dzc", "DZC")};
        svgs.emplace_back("pslr_vs_doppler.svg",
                          plot::render_svg(s, {"PSLR vs Doppler", "relative velocity (m/s)", "PSLR (dB)"}));
        break;
    }
    case ExperimentId::fx_curve: {
        std::vector<plot::Series> s{column_series(t, "x", "fx_db", "f(x)")};
        svgs.emplace_back("fx_curve.svg", plot::render_svg(s, {"f(x)", "x", "f(x) (dB)"}));
        break;
    }
    default: break;
    }
    return svgs;
}
} // namespace detail

/// Runs `config` and writes everything under config.output_dir. CSV content depends only
/// on the config, so rerunning a manifest reproduces the CSVs byte for byte.
inline RunOutcome run_experiment(const ExperimentConfig& config)
{
    (void)config.require_seed();
    const auto start = std::chrono::steady_clock::now();
    RunOutcome outcome;
    outcome.result = run_experiment_tables(config);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const std::filesystem::path dir(config.output_dir);
    const std::string id(to_string(config.experiment));
    if (outcome.result.curves.empty()) {
        for (const auto& table : outcome.result.tables) {
            const auto path = dir / (table.name + ".csv");
            auto out = io::open_output(path);
            write_table_csv(out, table);
            outcome.outputs.push_back(path);
        }
    } else {
        const auto combined_path = dir / (id + "_combined.csv");
        auto combined = io::open_output(combined_path);
        combined << "# false_alarm_rate = false cells / cells tested per scan; target draws shared across waveforms\n"
                 << "waveform,gamma,false_alarm_rate,detection_rate,trials,seed\n";
        for (const auto& curve : outcome.result.curves) {
            const auto path = dir / (id + "_" + curve.label + ".csv");
            auto out = io::open_output(path);
            io::write_roc_csv(out, curve);
            outcome.outputs.push_back(path);
            for (const auto& p : curve.points) {
                combined << curve.label << ',' << io::format_double(p.gamma) << ','
                         << io::format_double(p.false_alarm_rate) << ',' << io::format_double(p.detection_rate) << ','
                         << curve.trials << ',' << curve.seed << '\n';
            }
        }
        outcome.outputs.push_back(combined_path);
    }
    if (config.plot) {
        for (const auto& [name, svg] : detail::experiment_plots(config, outcome.result)) {
            const auto path = dir / name;
            auto out = io::open_output(path);
            out << svg;
            outcome.outputs.push_back(path);
        }
    }

    io::json manifest{{"manifest_version", 1},
                      {"toolkit_version", std::string(toolkit_version)},
                      {"experiment", id},
                      {"seed", config.require_seed()},
                      {"wall_time_s", wall},
                      {"config", config_to_json(config)},
                      {"summary", outcome.result.summary}};
    io::json files = io::json::array();
    for (const auto& p : outcome.outputs) files.push_back(p.filename().string());
    manifest["outputs"] = files;
    outcome.manifest = dir / (id + "_manifest.json");
    auto out = io::open_output(outcome.manifest);
    out << manifest.dump(2) << '\n';
    return outcome;
}

} // namespace cazac
