// cazac_tool: design, analyze, simulate, generate and experiment subcommands.
// Exit codes: 0 success, 2 config error, 3 infeasible design, 4 runtime failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cazac/cazac.hpp"

namespace {

using cazac::io::json;

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_infeasible = 3;
constexpr int exit_runtime = 4;

struct InfeasibleDesign : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RequirementFlags {
    double fc_hz = 240e9;
    double ts_s = 0.2e-9;
    double dr_m = 50.0;
    double umax_mps = 20.0;
    double pr_db = 0.0;
    double c_mps = 3.0e8;

    void attach(CLI::App& app)
    {
        app.add_option("--fc-hz", fc_hz, "carrier frequency (Hz)")->capture_default_str();
        app.add_option("--ts-s", ts_s, "sampling period (s)")->capture_default_str();
        app.add_option("--dr-m", dr_m, "sensing range D_r (m)")->capture_default_str();
        app.add_option("--umax-mps", umax_mps, "speed limit (m/s)")->capture_default_str();
        app.add_option("--pr-db", pr_db, "PSLR threshold, amplitude dB (20 log10)")->capture_default_str();
        app.add_option("--c-mps", c_mps, "propagation speed (m/s)")->capture_default_str();
    }

    [[nodiscard]] cazac::SensingRequirements get() const
    {
        cazac::SensingRequirements req;
        req.carrier_hz = fc_hz;
        req.sampling_period_s = ts_s;
        req.sensing_range_m = dr_m;
        req.speed_limit_mps = umax_mps;
        req.pslr_threshold = cazac::amplitude_from_db(pr_db);
        req.propagation_speed = c_mps;
        try {
            req.validate();
        } catch (const std::invalid_argument& e) {
            throw cazac::ConfigError(e.what());
        }
        return req;
    }
};

struct SequenceFlags {
    std::int64_t n = 0;
    std::int64_t p = 1;
    std::int64_t r = 0;
    std::int64_t m = 1;
    std::int64_t phi = 1;
    std::int64_t a = 0;

    void attach_zc(CLI::App& app)
    {
        app.add_option("--n", n, "ZC length N (odd)");
        app.add_option("--p", p, "ZC root index")->capture_default_str();
    }
    void attach_cazac(CLI::App& app)
    {
        app.add_option("--r", r, "CAZAC r");
        app.add_option("--m", m, "CAZAC m (square-free)")->capture_default_str();
        app.add_option("--phi", phi, "CAZAC phi")->capture_default_str();
        app.add_option("--a", a, "CAZAC slope a")->capture_default_str();
    }

    [[nodiscard]] cazac::ZcParams zc() const
    {
        cazac::ZcParams params{n, p};
        try {
            params.validate();
        } catch (const std::invalid_argument& e) {
            throw cazac::ConfigError(e.what());
        }
        return params;
    }
    [[nodiscard]] cazac::CazacParams cazac() const
    {
        cazac::CazacParams params;
        params.r = r;
        params.m = m;
        params.phi = phi;
        params.slope = a;
        try {
            params.validate();
        } catch (const std::invalid_argument& e) {
            throw cazac::ConfigError(e.what());
        }
        return params;
    }
    [[nodiscard]] cazac::ComplexSequence generate(const std::string& kind) const
    {
        if (kind == "zc") return cazac::generate_zc(zc());
        if (kind == "dzc") return cazac::generate_dzc(zc());
        if (kind == "cazac") return cazac::generate_cazac(cazac());
        throw cazac::ConfigError("unknown sequence kind '" + kind + "'");
    }
};

json pslr_json(const cazac::PslrResult& p)
{
    return json{{"pslr_db", p.db()}, {"pslr_linear", p.linear}, {"saturated", p.saturated}, {"worst_lag", p.worst_lag}};
}

void emit(const json& report, const std::string& path)
{
    if (path.empty()) {
        std::cout << report.dump(2) << '\n';
        return;
    }
    auto out = cazac::io::open_output(path);
    out << report.dump(2) << '\n';
}

std::string default_output_dir()
{
    const char* env = std::getenv("CAZAC_OUTPUT_DIR");
    return env != nullptr && *env != '\0' ? std::string(env) : std::string(".");
}

int run(int argc, char** argv)
{
    CLI::App app{"Doppler-resilient CAZAC waveform design and radar simulation toolkit"};
    app.require_subcommand(1);
    std::function<void()> action;

    // design
    auto* design = app.add_subcommand("design", "root index / (phi, a) design");
    design->require_subcommand(1);

    RequirementFlags zc_req;
    SequenceFlags zc_seq;
    std::string zc_out;
    auto* design_zc = design->add_subcommand("zc", "best ZC root index and feasible range");
    zc_req.attach(*design_zc);
    design_zc->add_option("--n", zc_seq.n, "ZC length N (odd)")->required();
    design_zc->add_option("--out", zc_out, "write the JSON report here instead of stdout");
    design_zc->callback([&] {
        action = [&] {
            const auto req = zc_req.get();
            json report{{"length", zc_seq.n}, {"requirements", cazac::io::requirements_to_json(req)}};
            cazac::DesignResult best;
            std::optional<cazac::FeasibleRange> range;
            try {
                best = cazac::zc_best_root(zc_seq.n, req);
                if (max_normalized_doppler(req) > 0.0) range = cazac::zc_feasible_range(zc_seq.n, req);
            } catch (const std::domain_error& e) {
                throw InfeasibleDesign(e.what());
            }
            report["root"] = best.root;
            report["roi_bound"] = best.roi_bound;
            report["achieved"] = pslr_json(best.achieved);
            report["diagnostics"] = best.diagnostics;
            bool feasible = best.feasible && best.achieved.linear >= req.pslr_threshold;
            if (range) {
                report["feasible_range"] = {{"lower_bound", range->threshold_unachievable ? json(nullptr)
                                                                                           : json(range->lower_bound)},
                                            {"upper_bound", range->upper_bound},
                                            {"roots", range->roots},
                                            {"diagnostic", range->diagnostic}};
                feasible = feasible && !range->empty();
            }
            report["feasible"] = feasible;
            emit(report, zc_out);
            if (!feasible) throw InfeasibleDesign("no root index meets the requirements");
        };
    });

    RequirementFlags cz_req;
    SequenceFlags cz_seq;
    std::string cz_out;
    std::string cz_grid;
    unsigned cz_threads = 0;
    auto* design_cazac = design->add_subcommand("cazac", "(phi, a) grid search for r m^2 CAZAC sequences");
    cz_req.attach(*design_cazac);
    design_cazac->add_option("--r", cz_seq.r, "CAZAC r")->required();
    design_cazac->add_option("--m", cz_seq.m, "CAZAC m (square-free)")->capture_default_str();
    design_cazac->add_option("--threads", cz_threads, "worker threads (0 = all cores)");
    design_cazac->add_option("--out", cz_out, "write the JSON report here instead of stdout");
    design_cazac->add_option("--grid-csv", cz_grid, "write the full P(phi, a) grid as CSV");
    design_cazac->callback([&] {
        action = [&] {
            const auto req = cz_req.get();
            cazac::CazacSearchResult found;
            try {
                found = cazac::cazac_search(cz_seq.r, cz_seq.m, req, {cz_threads, !cz_grid.empty()});
            } catch (const std::domain_error& e) {
                throw InfeasibleDesign(e.what());
            } catch (const std::invalid_argument& e) {
                throw cazac::ConfigError(e.what());
            }
            const auto& d = found.design;
            const bool feasible = d.achieved.linear >= req.pslr_threshold;
            json report{{"r", cz_seq.r},
                        {"m", cz_seq.m},
                        {"length", cz_seq.r * cz_seq.m * cz_seq.m},
                        {"requirements", cazac::io::requirements_to_json(req)},
                        {"phi", d.phi},
                        {"a", d.slope},
                        {"achieved", pslr_json(d.achieved)},
                        {"roi_bound", d.roi_bound},
                        {"evaluations", d.evaluations},
                        {"feasible", feasible},
                        {"diagnostics", d.diagnostics}};
            if (!cz_grid.empty()) {
                auto out = cazac::io::open_output(cz_grid);
                out << "phi,a,pslr_linear,pslr_db\n";
                for (const auto& cell : found.grid) {
                    out << cell.phi << ',' << cell.slope << ',' << cazac::io::format_double(cell.pslr.linear) << ','
                        << cazac::io::format_double(cell.pslr.db()) << '\n';
                }
            }
            emit(report, cz_out);
            if (!feasible) throw InfeasibleDesign("best (phi, a) misses the PSLR threshold");
        };
    });

    // analyze
    auto* analyze = app.add_subcommand("analyze", "correlation analysis");
    analyze->require_subcommand(1);

    RequirementFlags an_req;
    SequenceFlags an_seq;
    std::string an_kind = "zc";
    std::int64_t an_tau = 0;
    std::optional<double> an_v;
    std::string an_profile;
    auto* analyze_pslr = analyze->add_subcommand("pslr", "PSLR over the RoI under Doppler");
    an_req.attach(*analyze_pslr);
    an_seq.attach_zc(*analyze_pslr);
    an_seq.attach_cazac(*analyze_pslr);
    analyze_pslr->add_option("--kind", an_kind, "zc | cazac")->check(CLI::IsMember({"zc", "cazac"}));
    analyze_pslr->add_option("--tau", an_tau, "echo delay in samples")->capture_default_str();
    analyze_pslr->add_option("--v", an_v, "normalized Doppler (default: +v_bar of the requirements)");
    analyze_pslr->add_option("--profile-csv", an_profile, "write the range profile (lag, magnitude, magnitude_db)");
    analyze_pslr->callback([&] {
        action = [&] {
            const auto req = an_req.get();
            const auto seq = an_seq.generate(an_kind);
            if (an_tau < 0 || an_tau >= static_cast<std::int64_t>(seq.length()))
                throw cazac::ConfigError("--tau outside [0, N)");
            const double v = an_v.value_or(cazac::max_normalized_doppler(req));
            const auto profile = cazac::circular_xcorr(cazac::apply_doppler_delay(seq, an_tau, v), seq);
            const auto measured = cazac::pslr(profile, cazac::RoI{cazac::roi_lag_bound(req)});
            json report{{"sequence", seq.provenance()},
                        {"doppler", v},
                        {"tau", an_tau},
                        {"peak_lag", profile.peak_index()},
                        {"peak_magnitude", profile.peak_magnitude()},
                        {"roi_bound", cazac::roi_lag_bound(req)},
                        {"measured", pslr_json(measured)}};
            if (an_kind == "zc" && v > 0.0 && v * static_cast<double>(an_seq.n) < 1.0) {
                report["window_pslr_db"] = cazac::amplitude_db(cazac::zc_window_pslr(an_seq.n, an_seq.p, v));
                report["window_holds_roi"] = cazac::detail::window_holds_roi(an_seq.n, an_seq.p, cazac::roi_lag_bound(req));
            }
            if (!an_profile.empty()) {
                auto out = cazac::io::open_output(an_profile);
                cazac::io::write_profile_csv(out, profile);
            }
            emit(report, "");
        };
    });

    std::int64_t fx_n = 0;
    double fx_min = -20.0;
    double fx_max = 20.0;
    double fx_step = 0.05;
    std::string fx_out;
    auto* analyze_fx = analyze->add_subcommand("fx", "sample f(x) = |sin(pi x) / sin(pi x / N)|");
    analyze_fx->add_option("--n", fx_n, "length N")->required();
    analyze_fx->add_option("--x-min", fx_min)->capture_default_str();
    analyze_fx->add_option("--x-max", fx_max)->capture_default_str();
    analyze_fx->add_option("--step", fx_step)->capture_default_str();
    analyze_fx->add_option("--out", fx_out, "CSV path (default stdout)");
    analyze_fx->callback([&] {
        action = [&] {
            if (fx_n < 1 || !(fx_step > 0.0) || !(fx_max >= fx_min))
                throw cazac::ConfigError("analyze fx: need N >= 1, step > 0 and x-max >= x-min");
            cazac::ExperimentConfig config;
            config.experiment = cazac::ExperimentId::fx_curve;
            config.length = fx_n;
            config.grids.x = cazac::linear_grid(fx_min, fx_max, fx_step);
            const auto table = cazac::run_fx_curve(config).tables.front();
            if (fx_out.empty()) {
                cazac::write_table_csv(std::cout, table);
            } else {
                auto out = cazac::io::open_output(fx_out);
                cazac::write_table_csv(out, table);
            }
        };
    });

    // simulate
    auto* simulate = app.add_subcommand("simulate", "radar simulation");
    simulate->require_subcommand(1);
    std::string sim_scenario;
    std::string sim_kind = "zc";
    SequenceFlags sim_seq;
    std::string sim_bin;
    std::string sim_csv;
    std::optional<double> sim_gamma;
    auto* simulate_rdm = simulate->add_subcommand("rdm", "build the range-Doppler map of a scenario");
    simulate_rdm->add_option("--scenario", sim_scenario, "scenario JSON")->required()->check(CLI::ExistingFile);
    simulate_rdm->add_option("--kind", sim_kind, "zc | dzc | cazac")->check(CLI::IsMember({"zc", "dzc", "cazac"}));
    sim_seq.attach_zc(*simulate_rdm);
    sim_seq.attach_cazac(*simulate_rdm);
    simulate_rdm->add_option("--rdm-bin", sim_bin, "write the RDM as RDM1 binary");
    simulate_rdm->add_option("--rdm-csv", sim_csv, "write a per-lag RDM magnitude summary");
    simulate_rdm->add_option("--gamma", sim_gamma, "run detection at this threshold and match against the targets");
    simulate_rdm->callback([&] {
        action = [&] {
            auto scenario = cazac::io::scenario_from_json(cazac::io::read_json_file(sim_scenario));
            if (sim_seq.n == 0) sim_seq.n = scenario.length;
            cazac::Waveform waveform;
            if (sim_kind == "zc") waveform = cazac::Waveform::zadoff_chu(sim_seq.zc(), "zc");
            else if (sim_kind == "dzc") waveform = cazac::Waveform::differential(sim_seq.zc(), "dzc");
            else waveform = cazac::Waveform::general(sim_seq.cazac(), "cazac");
            if (waveform.length() != scenario.length)
                throw cazac::ConfigError("sequence length does not match the scenario length");
            const auto rdm = cazac::simulate_rdm(scenario, waveform);
            if (!sim_bin.empty()) {
                auto out = cazac::io::open_output(sim_bin, true);
                cazac::io::write_rdm_binary(out, rdm);
            }
            if (!sim_csv.empty()) {
                auto out = cazac::io::open_output(sim_csv);
                cazac::io::write_rdm_summary_csv(out, rdm);
            }
            const auto [n, q] = rdm.argmax();
            const cazac::MatchContext ctx{rdm.lags(), rdm.bins(), scenario.physical};
            json report{{"lags", rdm.lags()},
                        {"bins", rdm.bins()},
                        {"argmax", {{"lag", n}, {"bin", q}, {"distance_m", ctx.distance_of(n)},
                                    {"velocity_mps", ctx.velocity_of(q)}}}};
            if (sim_gamma) {
                const auto window = cazac::default_window(scenario);
                auto det = cazac::match_detections(cazac::detect(rdm, *sim_gamma, window), scenario.targets, ctx);
                report["detection"] = {{"gamma", *sim_gamma},
                                       {"detections", det.detections.size()},
                                       {"matched_targets", det.matched_targets},
                                       {"false_cells", det.false_cells},
                                       {"cells_tested", det.cells_tested}};
            }
            emit(report, "");
        };
    });

    // generate
    auto* generate = app.add_subcommand("generate", "write a sequence as CSV or CAZ1 binary");
    generate->require_subcommand(1);
    SequenceFlags gen_seq;
    std::string gen_format = "csv";
    std::string gen_out;
    for (const std::string kind : {"zc", "cazac", "dzc"}) {
        auto* sub = generate->add_subcommand(kind, kind + " sequence");
        if (kind == "cazac") gen_seq.attach_cazac(*sub);
        else gen_seq.attach_zc(*sub);
        sub->add_option("--format", gen_format, "csv | bin")->check(CLI::IsMember({"csv", "bin"}));
        sub->add_option("--out", gen_out, "output path (default stdout, csv only)");
        sub->callback([&, kind] {
            action = [&, kind] {
                const auto seq = gen_seq.generate(kind);
                if (gen_format == "bin") {
                    if (gen_out.empty()) throw cazac::ConfigError("binary output needs --out");
                    auto out = cazac::io::open_output(gen_out, true);
                    cazac::io::write_sequence_binary(out, seq);
                } else if (gen_out.empty()) {
                    cazac::io::write_sequence_csv(std::cout, seq);
                } else {
                    auto out = cazac::io::open_output(gen_out);
                    cazac::io::write_sequence_csv(out, seq);
                }
            };
        });
    }

    // experiment
    auto* experiment = app.add_subcommand("experiment", "reproduce a figure as CSV tables");
    experiment->require_subcommand(1);
    std::string ex_config;
    std::uint64_t ex_seed = 0;
    std::string ex_scale;
    std::string ex_output = default_output_dir();
    std::optional<int> ex_trials;
    std::optional<unsigned> ex_threads;
    std::optional<double> ex_snr;
    bool ex_plot = false;
    const std::vector<std::pair<std::string, cazac::ExperimentId>> experiments{
        {"feasible-region", cazac::ExperimentId::feasible_region},
        {"cazac-pslr", cazac::ExperimentId::cazac_pslr},
        {"pslr-doppler", cazac::ExperimentId::pslr_vs_doppler},
        {"roc", cazac::ExperimentId::roc},
        {"cazac-roc", cazac::ExperimentId::cazac_roc},
        {"fx-curve", cazac::ExperimentId::fx_curve}};
    for (const auto& [name, id] : experiments) {
        auto* sub = experiment->add_subcommand(name, "run the " + std::string(cazac::to_string(id)) + " experiment");
        sub->add_option("--config", ex_config, "experiment config or manifest JSON")->check(CLI::ExistingFile);
        sub->add_option("--seed", ex_seed, "RNG seed (required)")->required();
        sub->add_option("--scale", ex_scale, "full | desk")->check(CLI::IsMember({"full", "desk"}));
        sub->add_option("--output-dir", ex_output, "output directory (default $CAZAC_OUTPUT_DIR or .)");
        sub->add_option("--trials", ex_trials, "Monte-Carlo trials");
        sub->add_option("--threads", ex_threads, "worker threads (0 = all cores)");
        sub->add_option("--snr-db", ex_snr, "receive SNR (dB)");
        sub->add_flag("--plot", ex_plot, "also write SVG plots");
        sub->callback([&, id] {
            action = [&, id] {
                cazac::ExperimentConfig config;
                if (!ex_config.empty()) {
                    config = cazac::config_from_json(cazac::io::read_json_file(ex_config));
                    if (config.experiment != id)
                        throw cazac::ConfigError("config is for experiment '" +
                                                 std::string(cazac::to_string(config.experiment)) + "'");
                } else {
                    config.experiment = id;
                }
                if (ex_scale == "desk" && !config.desk) config.apply_desk_scale();
                if (ex_trials) {
                    config.trials = *ex_trials;
                    config.explicit_keys.insert("trials");
                }
                if (ex_threads) config.threads = *ex_threads;
                if (ex_snr) config.snr_db = *ex_snr;
                if (ex_config.empty() || experiment->get_subcommand(name)->count("--output-dir") > 0)
                    config.output_dir = ex_output;
                config.plot = config.plot || ex_plot;
                config.seed = ex_seed;
                config.apply_default_grids();
                config.validate();
                const auto outcome = cazac::run_experiment(config);
                for (const auto& path : outcome.outputs) std::cout << path.string() << '\n';
                std::cout << outcome.manifest.string() << '\n';
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }
    if (!action) return exit_config;
    action();
    return exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
    try {
        return run(argc, argv);
    } catch (const InfeasibleDesign& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return exit_infeasible;
    } catch (const std::domain_error& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return exit_infeasible;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_runtime;
    }
}
