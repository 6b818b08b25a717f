// SPDX-License-Identifier: Apache-2.0
//
// arisim - active RIS link-level simulator
//
// CLI front end: power/position/element sweeps, a single-run trace dump,
// and the validation suite. Everything is driven by a config file plus a
// few overriding flags; outputs are CSV tables (sweeps) or JSON (traces).

#ifndef ARISIM_CLI_HPP
#define ARISIM_CLI_HPP

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "arisim/validate.hpp"

namespace arisim {

namespace detail {

struct CommonCliArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> realizations;
    std::optional<int> threads;
    std::optional<std::string> modes;
    std::string out;
    std::string long_out;
    std::vector<double> values;
};

inline void add_common_options(CLI::App* cmd, CommonCliArgs& args) {
    cmd->add_option("--config", args.config_path, "configuration file (key = value sections)");
    cmd->add_option("--seed", args.seed, "base seed for the experiment");
    cmd->add_option("--realizations", args.realizations, "Monte Carlo realizations per point");
    cmd->add_option("--threads", args.threads, "worker threads (0 = hardware concurrency)");
    cmd->add_option("--mode", args.modes,
                    "comma list of modes: practical_active,ideal_active,passive");
}

inline SimulationConfig load_base(const CommonCliArgs& args) {
    SimulationConfig cfg = args.config_path.empty()
                               ? SimulationConfig::from_ini(IniFile::parse(""))
                               : SimulationConfig::load(args.config_path);
    if (args.seed) cfg.seed = *args.seed;
    if (args.realizations) cfg.realizations = *args.realizations;
    if (args.threads) cfg.threads = *args.threads;
    if (args.modes) {
        cfg.modes.clear();
        for (const std::string& tok : IniFile::split(*args.modes, ','))
            cfg.modes.push_back(parse_mode(IniFile::trim(tok)));
    }
    return cfg;
}

inline int run_sweep_command(const CommonCliArgs& args, SweepVariable var) {
    ExperimentConfig exp;
    exp.base = load_base(args);
    exp.variable = var;
    if (!args.values.empty()) {
        exp.values = args.values;
    } else {
        switch (var) {
            case SweepVariable::p_bs_dbm: exp.values = exp.base.power_values_dbm; break;
            case SweepVariable::user_center_x_m: exp.values = exp.base.position_values_m; break;
            case SweepVariable::num_elements: exp.values = exp.base.element_values; break;
        }
    }
    const SweepResult result = run_sweep(exp);
    write_results(result, args.out);
    if (!args.long_out.empty()) write_results_long(result, args.long_out);
    std::size_t failed = 0;
    for (const auto& s : result.series) failed += static_cast<std::size_t>(s.n_failed);
    std::cout << "wrote " << args.out << " (" << result.series.size() << " rows";
    if (failed > 0) std::cout << ", " << failed << " failed cells";
    std::cout << ")\n";
    return 0;
}

inline nlohmann::json trace_to_json(const SolveOutput& out, const SystemConfig& cfg) {
    nlohmann::json j;
    j["final"] = {
        {"sum_rate_bps_hz", out.trace.final_evaluated_rate},
        {"design_sum_rate_bps_hz", out.trace.final_design_rate},
        {"converged", out.trace.converged},
        {"outer_iters", out.trace.iters.size()},
        {"bs_power_mw", out.w.total_power()},
    };
    nlohmann::json psi_abs = nlohmann::json::array();
    nlohmann::json psi_arg = nlohmann::json::array();
    for (Eigen::Index l = 0; l < out.refl.psi.size(); ++l) {
        psi_abs.push_back(std::abs(out.refl.psi(l)));
        psi_arg.push_back(std::arg(out.refl.psi(l)));
    }
    j["final"]["psi_abs"] = psi_abs;
    j["final"]["psi_arg"] = psi_arg;
    j["final"]["constraints"] = {
        {"bs_power_slack_mw", out.trace.final_report.bs_power_slack},
        {"elem_power_ok", out.trace.final_report.elem_power_ok},
        {"incident_lower_ok", out.trace.final_report.incident_lower_ok},
        {"incident_upper_ok", out.trace.final_report.incident_upper_ok},
    };

    nlohmann::json iters = nlohmann::json::array();
    for (const auto& it : out.trace.iters) {
        nlohmann::json ji;
        ji["sum_rate_bps_hz"] = it.sum_rate;
        ji["f1"] = it.f1;
        ji["f2"] = it.f2;
        nlohmann::json pin = nlohmann::json::array();
        for (Eigen::Index l = 0; l < it.incident_mw.size(); ++l)
            pin.push_back(mw_to_dbm(it.incident_mw(l)));
        ji["incident_dbm"] = pin;
        nlohmann::json regions = nlohmann::json::array();
        for (const AmpRegion r : it.regions) regions.push_back(static_cast<int>(r));
        ji["amplifier_regions"] = regions;
        ji["bs_power_slack_mw"] = it.report.bs_power_slack;
        ji["min_elem_power_slack_mw"] = it.report.elem_power_slack.minCoeff();
        ji["min_incident_lower_slack_mw"] = it.report.incident_lower_slack.minCoeff();
        ji["min_incident_upper_slack_mw"] = it.report.incident_upper_slack.minCoeff();
        iters.push_back(std::move(ji));
    }
    j["iterations"] = std::move(iters);
    j["config"] = {
        {"num_antennas", cfg.num_antennas},
        {"num_users", cfg.num_users},
        {"num_elements", cfg.num_elements},
        {"p_bs_dbm", mw_to_dbm(cfg.p_bs_mw)},
    };
    return j;
}

inline int run_single_command(const CommonCliArgs& args, const std::string& mode_name_str) {
    SimulationConfig cfg = load_base(args);
    SolverOptions opts = cfg.solver;
    opts.mode = parse_mode(mode_name_str);

    std::mt19937_64 rng(derive_cell_seed(cfg.seed, 0, 0));
    const ChannelSet ch =
        make_channel_set(cfg.geometry, cfg.pathloss, cfg.rician_beta, cfg.system.num_antennas,
                         cfg.system.num_users, cfg.system.num_elements, rng);
    std::mt19937_64 solver_rng(derive_cell_seed(cfg.seed, 0, 0) ^ 0xa5a5a5a5a5a5a5a5ull);
    const SolveOutput out = run_bcd(ch, cfg.system, opts, solver_rng);

    nlohmann::json j = trace_to_json(out, cfg.system);
    j["mode"] = mode_name_str;
    j["seed"] = cfg.seed;
    std::ofstream f(args.out);
    if (!f) throw std::runtime_error("cannot open output file: " + args.out);
    f << j.dump(2) << "\n";
    if (!f) throw std::runtime_error("write failed: " + args.out);
    std::cout << "wrote " << args.out << " (" << out.trace.iters.size() << " iterations, rate "
              << out.trace.final_evaluated_rate << " bits/s/Hz)\n";
    return 0;
}

inline int run_validate_command() {
    const std::vector<CheckResult> checks = run_validation_suite();
    bool all = true;
    for (const auto& c : checks) {
        std::cout << (c.pass ? "PASS" : "FAIL") << "  " << c.name << "  (" << c.detail << ")\n";
        all = all && c.pass;
    }
    return all ? 0 : 1;
}

} // namespace detail

inline int cli_main(int argc, char** argv) {
    CLI::App app{"active RIS joint beamforming simulator"};
    app.require_subcommand(1);

    detail::CommonCliArgs sweep_args[3];
    const char* sweep_names[3] = {"sweep-power", "sweep-position", "sweep-elements"};
    const char* sweep_descs[3] = {"sum-rate vs BS transmit power budget",
                                  "sum-rate vs user cluster position",
                                  "sum-rate vs number of surface elements"};
    const SweepVariable sweep_vars[3] = {SweepVariable::p_bs_dbm,
                                         SweepVariable::user_center_x_m,
                                         SweepVariable::num_elements};
    const char* default_outs[3] = {"sweep_power.csv", "sweep_position.csv",
                                   "sweep_elements.csv"};
    CLI::App* sweep_cmds[3];
    for (int i = 0; i < 3; ++i) {
        sweep_cmds[i] = app.add_subcommand(sweep_names[i], sweep_descs[i]);
        detail::add_common_options(sweep_cmds[i], sweep_args[i]);
        sweep_args[i].out = default_outs[i];
        sweep_cmds[i]->add_option("--out", sweep_args[i].out, "summary CSV path");
        sweep_cmds[i]->add_option("--long-out", sweep_args[i].long_out,
                                  "per-realization CSV path");
        sweep_cmds[i]->add_option("--values", sweep_args[i].values,
                                  "override sweep values (comma separated)")
            ->delimiter(',');
    }

    detail::CommonCliArgs single_args;
    single_args.out = "single_run_trace.json";
    std::string single_mode = "practical_active";
    CLI::App* single = app.add_subcommand("single-run", "one realization with full trace dump");
    detail::add_common_options(single, single_args);
    single->get_option("--mode")->description("solver mode for the run");
    single->add_option("--out", single_args.out, "trace JSON path");

    CLI::App* validate = app.add_subcommand("validate", "run the built-in invariant checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        for (int i = 0; i < 3; ++i)
            if (sweep_cmds[i]->parsed()) return detail::run_sweep_command(sweep_args[i], sweep_vars[i]);
        if (single->parsed()) {
            if (single_args.modes) single_mode = *single_args.modes;
            return detail::run_single_command(single_args, single_mode);
        }
        if (validate->parsed()) return detail::run_validate_command();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

} // namespace arisim

#endif // ARISIM_CLI_HPP
