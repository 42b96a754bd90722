/*
   Copyright 2026 The etcsim Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// etcsim command line: certify, simulate, validate, sweep.
//
// Exit codes: 0 ok / feasible, 1 invalid input or failed assumptions,
// 2 infeasible, 3 divergent series, 4 validation failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "etcsim/analytic.hpp"
#include "etcsim/certify.hpp"
#include "etcsim/config.hpp"
#include "etcsim/csv.hpp"
#include "etcsim/sim.hpp"
#include "etcsim/validate.hpp"

namespace fs = std::filesystem;
using namespace etcsim;

namespace {

enum Exit { kOk = 0, kInvalid = 1, kInfeasible = 2, kDivergent = 3, kValidation = 4 };

constexpr double kObjectiveSlack = 0.10;
constexpr std::uint64_t kSweepSeedStride = 0x9E3779B97F4A7C15ull;

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

AssumptionReport assumptions(const RunConfig& cfg)
{
    return std::visit(
        [&](const auto& sys) { return validate_assumptions(sys, cfg.spec, cfg.channel); },
        cfg.system);
}

bool assumption_gate(const RunConfig& cfg)
{
    const auto rep = assumptions(cfg);
    if (const auto* bad = rep.first_failure()) {
        std::cerr << "error: assumption '" << bad->name << "' fails (value " << fmt(bad->value)
                  << ")\n";
        return false;
    }
    return true;
}

void ensure_dir(const std::string& dir)
{
    if (!dir.empty()) fs::create_directories(dir);
}

std::string join(const std::string& dir, const std::string& file)
{
    return dir.empty() ? file : (fs::path(dir) / file).string();
}

template <typename Writer, typename Value>
void write_csv(const std::string& path, Writer writer, const Value& value)
{
    std::ostringstream ss;
    writer(ss, value);
    write_text_file(path, ss.str());
}

int cmd_certify(const std::string& config, int bcal_max, const std::string& out_dir)
{
    const auto cfg = build_run_config(load_config_file(config));
    if (!assumption_gate(cfg)) return kInvalid;

    const auto report = certify(cfg.gains(), cfg.spec, cfg.channel, bcal_max, !cfg.is_vector());
    ensure_dir(out_dir);
    write_csv(join(out_dir, "certify.csv"), write_certify_csv, report);

    std::cout << "B_c              " << fmt(report.B_c) << "\n"
              << "B*               " << fmt(report.B_star) << "\n"
              << "B                " << fmt(report.B) << (report.B_above_B_star ? " (> B*)" : " (<= B*)")
              << "\n"
              << "script_G(D)      " << fmt(report.G_at_D) << " at D = " << report.D << "\n"
              << "largest D        "
              << (report.feasible_D_max ? std::to_string(*report.feasible_D_max) : "none") << "\n"
              << "Bcal             " << (report.Bcal ? std::to_string(*report.Bcal) : "none") << "\n"
              << "fraction bound   "
              << (report.fraction_bound ? fmt(*report.fraction_bound) : "none") << "\n"
              << "periodic T_max   "
              << (report.periodic_T_max ? std::to_string(*report.periodic_T_max) : "none") << "\n"
              << "feasible         " << (report.feasible ? "yes" : "no") << "\n";
    if (!report.smaller_D_consistent) {
        std::cout << "warning: a horizon smaller than D is not admissible\n";
    }
    return report.feasible ? kOk : kInfeasible;
}

void print_ensemble_summary(const RunConfig& cfg, const EnsembleStats& stats)
{
    const auto obj = objective_check(stats, cfg.spec, cfg.x0_sq(), kObjectiveSlack);
    std::cout << "policy           " << to_string(cfg.policy.kind) << "\n"
              << "runs x horizon   " << stats.n_runs << " x " << stats.horizon << "\n"
              << "objective        " << (obj.pass ? "met" : "violated") << " (worst ratio "
              << fmt(obj.worst_ratio) << " at k = " << obj.worst_k << ", slack "
              << fmt(kObjectiveSlack) << ")\n"
              << "tail fraction    " << fmt(tail_fraction(stats)) << "\n"
              << "transmissions    " << stats.transmissions << "\n"
              << "receptions       " << stats.receptions << "\n";
}

int cmd_simulate(const std::string& config, const std::string& out_dir)
{
    const auto cfg = build_run_config(load_config_file(config));
    check_run_config(cfg);

    const auto stats = run_ensemble(cfg);
    ensure_dir(out_dir);
    write_csv(join(out_dir, "ensemble.csv"), write_ensemble_csv, stats);
    if (cfg.n_runs == 1) {
        write_csv(join(out_dir, "trajectory.csv"), write_trajectory_csv, run_trajectory(cfg, 0));
    }
    print_ensemble_summary(cfg, stats);
    return kOk;
}

int cmd_validate(const std::string& config, const std::string& level)
{
    const auto cfg = build_run_config(load_config_file(config));
    if (!assumption_gate(cfg)) return kInvalid;

    const auto rep = level == "full" ? validate_full(cfg) : validate_quick(cfg);
    for (const auto& c : rep.checks) {
        const char* tag = c.passed ? "PASS" : (c.informational ? "NOTE" : "FAIL");
        std::cout << tag << "  " << c.name << "  " << c.detail << "\n";
    }
    if (const auto* bad = rep.first_failure()) {
        std::cerr << "validation failed: " << bad->name << "\n";
        return kValidation;
    }
    return kOk;
}

int cmd_sweep(const std::string& config, const std::string& param,
              const std::vector<std::string>& values, const std::string& out_dir)
{
    const auto base = load_config_file(config);
    if (!is_numeric_param(param)) {
        std::cerr << "error: unknown parameter path '" << param << "'\n";
        return kInvalid;
    }

    ensure_dir(out_dir);
    std::ostringstream summary;
    summary << "index,value,seed,tail_frac,objective_pass,worst_ratio,transmissions,receptions\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
        auto raw = base;
        set_param(raw, param, values[i]);
        auto cfg = build_run_config(raw);
        cfg.seed += static_cast<std::uint64_t>(i) * kSweepSeedStride;
        check_run_config(cfg);

        const auto stats = run_ensemble(cfg);
        write_csv(join(out_dir, "ensemble_" + std::to_string(i) + ".csv"), write_ensemble_csv,
                  stats);
        const auto obj = objective_check(stats, cfg.spec, cfg.x0_sq(), kObjectiveSlack);
        summary << i << ',' << values[i] << ',' << cfg.seed << ','
                << format_double(tail_fraction(stats)) << ',' << (obj.pass ? "true" : "false")
                << ',' << format_double(obj.worst_ratio) << ',' << stats.transmissions << ','
                << stats.receptions << '\n';
        std::cout << param << " = " << values[i] << ": tail fraction "
                  << fmt(tail_fraction(stats)) << ", objective " << (obj.pass ? "met" : "violated")
                  << "\n";
    }
    write_text_file(join(out_dir, "summary.csv"), summary.str());
    return kOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Event-triggered transmission over packet-drop channels"};
    app.require_subcommand(1);

    std::string config;
    std::string out_dir = ".";
    int bcal_max = 10;
    std::string level = "quick";
    std::string param;
    std::vector<std::string> values;

    auto* certify_cmd = app.add_subcommand("certify", "Feasibility report and certify.csv");
    certify_cmd->add_option("--config", config, "Experiment config")->required();
    certify_cmd->add_option("--bcal-max", bcal_max, "Largest extra idle horizon to try")
        ->check(CLI::NonNegativeNumber);
    certify_cmd->add_option("--out", out_dir, "Output directory");

    auto* simulate_cmd = app.add_subcommand("simulate", "Monte-Carlo ensemble");
    simulate_cmd->add_option("--config", config, "Experiment config")->required();
    simulate_cmd->add_option("--out", out_dir, "Output directory");

    auto* validate_cmd = app.add_subcommand("validate", "Oracle and property checks");
    validate_cmd->add_option("--config", config, "Experiment config")->required();
    validate_cmd->add_option("--level", level, "quick or full")
        ->check(CLI::IsMember({"quick", "full"}));

    auto* sweep_cmd = app.add_subcommand("sweep", "Ensembles over one parameter");
    sweep_cmd->add_option("--config", config, "Experiment config")->required();
    sweep_cmd->add_option("--param", param, "Parameter path, e.g. channel.p")->required();
    sweep_cmd->add_option("--values", values, "Comma-separated values")
        ->required()
        ->delimiter(',');
    sweep_cmd->add_option("--out", out_dir, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kInvalid;
    }

    try {
        if (*certify_cmd) return cmd_certify(config, bcal_max, out_dir);
        if (*simulate_cmd) return cmd_simulate(config, out_dir);
        if (*validate_cmd) return cmd_validate(config, level);
        if (*sweep_cmd) return cmd_sweep(config, param, values, out_dir);
    } catch (const ConfigError& e) {
        std::cerr << config << ": " << e.what() << "\n";
        return kInvalid;
    } catch (const DivergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDivergent;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    }
    return kInvalid;
}
