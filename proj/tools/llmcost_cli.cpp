#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "llmcost/commands.hpp"
#include "llmcost/config.hpp"

namespace {

using namespace llmcost;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Config load_config(const std::string& path) {
    if (path.empty()) return Config{};
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config file " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    out << contents;
    out.close();
    if (!out) throw IoError("cannot write " + path.string());
}

void emit(const CommandOutput& out, const std::string& out_path) {
    if (out_path.empty()) {
        out.table.write(std::cout);
        std::cout.flush();
        if (!std::cout) throw IoError("cannot write to standard output");
    } else {
        write_file(out_path, out.table.str());
        if (out.svg) {
            write_file(std::filesystem::path(out_path).replace_extension(".svg"), *out.svg);
        }
    }
    std::cerr << out.summary;
}

std::vector<ScenarioKind> parse_scenarios(const std::vector<std::string>& names) {
    std::vector<ScenarioKind> out;
    for (const auto& n : names) {
        auto k = scenario_kind_from_string(n);
        if (!k) throw std::invalid_argument("unknown scenario '" + n + "'");
        out.push_back(*k);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Training compute, time and cost estimates for large models"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_path;
    bool svg = false;
    unsigned threads = 1;
    app.add_option("--config", config_path, "Config file (YAML); defaults apply to missing keys");
    app.add_option("--out", out_path, "Write data here instead of standard output (a directory for report)");
    app.add_flag("--svg", svg, "Also write a line chart next to --out");
    app.add_option("--threads", threads, "Worker threads; output does not depend on it")->check(CLI::PositiveNumber);

    std::optional<double> params;
    std::optional<std::int64_t> experts;
    auto* cost = app.add_subcommand("cost", "Compute, GPU-hours and dollars for one model");
    cost->add_option("--params", params, "Parameter count (overrides model.params)");
    cost->add_option("--experts", experts, "MoE experts (overrides model.experts)");

    std::string gpus_spec = "1024:262144:9:geometric";
    std::vector<std::string> variants;
    auto* sweep = app.add_subcommand("sweep", "Time to train vs system size");
    sweep->add_option("--gpus", gpus_spec, "START:END:COUNT[:linear|geometric]")->capture_default_str();
    sweep->add_option("--variant", variants, "baseline and/or optimized (default both)")->delimiter(',');

    std::string years_spec = "2023:2040";
    std::vector<std::string> scenario_names;
    auto* project = app.add_subcommand("project", "Yearly training cost projection");
    project->add_option("--years", years_spec, "START:END")->capture_default_str();
    project->add_option("--scenario", scenario_names, "best_case,best_guess,worst_case,custom")->delimiter(',');

    SimulateOptions sim;
    std::string trace_path;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo failure simulation vs the closed form");
    simulate->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
    simulate->add_option("--reps", sim.replications, "Replications")->capture_default_str()->check(CLI::PositiveNumber);
    simulate->add_option("--variant", sim.variant, "baseline or optimized")->capture_default_str();
    simulate->add_option("--tolerance", sim.tolerance, "Relative tolerance for the analytic check")->capture_default_str();
    simulate->add_option("--trace", trace_path, "Write the event trace of replication 0 to this CSV");

    ReportOptions report;
    auto* rep = app.add_subcommand("report", "All tables plus a narrative summary");
    rep->add_option("--seed", report.simulate.seed, "Random seed")->capture_default_str();
    rep->add_option("--reps", report.simulate.replications, "Replications")->capture_default_str()->check(CLI::PositiveNumber);
    rep->add_option("--gpus", gpus_spec, "START:END:COUNT[:linear|geometric]")->capture_default_str();
    rep->add_option("--years", years_spec, "START:END")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    try {
        const Config config = load_config(config_path);
        if (*cost) {
            emit(cmd_cost(config, params, experts), out_path);
            return kExitOk;
        }
        if (*sweep) {
            const CommandOutput out = cmd_sweep(config, GpuRange::parse(gpus_spec), variants, threads, svg);
            emit(out, out_path);
            return out.exit_code;
        }
        if (*project) {
            const auto kinds = parse_scenarios(scenario_names);
            emit(cmd_project(config, YearRange::parse(years_spec), kinds, svg), out_path);
            return kExitOk;
        }
        if (*simulate) {
            sim.threads = threads;
            emit(cmd_simulate(config, sim), out_path);
            if (!trace_path.empty()) write_file(trace_path, simulate_trace(config, sim, 0).str());
            return kExitOk;
        }
        if (*rep) {
            report.simulate.threads = threads;
            report.gpus = GpuRange::parse(gpus_spec);
            report.years = YearRange::parse(years_spec);
            report.svg = svg;
            const ReportBundle bundle = cmd_report(config, report);
            if (out_path.empty()) {
                for (const auto& [name, contents] : bundle.files) {
                    if (name.ends_with(".svg")) continue;
                    std::cout << "==> " << name << " <==\n" << contents << "\n";
                }
                std::cout.flush();
                if (!std::cout) throw IoError("cannot write to standard output");
            } else {
                std::error_code ec;
                std::filesystem::create_directories(out_path, ec);
                if (ec) throw IoError("cannot create directory " + out_path + ": " + ec.message());
                for (const auto& [name, contents] : bundle.files) {
                    write_file(std::filesystem::path(out_path) / name, contents);
                }
            }
            return bundle.exit_code;
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIoError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
    return kExitOk;
}
