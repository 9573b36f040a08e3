#include "llmcost/commands.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <stdexcept>

#include "llmcost/cluster_model.hpp"
#include "llmcost/failure_sim.hpp"
#include "llmcost/philox.hpp"
#include "llmcost/projection.hpp"
#include "llmcost/svg.hpp"

namespace llmcost {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t pos; (pos = s.find(sep, start)) != std::string::npos; start = pos + 1) {
        out.push_back(s.substr(start, pos - start));
    }
    out.push_back(s.substr(start));
    return out;
}

long long parse_integer(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw std::invalid_argument(what + ": '" + s + "' is not an integer");
    return v;
}

std::string printf_string(const char* fmt, ...) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    return buf;
}

std::string status_or_hours(double h) {
    return std::isfinite(h) ? printf_string("%.1f h", h) : std::string("no progress");
}

std::vector<RunConfig> resolve_variants(const Config& config, std::span<const std::string> names) {
    std::vector<RunConfig> out;
    if (names.empty()) return {config.baseline(), config.optimized()};
    for (const auto& n : names) {
        auto v = config.variant(n);
        if (!v) throw std::invalid_argument("unknown config variant '" + n + "' (expected baseline|optimized)");
        out.push_back(*v);
    }
    return out;
}

SimConfig make_sim_config(const Config& config, const SimulateOptions& options) {
    auto variant = config.variant(options.variant);
    if (!variant) throw std::invalid_argument("unknown config variant '" + options.variant + "'");
    SimConfig sim;
    sim.model = config.model();
    sim.constants = config.scaling();
    sim.cluster = variant->cluster;
    sim.resilience = variant->resilience;
    sim.seed = options.seed;
    sim.replications = options.replications;
    sim.work_h = config.sim_work_h();
    sim.horizon_factor = config.sim_horizon_factor();
    return sim;
}

}  // namespace

GpuRange GpuRange::parse(const std::string& spec) {
    const auto parts = split(spec, ':');
    if (parts.size() < 3 || parts.size() > 4) {
        throw std::invalid_argument("--gpus expects START:END:COUNT[:linear|geometric], got '" + spec + "'");
    }
    GpuRange r;
    r.start = parse_integer(parts[0], "--gpus start");
    r.end = parse_integer(parts[1], "--gpus end");
    const long long count = parse_integer(parts[2], "--gpus count");
    if (r.start < 1 || r.end < r.start) throw std::invalid_argument("--gpus requires 1 <= START <= END");
    if (count < 1) throw std::invalid_argument("--gpus count must be >= 1");
    r.count = static_cast<std::size_t>(count);
    if (parts.size() == 4) {
        if (parts[3] == "linear") r.spacing = Spacing::Linear;
        else if (parts[3] == "geometric") r.spacing = Spacing::Geometric;
        else throw std::invalid_argument("--gpus spacing must be linear or geometric");
    }
    return r;
}

std::vector<std::int64_t> GpuRange::values() const {
    std::vector<std::int64_t> out;
    if (count == 1) return {start};
    for (std::size_t i = 0; i < count; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(count - 1);
        const double v = spacing == Spacing::Linear
                             ? static_cast<double>(start) + f * static_cast<double>(end - start)
                             : static_cast<double>(start) *
                                   std::pow(static_cast<double>(end) / static_cast<double>(start), f);
        const auto n = static_cast<std::int64_t>(std::llround(v));
        if (out.empty() || n > out.back()) out.push_back(n);
    }
    return out;
}

YearRange YearRange::parse(const std::string& spec) {
    const auto parts = split(spec, ':');
    if (parts.size() != 2) throw std::invalid_argument("--years expects START:END, got '" + spec + "'");
    YearRange r;
    r.first = static_cast<int>(parse_integer(parts[0], "--years start"));
    r.last = static_cast<int>(parse_integer(parts[1], "--years end"));
    if (r.last < r.first) throw std::invalid_argument("--years requires START <= END");
    return r;
}

CommandOutput cmd_cost(const Config& config, std::optional<double> params, std::optional<std::int64_t> experts) {
    config.validate();
    ModelSpec model = config.model();
    if (params) model.params = *params;
    if (experts) model.experts = *experts;
    model.validate();
    const ScalingConstants k = config.scaling();

    CommandOutput out;
    out.table = CsvTable({"config", "n_gpus", "params", "experts", "tokens", "flops", "ideal_gpu_hours",
                          "ideal_gpu_cost_usd", "ideal_cloud_cost_usd", "mtti_h", "mtti_eff_h", "ckpt_h",
                          "tau_h", "efficiency", "solve_h", "ckpt_overhead_h", "rework_h", "restart_h",
                          "wall_h", "gpu_hours", "gpu_cost_usd", "cloud_cost_usd", "status"});
    const double flops = moe_training_flops(model, k);
    const double tokens = required_tokens(model, k);
    const ClusterSpec base_cluster = config.cluster();
    const double ideal_h = ideal_gpu_hours(flops, base_cluster.rates);
    const DollarCost ideal = dollar_cost(ideal_h, base_cluster.rates);

    out.summary = printf_string("model: %.4g parameters, %lld expert(s), %.4g tokens\n", model.params,
                                static_cast<long long>(model.experts), tokens);
    out.summary += printf_string("training compute: %.4g FLOP, ideal %.4g GPU-hours ($%.4g GPU, $%.4g cloud)\n",
                                 flops, ideal_h, ideal.gpu_dollars, ideal.cloud_dollars);
    for (const auto& v : {config.baseline(), config.optimized()}) {
        const RunBreakdown r = expected_runtime(model, k, v.cluster, v.resilience);
        out.table.add_row({v.name, format_count(v.cluster.n_gpus), format_number(model.params),
                           format_count(model.experts), format_number(tokens), format_number(flops),
                           format_number(ideal_h), format_number(ideal.gpu_dollars),
                           format_number(ideal.cloud_dollars), format_number(r.mtti_h),
                           format_number(r.mtti_eff_h), format_number(r.ckpt_h), format_number(r.tau_h),
                           format_number(r.efficiency), format_number(r.solve_h),
                           format_number(r.ckpt_overhead_h), format_number(r.expected_rework_h),
                           format_number(r.expected_restart_h), format_number(r.wall_h),
                           format_number(r.gpu_hours), format_number(r.gpu_dollars),
                           format_number(r.cloud_dollars), to_string(r.status)});
        out.summary += printf_string("%s on %lld GPUs: wall-clock %s, GPU cost %s\n", v.name.c_str(),
                                     static_cast<long long>(v.cluster.n_gpus), status_or_hours(r.wall_h).c_str(),
                                     std::isfinite(r.gpu_dollars) ? printf_string("$%.4g", r.gpu_dollars).c_str()
                                                                  : "unbounded");
    }
    return out;
}

CommandOutput cmd_sweep(const Config& config, const GpuRange& gpus, std::span<const std::string> variants,
                        unsigned threads, bool svg) {
    config.validate();
    const ModelSpec model = config.model();
    const std::vector<RunConfig> configs = resolve_variants(config, variants);
    const std::vector<std::int64_t> sizes = gpus.values();
    const auto rows = sweep_system_size(model, config.scaling(), configs, sizes, threads);

    CommandOutput out;
    out.table = CsvTable({"n_gpus", "config", "params", "experts", "flops", "mtti_h", "mtti_eff_h", "ckpt_h",
                          "tau_h", "efficiency", "wall_h", "gpu_hours", "gpu_cost_usd", "status"});
    std::size_t no_progress = 0;
    for (const auto& row : rows) {
        const auto& r = row.run;
        if (r.status == RunStatus::NoProgress) ++no_progress;
        out.table.add_row({format_count(row.n_gpus), row.config_name, format_number(model.params),
                           format_count(model.experts), format_number(r.flops), format_number(r.mtti_h),
                           format_number(r.mtti_eff_h), format_number(r.ckpt_h), format_number(r.tau_h),
                           format_number(r.efficiency), format_number(r.wall_h), format_number(r.gpu_hours),
                           format_number(r.gpu_dollars), to_string(r.status)});
    }
    out.summary = printf_string("%zu cells, %zu in NoProgress\n", rows.size(), no_progress);
    for (const auto& cfg : configs) {
        const SweepRow* best = nullptr;
        for (const auto& row : rows) {
            if (row.config_name != cfg.name || row.run.status != RunStatus::Ok) continue;
            if (!best || row.run.wall_h < best->run.wall_h) best = &row;
        }
        if (best) {
            out.summary += printf_string("%s: fastest at %lld GPUs (%.1f h)\n", cfg.name.c_str(),
                                         static_cast<long long>(best->n_gpus), best->run.wall_h);
        } else {
            out.summary += cfg.name + ": no progress at any size\n";
        }
    }
    if (!rows.empty() && no_progress == rows.size()) out.exit_code = kExitAllNoProgress;

    if (svg) {
        std::vector<Series> series;
        for (const auto& cfg : configs) {
            Series s{cfg.name, {}};
            for (const auto& row : rows) {
                if (row.config_name == cfg.name) s.points.emplace_back(row.n_gpus, row.run.wall_h);
            }
            series.push_back(std::move(s));
        }
        out.svg = line_chart(series, {"Time to train vs system size", "GPUs", "wall-clock (h)", true, true});
    }
    return out;
}

CommandOutput cmd_project(const Config& config, const YearRange& years, std::span<const ScenarioKind> scenarios,
                          bool svg) {
    config.validate();
    std::vector<Scenario> chosen;
    if (scenarios.empty()) {
        for (auto k : {ScenarioKind::BestCase, ScenarioKind::BestGuess, ScenarioKind::WorstCase}) {
            chosen.push_back(config.scenario(k));
        }
    } else {
        for (auto k : scenarios) chosen.push_back(config.scenario(k));
    }
    const ProjectionInputs in = config.projection_inputs();
    const auto rows = project_years(years.first, years.last, chosen, in);

    CommandOutput out;
    out.table = CsvTable({"year", "scenario", "params", "experts", "flops", "gpu_hours", "gpu_cost_usd",
                          "cloud_cost_usd", "gpu_base_usd", "it_spend_usd"});
    for (const auto& r : rows) {
        out.table.add_row({format_count(static_cast<std::int64_t>(r.year)), r.scenario, format_number(r.params),
                           format_count(r.experts), format_number(r.flops), format_number(r.gpu_hours),
                           format_number(r.gpu_cost_usd), format_number(r.cloud_cost_usd),
                           format_number(r.gpu_base_usd), format_number(r.it_spend_usd)});
    }

    auto year_or_none = [](const std::optional<double>& y) {
        return y ? printf_string("%.2f", *y) : std::string("none by 2040");
    };
    for (const auto& s : chosen) {
        const Crossings c = intersection_year(s, in);
        out.summary += printf_string("%s: exceeds GPU installed base in %s, global IT spend in %s\n",
                                     s.name().c_str(), year_or_none(c.gpu_base).c_str(),
                                     year_or_none(c.it_spend).c_str());
    }
    const auto spread = scenario_spread(chosen, in);
    out.summary += "scenario spread (GPU installed base crossing): " +
                   (spread ? printf_string("%.2f years", *spread) : std::string("undefined")) + "\n";

    if (svg) {
        std::vector<Series> series;
        for (const auto& s : chosen) {
            Series line{s.name() + " cost", {}};
            for (const auto& r : rows) {
                if (r.scenario == s.name()) line.points.emplace_back(r.year, r.gpu_cost_usd);
            }
            series.push_back(std::move(line));
        }
        Series gpu{"GPU installed base", {}}, it{"global IT spend", {}};
        for (int y = years.first; y <= years.last; ++y) {
            const MarketValue m = market_value_at(y, in.growth, in.market);
            gpu.points.emplace_back(y, m.gpu_base_usd);
            it.points.emplace_back(y, m.it_spend_usd);
        }
        series.push_back(std::move(gpu));
        series.push_back(std::move(it));
        out.svg = line_chart(series, {"Projected cost of one training run", "year", "USD", false, true});
    }
    return out;
}

CommandOutput cmd_simulate(const Config& config, const SimulateOptions& options) {
    config.validate();
    const SimConfig sim = make_sim_config(config, options);
    const SimResult result = run_ensemble(sim, options.threads);
    const ValidationReport report = validate_analytic(sim, result, options.tolerance);

    CommandOutput out;
    out.table = CsvTable({"replication", "wall_h", "failures", "interrupts", "checkpoints", "truncated"});
    out.table.add_comment(printf_string("generator=%s seed=%llu replications=%llu variant=%s", result.generator.c_str(),
                                        static_cast<unsigned long long>(options.seed),
                                        static_cast<unsigned long long>(options.replications),
                                        options.variant.c_str()));
    for (std::size_t i = 0; i < result.replications.size(); ++i) {
        const auto& r = result.replications[i];
        out.table.add_row({format_count(static_cast<std::int64_t>(i)), format_number(r.wall_h),
                           std::to_string(r.counts.failures), std::to_string(r.counts.interrupts),
                           std::to_string(r.counts.checkpoints), r.truncated ? "1" : "0"});
    }

    out.summary = printf_string("simulated %llu replications (%s, seed %llu, %s)\n",
                                static_cast<unsigned long long>(options.replications), result.generator.c_str(),
                                static_cast<unsigned long long>(options.seed), options.variant.c_str());
    out.summary += printf_string("mean wall-clock %.2f h, stddev %.2f h", result.mean_wall_h, result.stddev_wall_h);
    out.summary += result.ci95_half_width ? printf_string(", 95%% CI +/- %.2f h\n", *result.ci95_half_width)
                                          : std::string(", 95% CI n/a\n");
    out.summary += printf_string("mean interrupts %.2f, mean checkpoints %.2f, truncated %llu\n",
                                 result.mean_interrupts, result.mean_checkpoints,
                                 static_cast<unsigned long long>(result.truncated));
    if (report.analytic_status == RunStatus::NoProgress) {
        out.summary += printf_string("analytic: NoProgress; horizon %.1f h -> %s\n", report.horizon_h,
                                     report.pass ? "PASS" : "FAIL");
    } else {
        out.summary += printf_string("analytic %.2f h, relative error %.4f (tolerance %.4f) -> %s\n",
                                     report.analytic_h, report.relative_error, options.tolerance,
                                     report.pass ? "PASS" : "FAIL");
    }
    return out;
}

CsvTable simulate_trace(const Config& config, const SimulateOptions& options, std::uint64_t replication) {
    config.validate();
    const SimConfig sim = make_sim_config(config, options);
    CsvTable table({"replication", "time_h", "kind", "group_id"});
    table.add_comment(printf_string("generator=%s seed=%llu", Philox4x32::name,
                                    static_cast<unsigned long long>(options.seed)));
    const std::string rep = std::to_string(replication);
    simulate_run(sim, replication, [&](const TraceEvent& e) {
        table.add_row({rep, format_number(e.time_h), to_string(e.kind),
                       e.group_id >= 0 ? format_count(e.group_id) : std::string()});
    });
    return table;
}

ReportBundle cmd_report(const Config& config, const ReportOptions& options) {
    config.validate();
    ReportBundle bundle;
    auto add = [&](const std::string& name, const CommandOutput& out) {
        bundle.files.emplace_back(name + ".csv", out.table.str());
        if (out.svg) bundle.files.emplace_back(name + ".svg", *out.svg);
    };

    const CommandOutput cost = cmd_cost(config);
    const CommandOutput sweep = cmd_sweep(config, options.gpus, {}, options.simulate.threads, options.svg);
    const CommandOutput project = cmd_project(config, options.years, {}, options.svg);
    SimulateOptions base_sim = options.simulate;
    base_sim.variant = "baseline";
    SimulateOptions opt_sim = options.simulate;
    opt_sim.variant = "optimized";
    const CommandOutput sim_base = cmd_simulate(config, base_sim);
    const CommandOutput sim_opt = cmd_simulate(config, opt_sim);
    add("cost", cost);
    add("sweep", sweep);
    add("project", project);
    add("simulate_baseline", sim_base);
    add("simulate_optimized", sim_opt);
    if (sweep.exit_code != kExitOk) bundle.exit_code = sweep.exit_code;

    // Headline comparisons.
    const ScalingConstants k = config.scaling();
    const double one_t = dense_training_flops({1e12, 1}, k);
    CostRates pflop = config.cluster().rates;
    pflop.sustained_flops_per_gpu = 1e15;
    const double one_t_hours = ideal_gpu_hours(one_t, pflop);

    const ProjectionInputs in = config.projection_inputs();
    const Scenario guess = config.scenario(ScenarioKind::BestGuess);
    const YearRow y2023 = training_cost_at(2023, guess, in);
    const YearRow y2028 = training_cost_at(2028, guess, in);
    const Crossings cross = intersection_year(guess, in);
    const Scenario all[] = {config.scenario(ScenarioKind::BestCase), guess, config.scenario(ScenarioKind::WorstCase)};
    const auto spread = scenario_spread(all, in);

    const RunConfig base = config.baseline();
    const RunConfig opt = config.optimized();
    const RunBreakdown rb = expected_runtime(config.model(), k, base.cluster, base.resilience);
    const RunBreakdown ro = expected_runtime(config.model(), k, opt.cluster, opt.resilience);

    auto year = [](const std::optional<double>& y) {
        return y ? printf_string("%.2f", *y) : std::string("none");
    };
    std::string text = "Training cost report\n====================\n\n";
    text += "Scaling laws\n";
    text += printf_string("  1T-parameter dense model: %.3g FLOP (reference: on the order of 1e26)\n", one_t);
    text += printf_string("  ideal GPU-hours at 1 PFLOP/s: %.3g (reference: about 28 million)\n", one_t_hours);
    text += "\nResilience\n";
    text += printf_string("  %lld GPUs, baseline: %s\n", static_cast<long long>(base.cluster.n_gpus),
                          status_or_hours(rb.wall_h).c_str());
    text += printf_string("  %lld GPUs, optimized: %s\n", static_cast<long long>(opt.cluster.n_gpus),
                          status_or_hours(ro.wall_h).c_str());
    if (rb.status == RunStatus::Ok && ro.status == RunStatus::Ok) {
        text += printf_string("  baseline/optimized wall-clock ratio: %.3f (reference: about 2x)\n",
                              rb.wall_h / ro.wall_h);
    }
    text += sweep.summary;
    text += "\nProjection (best guess scenario)\n";
    text += printf_string("  compute growth from model size: %.0f%%/yr (reference: above 500%%)\n",
                          100.0 * compute_growth_rate(in.growth, guess));
    text += printf_string("  2023 GPU cost: $%.3g (reference: $6.7M)\n", y2023.gpu_cost_usd);
    text += printf_string("  2028 GPU cost: $%.3g, cloud $%.3g (reference: $19B GPU, $93B cloud)\n",
                          y2028.gpu_cost_usd, y2028.cloud_cost_usd);
    text += "  crossing GPU installed base: " + year(cross.gpu_base) + " (reference: 2029)\n";
    text += "  crossing global IT spend: " + year(cross.it_spend) + " (reference: 2032)\n";
    text += "  scenario spread: " + (spread ? printf_string("%.2f years", *spread) : std::string("undefined")) +
            " (reference: within one year)\n";
    text += "  market anchors are calibration inputs, not measured data\n";
    text += "\nSimulation\n";
    text += "  baseline: " + sim_base.summary;
    text += "  optimized: " + sim_opt.summary;
    bundle.files.emplace(bundle.files.begin(), "report.txt", std::move(text));
    return bundle;
}

}  // namespace llmcost
