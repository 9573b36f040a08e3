// Acceptance checks. Prints one [PASS]/[FAIL] line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <cmath>
#include <iterator>
#include <cstdio>
#include <cstring>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "llmcost/cluster_model.hpp"
#include "llmcost/commands.hpp"
#include "llmcost/config.hpp"
#include "llmcost/failure_sim.hpp"
#include "llmcost/projection.hpp"
#include "llmcost/scaling_laws.hpp"

using namespace llmcost;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what) {
    std::printf("[%s] %d %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
    if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

void closed_form_exactness() {
    const ScalingConstants k;
    bool ok = dense_training_flops({1e12, 1}, k) == 1.2e26;
    int exact = 0, total = 0, within_ulp = 0;
    for (double p : {1e9, 1e10, 1e11, 1e12, 1e13}) {
        const double dense = dense_training_flops({p, 1}, k);
        for (std::int64_t e = 1; e <= 64; ++e) {
            const double back = static_cast<double>(e) * moe_training_flops({p, e}, k);
            ++total;
            if (back == dense) ++exact;
            if (std::abs(back - dense) <= std::abs(std::nextafter(dense, INFINITY) - dense)) ++within_ulp;
            if ((e & (e - 1)) == 0 && back != dense) ok = false;
        }
    }
    ok = ok && within_ulp == total;
    report(1, ok,
           "dense(1e12) == 1.2e26; K*C_moe == C_dense exactly for K in {1,2,4,..,64}, all integer K within 1 ulp (" +
               std::to_string(exact) + "/" + std::to_string(total) + " exact)");
}

void gpu_hours_calibration() {
    CostRates r;
    r.sustained_flops_per_gpu = 1e15;
    const double h = ideal_gpu_hours(1e26, r);
    report(2, std::abs(h - 2.78e7) / 2.78e7 <= 0.01, fmt("ideal GPU-hours %.6g within 1%% of 2.78e7", h));
}

void resilience_factor() {
    const Config c;
    const RunConfig b = c.baseline(), o = c.optimized();
    const ModelSpec m = c.model();
    const ScalingConstants k = c.scaling();
    const RunBreakdown rb = expected_runtime(m, k, b.cluster, b.resilience);
    const RunBreakdown ro = expected_runtime(m, k, o.cluster, o.resilience);
    const double ratio = rb.wall_h / ro.wall_h;

    // the same quantity assembled from the component functions
    auto closed = [&](const RunConfig& rc) {
        const double solve = solve_hours(m, k, rc.cluster, rc.resilience);
        const double meff = effective_mtti(system_mtti(rc.cluster), rc.resilience.tolerated_group_failures);
        const double delta = checkpoint_write_time(rc.cluster, rc.resilience);
        const double tau = optimal_checkpoint_interval(delta, meff, solve);
        const double n = std::max(0.0, std::ceil(solve / tau) - 1.0);
        return (solve + n * delta) / (1.0 - (tau / 2 + rc.resilience.ttr_h) / meff);
    };
    const double expected = closed(b) / closed(o);
    const bool ok = rb.status == RunStatus::Ok && ro.status == RunStatus::Ok &&
                    std::abs(ratio - expected) <= 1e-6 && ratio >= 1.6 && ratio <= 2.6;
    report(3, ok, fmt("baseline/optimized wall-clock ratio %.6f in [1.6, 2.6], closed form %.6f", ratio, expected));
}

void sweep_shape() {
    const Config c;
    const std::vector<RunConfig> cfgs{c.baseline(), c.optimized()};
    const auto sizes = GpuRange{}.values();
    const auto rows = sweep_system_size(c.model(), c.scaling(), cfgs, sizes, 4);
    std::vector<double> base, opt;
    std::vector<RunStatus> base_status;
    bool opt_ok = true;
    for (const auto& r : rows) {
        if (r.config_name == "baseline") {
            base.push_back(r.run.wall_h);
            base_status.push_back(r.run.status);
        } else {
            opt.push_back(r.run.wall_h);
            opt_ok = opt_ok && r.run.status == RunStatus::Ok;
        }
    }
    bool decreasing = opt_ok && opt.size() == sizes.size();
    for (std::size_t i = 1; i < opt.size(); ++i) decreasing = decreasing && opt[i] < opt[i - 1];

    bool tail = base_status.back() == RunStatus::NoProgress;
    bool interior = false;
    std::size_t best = 0;
    for (std::size_t i = 0; i < base.size(); ++i) {
        if (base_status[i] == RunStatus::Ok && base[i] < base[best]) best = i;
    }
    for (std::size_t i = best + 1; i < base.size(); ++i) {
        if (base_status[i] == RunStatus::NoProgress || base[i] > base[best]) interior = best > 0;
    }
    report(4, sizes.size() == 9 && (interior || tail) && decreasing,
           "baseline sweep has interior minimum at " + std::to_string(sizes[best]) + " GPUs" +
               (tail ? " and a NoProgress tail" : "") + "; optimized sweep strictly decreasing");
}

SimConfig reference_sim(const RunConfig& rc, std::uint64_t reps) {
    SimConfig s;
    s.cluster = rc.cluster;
    s.resilience = rc.resilience;
    s.work_h = 1000.0;
    s.seed = 42;
    s.replications = reps;
    return s;
}

void oracle_agreement() {
    const Config c;
    bool ok = true;
    std::string detail;
    for (const RunConfig& rc : {c.baseline(), c.optimized()}) {
        const ValidationReport v = validate_analytic(reference_sim(rc, 1000), 0.20, 4);
        ok = ok && v.analytic_status == RunStatus::Ok && v.pass;
        detail += fmt(" %.4f", v.relative_error);
    }
    double worst_free = 0.0;
    for (RunConfig rc : {c.baseline(), c.optimized()}) {
        rc.cluster.gpu_mtbf_h = INFINITY;
        rc.cluster.cpu_mtbf_h = INFINITY;
        const ValidationReport v = validate_analytic(reference_sim(rc, 10), 1e-9);
        ok = ok && v.pass;
        worst_free = std::max(worst_free, v.relative_error);
    }
    report(5, ok, "simulated vs analytic relative error" + detail + " (<= 0.20); failure-free " +
                      fmt("%.3g (<= 1e-9)", worst_free));
}

void determinism() {
    Config c;
    c.set("simulation.work_h", 1000);
    SimulateOptions o;
    o.replications = 200;
    std::vector<std::string> outputs;
    for (unsigned threads : {1u, 1u, 2u, 8u}) {
        o.threads = threads;
        const CommandOutput out = cmd_simulate(c, o);
        outputs.push_back(out.table.str() + out.summary);
    }
    bool same = true;
    for (const auto& s : outputs) same = same && s == outputs.front();
    report(6, same, "cmd_simulate output byte-identical across repeated runs and 1/2/8 threads");
}

void growth_consistency() {
    const Config c;
    const double g = compute_growth_rate(c.growth(), c.scenario(ScenarioKind::BestGuess));
    report(7, g >= 5.0, fmt("compute growth rate %.4f >= 5.0", g));
}

void cost_projections() {
    const Config c;
    const ProjectionInputs in = c.projection_inputs();
    const Scenario s = c.scenario(ScenarioKind::BestGuess);
    const double c2023 = training_cost_at(2023, s, in).gpu_cost_usd;
    const double c2028 = training_cost_at(2028, s, in).gpu_cost_usd;
    auto within3 = [](double v, double ref) { return v >= ref / 3 && v <= ref * 3; };
    report(8, within3(c2023, 6.7e6) && within3(c2028, 19e9),
           fmt("best_guess GPU cost 2023 $%.4g (x3 of $6.7M), 2028 $%.4g (x3 of $19B)", c2023, c2028));
}

void intersections() {
    const Config c;
    const ProjectionInputs in = c.projection_inputs();
    const Crossings x = intersection_year(c.scenario(ScenarioKind::BestGuess), in);
    const Scenario all[] = {c.scenario(ScenarioKind::BestCase), c.scenario(ScenarioKind::BestGuess),
                            c.scenario(ScenarioKind::WorstCase)};
    const auto spread = scenario_spread(all, in);
    const bool ok = x.gpu_base && x.it_spend && spread && *x.gpu_base >= 2028 && *x.gpu_base <= 2030 &&
                    *x.it_spend >= 2031 && *x.it_spend <= 2033 && *spread <= 3.0;
    report(9, ok,
           fmt("crossings: GPU base %.2f in [2028, 2030], IT spend %.2f in [2031, 2033], spread %.2f <= 3 years",
               x.gpu_base.value_or(NAN), x.it_spend.value_or(NAN), spread.value_or(NAN)));
}

struct KeyRange {
    const char* key;
    double lo, hi;
    bool integral;
};

// Writes only the given keys as a nested document.
std::string sparse_document(const Config& c, std::vector<std::string> keys) {
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    std::ostringstream out;
    std::vector<std::string> open;
    for (const auto& key : keys) {
        std::vector<std::string> parts;
        for (std::size_t p = 0;;) {
            const auto q = key.find('.', p);
            parts.push_back(key.substr(p, q - p));
            if (q == std::string::npos) break;
            p = q + 1;
        }
        std::size_t shared = 0;
        while (shared < open.size() && shared + 1 < parts.size() && open[shared] == parts[shared]) ++shared;
        open.resize(shared);
        for (std::size_t d = shared; d + 1 < parts.size(); ++d) {
            out << std::string(2 * d, ' ') << parts[d] << ":\n";
            open.push_back(parts[d]);
        }
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", c.get(key));
        out << std::string(2 * (parts.size() - 1), ' ') << parts.back() << ": " << buf << "\n";
    }
    return out.str();
}

void config_invariants() {
    const KeyRange ranges[] = {
        {"model.params", 1e8, 1e14, false},
        {"model.experts", 1, 64, true},
        {"scaling.token_scaling", 1.0, 2.5, false},
        {"cluster.n_gpus", 1, 500000, true},
        {"cluster.gpu_mtbf_h", 1e4, 1e7, false},
        {"cluster.fs_bw_gbs", 10, 1e4, false},
        {"cluster.gpu_mem_gb", 8, 192, false},
        {"resilience.ckpt_mem_fraction", 0.01, 1.0, false},
        {"resilience.ft_f", 0, 99, true},
        {"resilience.ttr_h", 0, 10, false},
        {"optimized.fs_bw_gbs", 10, 1e4, false},
        {"growth.param_growth", 0, 3, false},
        {"scenario.custom.flop_per_param", 1, 500, false},
        {"scenario.best_case.base_experts", 1, 16, false},
        {"market.gpu_base_usd", 1e9, 1e12, false},
        {"market.it_spend_growth", -0.5, 0.5, false},
        {"simulation.work_h", 0, 1e4, false},
    };
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> pick(0, std::size(ranges) - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Config defaults;
    const std::size_t total = defaults.entries().size();
    int passed = 0;
    const int cases = 20;
    for (int i = 0; i < cases; ++i) {
        Config c;
        std::vector<std::string> touched;
        for (int j = 0; j < 1 + i % 6; ++j) {
            const KeyRange& r = ranges[pick(rng)];
            double v = r.lo + (r.hi - r.lo) * unit(rng);
            if (r.integral) v = std::round(v);
            c.set(r.key, v);
            touched.emplace_back(r.key);
        }
        std::sort(touched.begin(), touched.end());
        touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
        bool ok = true;
        try {
            c.validate();
            const std::string text = serialize_config(c);
            const Config back = parse_config(text);
            ok = back == c && serialize_config(back) == text && back.defaulted_keys().empty();

            // omitted keys behave exactly like their explicit defaults
            const Config sparse = parse_config(sparse_document(c, touched));
            ok = ok && sparse == c && sparse.defaulted_keys().size() == total - touched.size();
            ok = ok && parse_config("") == defaults;
        } catch (const std::exception& ex) {
            std::printf("  case %d: %s\n", i, ex.what());
            ok = false;
        }
        if (ok) ++passed;
    }
    report(10, passed == cases,
           "config round-trip and default transparency hold on " + std::to_string(passed) + "/" +
               std::to_string(cases) + " cases");
}

}  // namespace

int main() {
    closed_form_exactness();
    gpu_hours_calibration();
    resilience_factor();
    sweep_shape();
    oracle_agreement();
    determinism();
    growth_consistency();
    cost_projections();
    intersections();
    config_invariants();
    std::printf("%d failure(s)\n", failures);
    return failures == 0 ? 0 : 1;
}
