#include "llmcost/cluster_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "llmcost/parallel.hpp"

namespace llmcost {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

void ClusterSpec::validate() const {
    if (n_gpus < 1) throw std::invalid_argument("n_gpus must be >= 1");
    if (gpus_per_cpu < 1) throw std::invalid_argument("gpus_per_cpu must be >= 1");
    if (!(gpu_mtbf_h > 0.0)) throw std::invalid_argument("gpu_mtbf_h must be > 0");
    if (!(cpu_mtbf_h > 0.0)) throw std::invalid_argument("cpu_mtbf_h must be > 0");
    if (!(gpu_mem_gb >= 0.0) || std::isinf(gpu_mem_gb)) {
        throw std::invalid_argument("gpu_mem_gb must be finite and >= 0");
    }
    if (!(fs_bw_gbs > 0.0)) throw std::invalid_argument("fs_bw_gbs must be > 0");
    if (gpus_per_group < 1) throw std::invalid_argument("gpus_per_group must be >= 1");
    rates.validate();
}

void ResilienceConfig::validate() const {
    if (!(ckpt_mem_fraction > 0.0 && ckpt_mem_fraction <= 1.0)) {
        throw std::invalid_argument("ckpt_mem_fraction must lie in (0, 1]");
    }
    if (tolerated_group_failures < 0) {
        throw std::invalid_argument("tolerated_group_failures must be >= 0");
    }
    if (group_count_cap < 1) throw std::invalid_argument("group_count_cap must be >= 1");
    if (tolerated_group_failures >= group_count_cap) {
        throw std::invalid_argument("tolerated_group_failures must be < group_count_cap");
    }
    if (!(ttr_h >= 0.0) || std::isinf(ttr_h)) {
        throw std::invalid_argument("ttr_h must be finite and >= 0");
    }
    if (!(seq_fraction >= 0.0 && seq_fraction < 1.0)) {
        throw std::invalid_argument("seq_fraction must lie in [0, 1)");
    }
}

RunConfig RunConfig::baseline() {
    return RunConfig{"baseline", ClusterSpec{}, ResilienceConfig{}};
}

RunConfig RunConfig::optimized() {
    RunConfig c{"optimized", ClusterSpec{}, ResilienceConfig{}};
    c.cluster.fs_bw_gbs = 2000.0;
    c.resilience.ckpt_mem_fraction = 0.5;
    c.resilience.tolerated_group_failures = 5;
    return c;
}

const char* to_string(RunStatus s) {
    switch (s) {
        case RunStatus::Ok: return "OK";
        case RunStatus::NoProgress: return "NoProgress";
    }
    return "?";
}

double system_mtti(const ClusterSpec& cluster) {
    const auto n = static_cast<double>(cluster.n_gpus);
    const auto cpus = std::ceil(n / static_cast<double>(cluster.gpus_per_cpu));
    const double rate = n / cluster.gpu_mtbf_h + cpus / cluster.cpu_mtbf_h;
    return rate > 0.0 ? 1.0 / rate : kInf;
}

std::int64_t group_count(const ClusterSpec& cluster, const ResilienceConfig& resilience) {
    const std::int64_t by_size = std::max<std::int64_t>(1, cluster.n_gpus / cluster.gpus_per_group);
    return std::min(resilience.group_count_cap, by_size);
}

double parallel_efficiency(std::int64_t groups, double seq_fraction) {
    return 1.0 / (1.0 + seq_fraction * static_cast<double>(groups - 1));
}

double checkpoint_write_time(const ClusterSpec& cluster, const ResilienceConfig& resilience) {
    return static_cast<double>(cluster.n_gpus) * cluster.gpu_mem_gb * resilience.ckpt_mem_fraction /
           (cluster.fs_bw_gbs * 3600.0);
}

double effective_mtti(double mtti_h, std::int64_t tolerated_group_failures) {
    return static_cast<double>(tolerated_group_failures + 1) * mtti_h;
}

double optimal_checkpoint_interval(double ckpt_h, double mtti_eff_h, double solve_h) {
    if (ckpt_h == 0.0) return solve_h;
    return std::min(std::sqrt(2.0 * ckpt_h * mtti_eff_h), solve_h);
}

double solve_hours(const ModelSpec& model, const ScalingConstants& k,
                   const ClusterSpec& cluster, const ResilienceConfig& resilience) {
    const double eta = parallel_efficiency(group_count(cluster, resilience), resilience.seq_fraction);
    const double flops = moe_training_flops(model, k);
    return ideal_gpu_hours(flops, cluster.rates) / (static_cast<double>(cluster.n_gpus) * eta);
}

RunBreakdown expected_runtime_for_work(double solve_h, const ClusterSpec& cluster,
                                       const ResilienceConfig& resilience) {
    RunBreakdown r;
    r.groups = group_count(cluster, resilience);
    r.efficiency = parallel_efficiency(r.groups, resilience.seq_fraction);
    r.flops = solve_h * 3600.0 * static_cast<double>(cluster.n_gpus) * r.efficiency *
              cluster.rates.sustained_flops_per_gpu;
    r.solve_h = solve_h;
    r.mtti_h = system_mtti(cluster);
    r.mtti_eff_h = effective_mtti(r.mtti_h, resilience.tolerated_group_failures);
    r.ckpt_h = checkpoint_write_time(cluster, resilience);
    r.tau_h = optimal_checkpoint_interval(r.ckpt_h, r.mtti_eff_h, solve_h);
    r.n_ckpt = r.tau_h > 0.0
                   ? std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(solve_h / r.tau_h)) - 1)
                   : 0;

    const double loss_per_interrupt = r.tau_h / 2.0 + resilience.ttr_h;
    const double duty = 1.0 - loss_per_interrupt / r.mtti_eff_h;
    r.ckpt_overhead_h = static_cast<double>(r.n_ckpt) * r.ckpt_h;
    if (!(duty > 0.0)) {
        r.status = RunStatus::NoProgress;
        r.expected_rework_h = kInf;
        r.expected_restart_h = kInf;
        r.wall_h = kInf;
        r.gpu_hours = kInf;
        r.gpu_dollars = kInf;
        r.cloud_dollars = kInf;
        return r;
    }

    const double productive_h = solve_h + r.ckpt_overhead_h;
    r.wall_h = productive_h / duty;
    const double inflation = (1.0 / duty - 1.0) * productive_h;
    if (loss_per_interrupt > 0.0) {
        r.expected_rework_h = inflation * (r.tau_h / 2.0) / loss_per_interrupt;
        r.expected_restart_h = inflation * resilience.ttr_h / loss_per_interrupt;
    }
    r.gpu_hours = r.wall_h * static_cast<double>(cluster.n_gpus);
    const DollarCost cost = dollar_cost(r.gpu_hours, cluster.rates);
    r.gpu_dollars = cost.gpu_dollars;
    r.cloud_dollars = cost.cloud_dollars;
    return r;
}

RunBreakdown expected_runtime(const ModelSpec& model, const ScalingConstants& k,
                              const ClusterSpec& cluster, const ResilienceConfig& resilience) {
    RunBreakdown r =
        expected_runtime_for_work(solve_hours(model, k, cluster, resilience), cluster, resilience);
    r.flops = moe_training_flops(model, k);
    return r;
}

std::vector<SweepRow> sweep_system_size(const ModelSpec& model, const ScalingConstants& k,
                                        std::span<const RunConfig> configs,
                                        std::span<const std::int64_t> n_gpus_list,
                                        unsigned threads) {
    if (n_gpus_list.empty()) throw std::invalid_argument("n_gpus list must not be empty");
    if (!std::is_sorted(n_gpus_list.begin(), n_gpus_list.end())) {
        throw std::invalid_argument("n_gpus list must be ascending");
    }
    std::vector<SweepRow> rows(n_gpus_list.size() * configs.size());
    detail::parallel_for(rows.size(), threads, [&](std::size_t i) {
        const std::int64_t n = n_gpus_list[i / configs.size()];
        const RunConfig& cfg = configs[i % configs.size()];
        ClusterSpec cluster = cfg.cluster;
        cluster.n_gpus = n;
        rows[i] = SweepRow{n, cfg.name, expected_runtime(model, k, cluster, cfg.resilience)};
    });
    return rows;
}

}  // namespace llmcost
