#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "llmcost/scaling_laws.hpp"

namespace llmcost {

struct ClusterSpec {
    std::int64_t n_gpus = 50'000;
    std::int64_t gpus_per_cpu = 4;
    double gpu_mtbf_h = 950'000.0;
    double cpu_mtbf_h = 1'500'000.0;
    double gpu_mem_gb = 80.0;
    double fs_bw_gbs = 500.0;
    std::int64_t gpus_per_group = 512;
    CostRates rates;

    void validate() const;
    bool operator==(const ClusterSpec&) const = default;
};

struct ResilienceConfig {
    double ckpt_mem_fraction = 1.0;
    std::int64_t tolerated_group_failures = 0;  // F in F-out-of-G
    std::int64_t group_count_cap = 100;         // G_max
    double ttr_h = 2.0;
    double seq_fraction = 0.01;

    void validate() const;
    bool operator==(const ResilienceConfig&) const = default;
};

/// A cluster plus the resilience strategy run on it. Checkpoint bandwidth is a
/// cluster property, so the "optimized" strategy also changes the cluster.
struct RunConfig {
    std::string name;
    ClusterSpec cluster;
    ResilienceConfig resilience;

    static RunConfig baseline();
    static RunConfig optimized();
};

enum class RunStatus { Ok, NoProgress };

const char* to_string(RunStatus s);

struct RunBreakdown {
    // Inputs to the waste formula, reported for the sweep tables.
    double flops = 0.0;
    std::int64_t groups = 1;
    double efficiency = 1.0;
    double mtti_h = 0.0;
    double mtti_eff_h = 0.0;
    double ckpt_h = 0.0;
    double tau_h = 0.0;
    std::int64_t n_ckpt = 0;

    double solve_h = 0.0;
    double ckpt_overhead_h = 0.0;
    double expected_rework_h = 0.0;
    double expected_restart_h = 0.0;
    double wall_h = 0.0;  // +inf when status == NoProgress
    double gpu_hours = 0.0;
    double gpu_dollars = 0.0;
    double cloud_dollars = 0.0;
    RunStatus status = RunStatus::Ok;
};

/// Mean time to interrupt of the whole system, assuming independent
/// exponential GPU and CPU failures. Infinite MTBFs give an infinite MTTI.
double system_mtti(const ClusterSpec& cluster);

std::int64_t group_count(const ClusterSpec& cluster, const ResilienceConfig& resilience);

/// Amdahl serialization across data-parallel groups.
double parallel_efficiency(std::int64_t groups, double seq_fraction);

/// Time to write one checkpoint of every GPU's memory, in hours.
double checkpoint_write_time(const ClusterSpec& cluster, const ResilienceConfig& resilience);

/// An interrupt needs F+1 accumulated group failures.
double effective_mtti(double mtti_h, std::int64_t tolerated_group_failures);

/// First-order optimal checkpoint period sqrt(2 * delta * M), clamped to the
/// run length. A free checkpoint (delta == 0) yields a single trailing segment.
double optimal_checkpoint_interval(double ckpt_h, double mtti_eff_h, double solve_h);

/// Failure-free, checkpoint-free hours needed for the model on this cluster.
double solve_hours(const ModelSpec& model, const ScalingConstants& k,
                   const ClusterSpec& cluster, const ResilienceConfig& resilience);

RunBreakdown expected_runtime(const ModelSpec& model, const ScalingConstants& k,
                              const ClusterSpec& cluster, const ResilienceConfig& resilience);

/// Same as expected_runtime but for a fixed amount of failure-free work,
/// e.g. the 1000 h reference runs used for validation.
RunBreakdown expected_runtime_for_work(double solve_h, const ClusterSpec& cluster,
                                       const ResilienceConfig& resilience);

struct SweepRow {
    std::int64_t n_gpus = 0;
    std::string config_name;
    RunBreakdown run;
};

/// Evaluates every (n_gpus, config) cell. Rows are ordered by n_gpus, then by
/// config in list order; `threads` only changes how cells are scheduled.
std::vector<SweepRow> sweep_system_size(const ModelSpec& model, const ScalingConstants& k,
                                        std::span<const RunConfig> configs,
                                        std::span<const std::int64_t> n_gpus_list,
                                        unsigned threads = 1);

}  // namespace llmcost
