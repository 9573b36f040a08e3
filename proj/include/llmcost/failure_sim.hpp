#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "llmcost/cluster_model.hpp"

namespace llmcost {

struct SimConfig {
    ModelSpec model;
    ScalingConstants constants;
    ClusterSpec cluster;
    ResilienceConfig resilience;
    std::uint64_t seed = 0;
    std::uint64_t replications = 1;
    // Failure-free work target; derived from the model when unset.
    std::optional<double> work_h;
    // A replication stops (truncated) once wall time exceeds this multiple of
    // the failure-free run length.
    double horizon_factor = 50.0;

    void validate() const;
};

enum class EventKind { Fail, Repair, CkptStart, CkptEnd, Interrupt, Restart, Done };

const char* to_string(EventKind kind);

struct TraceEvent {
    double time_h = 0.0;
    EventKind kind = EventKind::Done;
    std::int64_t group_id = -1;  // -1 when the event is not tied to a group
};

using TraceSink = std::function<void(const TraceEvent&)>;

struct EventCounts {
    std::uint64_t failures = 0;
    std::uint64_t interrupts = 0;
    std::uint64_t checkpoints = 0;  // completed writes only
    bool operator==(const EventCounts&) const = default;
};

struct ReplicationResult {
    double wall_h = 0.0;
    EventCounts counts;
    bool truncated = false;
};

/// The quantities a replication needs, computed once per configuration.
struct SimPlan {
    double work_h = 0.0;
    double ckpt_h = 0.0;
    double tau_h = 0.0;
    double failure_rate_per_h = 0.0;
    std::int64_t groups = 1;
    std::int64_t tolerated = 0;
    double ttr_h = 0.0;
    double horizon_h = 0.0;
};

/// Throws std::invalid_argument for an infinite checkpoint time or work target.
SimPlan make_plan(const SimConfig& config);

/// One replication of the checkpointed run. The random stream is a pure
/// function of (seed, replication_index, failure ordinal).
ReplicationResult simulate_run(const SimConfig& config, std::uint64_t replication_index,
                               const TraceSink& trace = {});
ReplicationResult simulate_run(const SimPlan& plan, std::uint64_t seed, std::uint64_t replication_index,
                               const TraceSink& trace = {});

struct SimResult {
    std::vector<ReplicationResult> replications;
    double mean_wall_h = 0.0;
    double stddev_wall_h = 0.0;
    std::optional<double> ci95_half_width;  // unset for a single replication
    double mean_interrupts = 0.0;
    double mean_checkpoints = 0.0;
    std::uint64_t truncated = 0;
    std::string generator;
};

SimResult run_ensemble(const SimConfig& config, unsigned threads = 1);

struct ValidationReport {
    RunStatus analytic_status = RunStatus::Ok;
    double analytic_h = 0.0;
    double simulated_mean_h = 0.0;
    double relative_error = 0.0;
    double horizon_h = 0.0;
    bool pass = false;
};

/// Compares the closed-form wall-clock against the ensemble mean. A NoProgress
/// analytic result passes only when the simulation runs out to its horizon.
ValidationReport validate_analytic(const SimConfig& config, double tolerance, unsigned threads = 1);
ValidationReport validate_analytic(const SimConfig& config, const SimResult& sim, double tolerance);

}  // namespace llmcost
