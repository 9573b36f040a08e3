#include "llmcost/failure_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <utility>

#include "llmcost/parallel.hpp"
#include "llmcost/philox.hpp"

namespace llmcost {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Phase { Compute, Checkpoint, Restart };

}  // namespace

void SimConfig::validate() const {
    model.validate();
    constants.validate();
    cluster.validate();
    resilience.validate();
    if (replications < 1) throw std::invalid_argument("replications must be >= 1");
    if (!(horizon_factor >= 1.0)) throw std::invalid_argument("horizon_factor must be >= 1");
    if (work_h && !(*work_h >= 0.0)) throw std::invalid_argument("work_h must be >= 0");
}

const char* to_string(EventKind kind) {
    switch (kind) {
        case EventKind::Fail: return "FAIL";
        case EventKind::Repair: return "REPAIR";
        case EventKind::CkptStart: return "CKPT_START";
        case EventKind::CkptEnd: return "CKPT_END";
        case EventKind::Interrupt: return "INTERRUPT";
        case EventKind::Restart: return "RESTART";
        case EventKind::Done: return "DONE";
    }
    return "?";
}

SimPlan make_plan(const SimConfig& config) {
    config.validate();
    SimPlan p;
    p.work_h = config.work_h ? *config.work_h
                             : solve_hours(config.model, config.constants, config.cluster, config.resilience);
    p.ckpt_h = checkpoint_write_time(config.cluster, config.resilience);
    if (!std::isfinite(p.work_h)) throw std::invalid_argument("work target must be finite");
    if (!std::isfinite(p.ckpt_h)) throw std::invalid_argument("checkpoint time must be finite");

    const double mtti = system_mtti(config.cluster);
    p.failure_rate_per_h = std::isinf(mtti) ? 0.0 : 1.0 / mtti;
    p.groups = group_count(config.cluster, config.resilience);
    p.tolerated = config.resilience.tolerated_group_failures;
    p.ttr_h = config.resilience.ttr_h;
    p.tau_h = optimal_checkpoint_interval(p.ckpt_h, effective_mtti(mtti, p.tolerated), p.work_h);

    const RunBreakdown analytic = expected_runtime_for_work(p.work_h, config.cluster, config.resilience);
    p.horizon_h = config.horizon_factor * (p.work_h + analytic.ckpt_overhead_h);
    return p;
}

ReplicationResult simulate_run(const SimConfig& config, std::uint64_t replication_index,
                               const TraceSink& trace) {
    return simulate_run(make_plan(config), config.seed, replication_index, trace);
}

ReplicationResult simulate_run(const SimPlan& plan, std::uint64_t seed, std::uint64_t replication_index,
                               const TraceSink& trace) {
    using Repair = std::pair<double, std::int64_t>;

    const auto groups = plan.groups;
    std::vector<std::int64_t> active(static_cast<std::size_t>(groups));
    std::iota(active.begin(), active.end(), std::int64_t{0});
    std::priority_queue<Repair, std::vector<Repair>, std::greater<>> repairs;

    ReplicationResult result;
    double t = 0.0;
    double progress = 0.0;
    double committed = 0.0;
    std::int64_t ckpt_index = 0;
    Phase phase = Phase::Compute;
    double phase_end = kInf;

    std::uint64_t ordinal = 0;
    double next_fail = kInf;
    double group_draw = 0.0;
    auto schedule_failure = [&] {
        if (plan.failure_rate_per_h <= 0.0) return;
        const auto block = Philox4x32::block(seed, replication_index, ordinal++);
        const double u = Philox4x32::to_unit(block[0], block[1]);
        next_fail = t - std::log1p(-u) / plan.failure_rate_per_h;
        group_draw = Philox4x32::to_unit(block[2], block[3]);
    };
    auto emit = [&](EventKind kind, std::int64_t group = -1) {
        if (trace) trace(TraceEvent{t, kind, group});
    };

    schedule_failure();
    for (;;) {
        const double throughput = static_cast<double>(active.size()) / static_cast<double>(groups);
        const double next_ckpt = static_cast<double>(ckpt_index + 1) * plan.tau_h;
        const bool ckpt_pending = plan.tau_h > 0.0 && next_ckpt < plan.work_h;
        const double target = ckpt_pending ? next_ckpt : plan.work_h;

        double t_phase = phase_end;
        if (phase == Phase::Compute) {
            if (progress >= target) {
                t_phase = t;
            } else {
                t_phase = throughput > 0.0 ? t + (target - progress) / throughput : kInf;
            }
        }
        const double t_repair = repairs.empty() ? kInf : repairs.top().first;
        const double t_next = std::min({t_phase, t_repair, next_fail});

        if (t_next > plan.horizon_h) {
            result.wall_h = plan.horizon_h;
            result.truncated = true;
            return result;
        }

        if (phase == Phase::Compute) progress += throughput * (t_next - t);
        t = t_next;

        if (t_phase == t_next) {
            switch (phase) {
                case Phase::Compute:
                    progress = target;
                    if (!ckpt_pending) {
                        emit(EventKind::Done);
                        result.wall_h = t;
                        return result;
                    }
                    emit(EventKind::CkptStart);
                    phase = Phase::Checkpoint;
                    phase_end = t + plan.ckpt_h;
                    break;
                case Phase::Checkpoint:
                    committed = progress;
                    ++ckpt_index;
                    ++result.counts.checkpoints;
                    emit(EventKind::CkptEnd);
                    phase = Phase::Compute;
                    phase_end = kInf;
                    break;
                case Phase::Restart:
                    repairs = {};
                    active.resize(static_cast<std::size_t>(groups));
                    std::iota(active.begin(), active.end(), std::int64_t{0});
                    emit(EventKind::Restart);
                    phase = Phase::Compute;
                    phase_end = kInf;
                    break;
            }
            continue;
        }

        if (t_repair == t_next) {
            const auto group = repairs.top().second;
            repairs.pop();
            active.push_back(group);
            emit(EventKind::Repair, group);
            continue;
        }

        ++result.counts.failures;
        if (active.empty()) {
            emit(EventKind::Fail);
        } else {
            const auto n = active.size();
            const auto pick = std::min(n - 1, static_cast<std::size_t>(group_draw * static_cast<double>(n)));
            const auto group = active[pick];
            active[pick] = active.back();
            active.pop_back();
            repairs.emplace(t + plan.ttr_h, group);
            emit(EventKind::Fail, group);
        }
        schedule_failure();

        const auto down = groups - static_cast<std::int64_t>(active.size());
        if (down > plan.tolerated) {
            // A checkpoint in flight is discarded; progress rolls back.
            ++result.counts.interrupts;
            emit(EventKind::Interrupt);
            progress = committed;
            phase = Phase::Restart;
            phase_end = t + plan.ttr_h;
        }
    }
}

SimResult run_ensemble(const SimConfig& config, unsigned threads) {
    const SimPlan plan = make_plan(config);
    SimResult r;
    r.generator = Philox4x32::name;
    r.replications.resize(config.replications);
    detail::parallel_for(r.replications.size(), threads, [&](std::size_t i) {
        r.replications[i] = simulate_run(plan, config.seed, i);
    });

    // Shifted sums keep identical samples at exactly zero spread.
    const auto n = static_cast<double>(r.replications.size());
    const double shift = r.replications.front().wall_h;
    double sum = 0.0;
    double interrupts = 0.0;
    double checkpoints = 0.0;
    for (const auto& rep : r.replications) {
        sum += rep.wall_h - shift;
        interrupts += static_cast<double>(rep.counts.interrupts);
        checkpoints += static_cast<double>(rep.counts.checkpoints);
        if (rep.truncated) ++r.truncated;
    }
    r.mean_wall_h = shift + sum / n;
    r.mean_interrupts = interrupts / n;
    r.mean_checkpoints = checkpoints / n;
    if (r.replications.size() > 1) {
        double ss = 0.0;
        for (const auto& rep : r.replications) {
            const double d = rep.wall_h - r.mean_wall_h;
            ss += d * d;
        }
        r.stddev_wall_h = std::sqrt(ss / (n - 1.0));
        r.ci95_half_width = 1.96 * r.stddev_wall_h / std::sqrt(n);
    }
    return r;
}

ValidationReport validate_analytic(const SimConfig& config, const SimResult& sim, double tolerance) {
    if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
    const SimPlan plan = make_plan(config);
    const RunBreakdown analytic = expected_runtime_for_work(plan.work_h, config.cluster, config.resilience);

    ValidationReport v;
    v.analytic_status = analytic.status;
    v.analytic_h = analytic.wall_h;
    v.simulated_mean_h = sim.mean_wall_h;
    v.horizon_h = plan.horizon_h;
    if (analytic.status == RunStatus::NoProgress) {
        v.relative_error = kInf;
        v.pass = sim.truncated == sim.replications.size();
        return v;
    }
    v.relative_error = analytic.wall_h > 0.0 ? std::abs(analytic.wall_h - sim.mean_wall_h) / analytic.wall_h
                                              : std::abs(sim.mean_wall_h);
    v.pass = v.relative_error <= tolerance;
    return v;
}

ValidationReport validate_analytic(const SimConfig& config, double tolerance, unsigned threads) {
    return validate_analytic(config, run_ensemble(config, threads), tolerance);
}

}  // namespace llmcost
