#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <cstring>
#include <vector>

#include "llmcost/failure_sim.hpp"
#include "oracle.hpp"

using namespace llmcost;

namespace {

// lambda = 0.1/h, delta = 0.5 h, W = 10 h, restart 2 h, one group.
SimConfig renewal_config() {
    SimConfig c;
    c.cluster.n_gpus = 1;
    c.cluster.gpus_per_cpu = 1;
    c.cluster.gpu_mtbf_h = 20;
    c.cluster.cpu_mtbf_h = 20;
    c.cluster.gpu_mem_gb = 1800;
    c.cluster.fs_bw_gbs = 1;
    c.resilience.ttr_h = 2;
    c.work_h = 10.0;
    c.seed = 1234;
    c.replications = 40000;
    c.horizon_factor = 1e6;
    return c;
}

SimConfig reference(const RunConfig& rc, std::uint64_t reps) {
    SimConfig c;
    c.cluster = rc.cluster;
    c.resilience = rc.resilience;
    c.work_h = 1000.0;
    c.seed = 42;
    c.replications = reps;
    return c;
}

}  // namespace

TEST_CASE("plan matches the analytic inputs") {
    const SimConfig c = renewal_config();
    const SimPlan p = make_plan(c);
    CHECK(p.failure_rate_per_h == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(p.ckpt_h == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p.tau_h == doctest::Approx(std::sqrt(10.0)).epsilon(1e-15));
    CHECK(p.groups == 1);
}

TEST_CASE("renewal oracle, single group") {
    const SimConfig c = renewal_config();
    const double expected = static_cast<double>(oracle::renewal_expected_time(0.1L, 10, 0.5L, std::sqrt(10.0L), 2));
    CHECK(expected == doctest::Approx(16.849340750594438).epsilon(1e-12));
    const SimResult r = run_ensemble(c, 4);
    REQUIRE(r.ci95_half_width.has_value());
    CHECK(r.truncated == 0);
    INFO("mean " << r.mean_wall_h << " ci " << *r.ci95_half_width);
    CHECK(std::abs(r.mean_wall_h - expected) < 2.0 * *r.ci95_half_width);
}

TEST_CASE("renewal oracle, many groups with no tolerance") {
    SimConfig c = renewal_config();
    c.cluster.n_gpus = 4;
    c.cluster.gpus_per_cpu = 4;
    c.cluster.gpus_per_group = 1;
    c.cluster.gpu_mtbf_h = 80;
    c.cluster.gpu_mem_gb = 450;
    REQUIRE(make_plan(c).groups == 4);
    const SimResult r = run_ensemble(c, 4);
    const double expected = 16.849340750594438;
    CHECK(std::abs(r.mean_wall_h - expected) < 2.0 * *r.ci95_half_width);
}

TEST_CASE("failure-free runs match the closed form exactly") {
    for (const RunConfig& rc : {RunConfig::baseline(), RunConfig::optimized()}) {
        SimConfig c = reference(rc, 3);
        c.cluster.gpu_mtbf_h = INFINITY;
        c.cluster.cpu_mtbf_h = INFINITY;
        const SimResult r = run_ensemble(c);
        const RunBreakdown a = expected_runtime_for_work(1000.0, c.cluster, c.resilience);
        CHECK(a.n_ckpt == 0);
        CHECK(std::abs(r.mean_wall_h - a.wall_h) / a.wall_h <= 1e-9);
        CHECK(r.stddev_wall_h == 0.0);
        CHECK(r.replications[0].counts == EventCounts{0, 0, 0});
    }

    // forced checkpoints without failures: W + n*delta
    SimConfig c = renewal_config();
    c.cluster.gpu_mtbf_h = INFINITY;
    c.cluster.cpu_mtbf_h = INFINITY;
    c.replications = 1;
    SimPlan p = make_plan(c);
    p.tau_h = 3.0;
    const ReplicationResult r = simulate_run(p, 0, 0);
    CHECK(r.counts.checkpoints == 3);
    CHECK(r.wall_h == doctest::Approx(10.0 + 3 * 0.5).epsilon(1e-12));
}

TEST_CASE("reproducible and independent of threads") {
    const SimConfig c = reference(RunConfig::baseline(), 64);
    const SimResult a = run_ensemble(c, 1);
    const SimResult b = run_ensemble(c, 5);
    const SimResult again = run_ensemble(c, 1);
    REQUIRE(a.replications.size() == 64);
    for (std::size_t i = 0; i < a.replications.size(); ++i) {
        CHECK(std::memcmp(&a.replications[i].wall_h, &b.replications[i].wall_h, sizeof(double)) == 0);
        CHECK(a.replications[i].counts == b.replications[i].counts);
        CHECK(a.replications[i].wall_h == again.replications[i].wall_h);
    }
    CHECK(std::memcmp(&a.mean_wall_h, &b.mean_wall_h, sizeof(double)) == 0);
    CHECK(a.generator == "philox4x32-10");

    // a replication does not depend on how many others run
    CHECK(simulate_run(c, 17).wall_h == a.replications[17].wall_h);
    SimConfig other = c;
    other.seed = 43;
    CHECK(simulate_run(other, 17).wall_h != a.replications[17].wall_h);
}

TEST_CASE("trace is ordered and consistent with counts") {
    SimConfig c = reference(RunConfig::optimized(), 1);
    std::vector<TraceEvent> events;
    const ReplicationResult r = simulate_run(c, 3, [&](const TraceEvent& e) { events.push_back(e); });
    REQUIRE(!events.empty());
    CHECK(events.back().kind == EventKind::Done);
    CHECK(events.back().time_h == r.wall_h);
    std::uint64_t fails = 0, interrupts = 0, ckpts = 0, starts = 0;
    for (std::size_t i = 0; i < events.size(); ++i) {
        if (i > 0) CHECK(events[i].time_h >= events[i - 1].time_h);
        switch (events[i].kind) {
            case EventKind::Fail: ++fails; break;
            case EventKind::Interrupt: ++interrupts; break;
            case EventKind::CkptEnd: ++ckpts; break;
            case EventKind::CkptStart: ++starts; break;
            default: break;
        }
    }
    CHECK(fails == r.counts.failures);
    CHECK(interrupts == r.counts.interrupts);
    CHECK(ckpts == r.counts.checkpoints);
    CHECK(starts >= ckpts);
    CHECK(fails > interrupts);  // F = 5 absorbs most failures
}

TEST_CASE("interrupt rate follows the effective MTTI") {
    const SimConfig c = reference(RunConfig::baseline(), 400);
    const SimResult r = run_ensemble(c, 4);
    const double mtti = system_mtti(c.cluster);
    CHECK(r.mean_interrupts == doctest::Approx(r.mean_wall_h / mtti).epsilon(0.05));
}

TEST_CASE("NoProgress configurations run out to the horizon") {
    SimConfig c = reference(RunConfig::baseline(), 8);
    c.cluster.n_gpus = 262144;
    c.horizon_factor = 3;
    const RunBreakdown a = expected_runtime_for_work(1000.0, c.cluster, c.resilience);
    REQUIRE(a.status == RunStatus::NoProgress);
    const SimResult r = run_ensemble(c, 2);
    CHECK(r.truncated == 8);
    CHECK(r.mean_wall_h == make_plan(c).horizon_h);
    const ValidationReport v = validate_analytic(c, r, 0.2);
    CHECK(v.analytic_status == RunStatus::NoProgress);
    CHECK(v.pass);
}

TEST_CASE("validation against the closed form") {
    const SimConfig c = reference(RunConfig::optimized(), 300);
    const ValidationReport v = validate_analytic(c, 0.2, 4);
    CHECK(v.analytic_status == RunStatus::Ok);
    CHECK(v.pass);
    CHECK(v.relative_error < 0.2);
    CHECK_THROWS_AS(validate_analytic(c, 0.0), std::invalid_argument);
}

TEST_CASE("invalid configurations") {
    SimConfig c;
    c.replications = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.work_h = -1.0;
    CHECK_THROWS_AS(make_plan(c), std::invalid_argument);
    c = {};
    c.horizon_factor = 0.5;
    CHECK_THROWS_AS(run_ensemble(c), std::invalid_argument);
}
