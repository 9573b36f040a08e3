#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "llmcost/commands.hpp"
#include "llmcost/csv.hpp"

using namespace llmcost;

TEST_CASE("number formatting") {
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(1.2e26) == "1.2e+26");
    CHECK(format_number(2039.4837392395102) == "2039.4837392395102");
    CHECK(format_number(INFINITY).empty());
    CHECK(format_number(NAN).empty());
    CHECK(format_count(-12) == "-12");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("csv quoting and width") {
    CsvTable t({"a", "b"});
    t.add_comment("meta=1");
    t.add_row({"x,y", "say \"hi\""});
    CHECK(t.str() == "# meta=1\na,b\n\"x,y\",\"say \"\"hi\"\"\"\n");
    CHECK_THROWS_AS(t.add_row({"only"}), std::logic_error);
}

TEST_CASE("gpu ranges") {
    CHECK(GpuRange{}.values() == std::vector<std::int64_t>{1024, 2048, 4096, 8192, 16384, 32768, 65536, 131072,
                                                           262144});
    CHECK(GpuRange::parse("10:50:5:linear").values() == std::vector<std::int64_t>{10, 20, 30, 40, 50});
    CHECK(GpuRange::parse("1:3:10:linear").values() == std::vector<std::int64_t>{1, 2, 3});
    CHECK(GpuRange::parse("7:100:1").values() == std::vector<std::int64_t>{7});
    CHECK_THROWS_AS(GpuRange::parse("10:5:3"), std::invalid_argument);
    CHECK_THROWS_AS(GpuRange::parse("a:5:3"), std::invalid_argument);
    CHECK_THROWS_AS(GpuRange::parse("1:5:3:cubic"), std::invalid_argument);
    CHECK_THROWS_AS(GpuRange::parse("1:5"), std::invalid_argument);
    CHECK(YearRange::parse("2025:2030").last == 2030);
    CHECK_THROWS_AS(YearRange::parse("2030:2025"), std::invalid_argument);
}

TEST_CASE("cost command") {
    const CommandOutput out = cmd_cost(Config{}, 1e12, 1);
    REQUIRE(out.table.rows().size() == 2);
    CHECK(out.table.rows()[0][0] == "baseline");
    CHECK(out.table.rows()[1][0] == "optimized");
    CHECK(out.table.rows()[0][5] == "1.2e+26");
    CHECK(out.table.header().back() == "status");
    CHECK(out.exit_code == kExitOk);
    CHECK_THROWS_AS(cmd_cost(Config{}, -1.0), std::invalid_argument);
}

TEST_CASE("sweep command") {
    const std::vector<std::string> base{"baseline"};
    const CommandOutput out = cmd_sweep(Config{}, GpuRange{}, base, 2, true);
    CHECK(out.table.rows().size() == 9);
    CHECK(out.exit_code == kExitOk);
    REQUIRE(out.svg);
    CHECK(out.svg->find("<svg") != std::string::npos);

    // every cell stalls when the file system is very slow
    Config slow;
    slow.set("cluster.fs_bw_gbs", 0.001);
    const CommandOutput stalled = cmd_sweep(slow, GpuRange::parse("1024:4096:3"), base);
    CHECK(stalled.exit_code == kExitAllNoProgress);
    CHECK(stalled.table.rows()[0].back() == "NoProgress");
    CHECK(stalled.table.rows()[0][10].empty());

    const std::vector<std::string> bad{"turbo"};
    CHECK_THROWS_AS(cmd_sweep(Config{}, GpuRange{}, bad), std::invalid_argument);
}

TEST_CASE("project command") {
    const ScenarioKind guess[] = {ScenarioKind::BestGuess};
    const CommandOutput out = cmd_project(Config{}, YearRange{2023, 2040}, guess, false);
    CHECK(out.table.rows().size() == 18);
    CHECK(out.summary.find("2029.55") != std::string::npos);
    CHECK(out.summary.find("2032.37") != std::string::npos);
}

TEST_CASE("simulate command is byte-stable") {
    Config c;
    c.set("simulation.work_h", 200);
    SimulateOptions o;
    o.replications = 50;
    o.threads = 1;
    const std::string one = cmd_simulate(c, o).table.str();
    o.threads = 6;
    const std::string six = cmd_simulate(c, o).table.str();
    CHECK(one == six);
    CHECK(one.rfind("# generator=philox4x32-10 seed=42 replications=50 variant=baseline\n", 0) == 0);

    const CsvTable trace = simulate_trace(c, o, 3);
    REQUIRE(!trace.rows().empty());
    CHECK(trace.rows().back()[2] == "DONE");
    o.variant = "turbo";
    CHECK_THROWS_AS(cmd_simulate(c, o), std::invalid_argument);
}

TEST_CASE("report bundle") {
    Config c;
    c.set("simulation.work_h", 100);
    ReportOptions o;
    o.simulate.replications = 20;
    o.gpus = GpuRange::parse("1024:65536:4");
    o.svg = true;
    const ReportBundle b = cmd_report(c, o);
    REQUIRE(!b.files.empty());
    CHECK(b.files.front().first == "report.txt");
    std::vector<std::string> names;
    for (const auto& f : b.files) names.push_back(f.first);
    for (const char* expected : {"cost.csv", "sweep.csv", "sweep.svg", "project.csv", "project.svg",
                                 "simulate_baseline.csv", "simulate_optimized.csv"}) {
        CHECK(std::find(names.begin(), names.end(), expected) != names.end());
    }
    CHECK(b.exit_code == kExitOk);
}
