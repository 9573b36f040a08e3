#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "llmcost/config.hpp"
#include "llmcost/csv.hpp"

namespace llmcost {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitAllNoProgress = 2;
inline constexpr int kExitIoError = 3;

/// START:END:COUNT[:linear|geometric] over GPU counts.
struct GpuRange {
    enum class Spacing { Linear, Geometric };

    std::int64_t start = 1024;
    std::int64_t end = 262144;
    std::size_t count = 9;
    Spacing spacing = Spacing::Geometric;

    static GpuRange parse(const std::string& spec);
    std::vector<std::int64_t> values() const;
};

/// START:END, inclusive.
struct YearRange {
    int first = 2023;
    int last = 2040;

    static YearRange parse(const std::string& spec);
};

struct CommandOutput {
    CsvTable table;
    std::string summary;  // human-readable, goes to the error stream
    std::optional<std::string> svg;
    int exit_code = kExitOk;
};

CommandOutput cmd_cost(const Config& config, std::optional<double> params = std::nullopt,
                       std::optional<std::int64_t> experts = std::nullopt);

CommandOutput cmd_sweep(const Config& config, const GpuRange& gpus,
                        std::span<const std::string> variants = {}, unsigned threads = 1, bool svg = false);

CommandOutput cmd_project(const Config& config, const YearRange& years,
                          std::span<const ScenarioKind> scenarios = {}, bool svg = false);

struct SimulateOptions {
    std::uint64_t seed = 42;
    std::uint64_t replications = 1000;
    std::string variant = "baseline";
    unsigned threads = 1;
    double tolerance = 0.20;
};

CommandOutput cmd_simulate(const Config& config, const SimulateOptions& options);

/// Event trace of one replication: replication,time_h,kind,group_id.
CsvTable simulate_trace(const Config& config, const SimulateOptions& options, std::uint64_t replication);

struct ReportOptions {
    SimulateOptions simulate;
    GpuRange gpus;
    YearRange years;
    bool svg = false;
};

/// Every table plus a narrative, as (file name, contents) pairs.
struct ReportBundle {
    std::vector<std::pair<std::string, std::string>> files;
    int exit_code = kExitOk;
};

ReportBundle cmd_report(const Config& config, const ReportOptions& options);

}  // namespace llmcost
