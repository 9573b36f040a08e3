#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "llmcost/scaling_laws.hpp"

namespace llmcost {

struct GrowthModel {
    int base_year = 2023;
    double base_params = 1.8e12;
    // Fractional growth: 1.8 means x2.8 per year.
    double param_growth_per_year = 1.8;
    double gpu_perf_per_dollar_doubling_years = 2.46;
    double gpu_perf_growth_per_year = 0.69;
    double supercomputer_growth_per_year = 0.78;
    double compute_doubling_months = 4.0;  // informational only

    void validate() const;
    bool operator==(const GrowthModel&) const = default;
};

enum class ScenarioKind { BestCase, BestGuess, WorstCase, Custom };

const char* to_string(ScenarioKind kind);
std::optional<ScenarioKind> scenario_kind_from_string(const std::string& name);

struct Scenario {
    ScenarioKind kind = ScenarioKind::BestGuess;
    double experts_per_year = 4.0;
    double flop_per_param = 40.0;  // FLOP per parameter with tokens folded in
    double base_experts = 8.0;
    double token_scaling = 1.91;

    static Scenario best_case();
    static Scenario best_guess();
    static Scenario worst_case();
    static Scenario preset(ScenarioKind kind);

    std::string name() const { return to_string(kind); }
    void validate() const;
    bool operator==(const Scenario&) const = default;
};

/// Compound-growth market curves the training cost is compared against.
/// The anchors are calibration inputs, not measured data.
struct MarketModel {
    double gpu_base_usd = 20e9;
    double gpu_base_growth_per_year = 0.25;
    double it_spend_usd = 4.7e12;
    double it_spend_growth_per_year = 0.05;

    void validate() const;
    bool operator==(const MarketModel&) const = default;
};

struct MarketValue {
    double gpu_base_usd = 0.0;
    double it_spend_usd = 0.0;
};

struct YearRow {
    double year = 0.0;
    std::string scenario;
    double params = 0.0;
    std::int64_t experts = 1;
    double flops = 0.0;
    double gpu_hours = 0.0;
    double gpu_cost_usd = 0.0;
    double cloud_cost_usd = 0.0;
    double gpu_base_usd = 0.0;
    double it_spend_usd = 0.0;
};

struct Crossings {
    std::optional<double> gpu_base;
    std::optional<double> it_spend;
};

/// Inputs shared by every projection query.
struct ProjectionInputs {
    GrowthModel growth;
    CostRates rates;
    MarketModel market;
    // Multiplies every projected cost; 1.0 outside what-if studies.
    double cost_scale = 1.0;
};

double model_size_at(double year, const GrowthModel& growth);

std::int64_t experts_at(double year, const Scenario& scenario, const GrowthModel& growth);

double dollars_per_flop_at(double year, const GrowthModel& growth, const CostRates& rates);

YearRow training_cost_at(double year, const Scenario& scenario, const ProjectionInputs& in);

/// Yearly growth of training FLOP from model size alone, (1 + g)^e - 1.
double compute_growth_rate(const GrowthModel& growth, const Scenario& scenario);

MarketValue market_value_at(double year, const GrowthModel& growth, const MarketModel& market);

inline constexpr int kCrossingFirstYear = 2023;
inline constexpr int kCrossingLastYear = 2040;

/// First year the GPU training cost exceeds each market curve, interpolated
/// linearly in log space between grid years. Unset when no crossing occurs
/// on the 2023-2040 grid.
Crossings intersection_year(const Scenario& scenario, const ProjectionInputs& in);

/// Largest pairwise gap between GPU-base crossings across the scenarios;
/// unset if any scenario never crosses.
std::optional<double> scenario_spread(std::span<const Scenario> scenarios, const ProjectionInputs& in);
std::optional<double> scenario_spread(const ProjectionInputs& in);

std::vector<YearRow> project_years(int first_year, int last_year, std::span<const Scenario> scenarios,
                                   const ProjectionInputs& in);

}  // namespace llmcost
