#include "llmcost/projection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace llmcost {

void GrowthModel::validate() const {
    if (!(base_params > 0.0)) throw std::invalid_argument("base_params must be > 0");
    if (!(param_growth_per_year >= 0.0)) throw std::invalid_argument("param_growth must be >= 0");
    if (!(gpu_perf_per_dollar_doubling_years > 0.0)) {
        throw std::invalid_argument("gpu_perf_per_dollar_doubling_years must be > 0");
    }
    if (!(gpu_perf_growth_per_year > 0.0) || !(supercomputer_growth_per_year > 0.0) ||
        !(compute_doubling_months > 0.0)) {
        throw std::invalid_argument("growth rates must be > 0");
    }
}

const char* to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::BestCase: return "best_case";
        case ScenarioKind::BestGuess: return "best_guess";
        case ScenarioKind::WorstCase: return "worst_case";
        case ScenarioKind::Custom: return "custom";
    }
    return "?";
}

std::optional<ScenarioKind> scenario_kind_from_string(const std::string& name) {
    for (auto k : {ScenarioKind::BestCase, ScenarioKind::BestGuess, ScenarioKind::WorstCase,
                   ScenarioKind::Custom}) {
        if (name == to_string(k)) return k;
    }
    return std::nullopt;
}

Scenario Scenario::best_case() { return {ScenarioKind::BestCase, 8.0, 20.0, 8.0, 1.91}; }
Scenario Scenario::best_guess() { return {ScenarioKind::BestGuess, 4.0, 40.0, 8.0, 1.91}; }
Scenario Scenario::worst_case() { return {ScenarioKind::WorstCase, 0.0, 120.0, 8.0, 1.91}; }

Scenario Scenario::preset(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::BestCase: return best_case();
        case ScenarioKind::WorstCase: return worst_case();
        case ScenarioKind::BestGuess: return best_guess();
        case ScenarioKind::Custom: break;
    }
    Scenario s = best_guess();
    s.kind = ScenarioKind::Custom;
    return s;
}

void Scenario::validate() const {
    if (!(flop_per_param > 0.0)) throw std::invalid_argument("flop_per_param must be > 0");
    if (!(experts_per_year >= 0.0)) throw std::invalid_argument("experts_per_year must be >= 0");
    if (!(base_experts >= 1.0)) throw std::invalid_argument("base_experts must be >= 1");
    if (!(token_scaling >= 1.0 && token_scaling <= 2.5)) {
        throw std::invalid_argument("token_scaling must lie in [1.0, 2.5]");
    }
}

void MarketModel::validate() const {
    if (!(gpu_base_usd > 0.0) || !(it_spend_usd > 0.0)) {
        throw std::invalid_argument("market anchors must be > 0");
    }
    if (!(gpu_base_growth_per_year > -1.0) || !(it_spend_growth_per_year > -1.0)) {
        throw std::invalid_argument("market growth factors must be positive");
    }
}

double model_size_at(double year, const GrowthModel& growth) {
    if (year < growth.base_year - 10) throw std::invalid_argument("year is more than 10 years before base_year");
    return growth.base_params * std::pow(1.0 + growth.param_growth_per_year, year - growth.base_year);
}

std::int64_t experts_at(double year, const Scenario& scenario, const GrowthModel& growth) {
    const double k = scenario.base_experts + scenario.experts_per_year * (year - growth.base_year);
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(k)));
}

double dollars_per_flop_at(double year, const GrowthModel& growth, const CostRates& rates) {
    const double base = rates.dollars_per_gpu_hour / (rates.sustained_flops_per_gpu * 3600.0);
    return base * std::exp2(-(year - growth.base_year) / growth.gpu_perf_per_dollar_doubling_years);
}

MarketValue market_value_at(double year, const GrowthModel& growth, const MarketModel& market) {
    const double dt = year - growth.base_year;
    return {market.gpu_base_usd * std::pow(1.0 + market.gpu_base_growth_per_year, dt),
            market.it_spend_usd * std::pow(1.0 + market.it_spend_growth_per_year, dt)};
}

YearRow training_cost_at(double year, const Scenario& scenario, const ProjectionInputs& in) {
    YearRow row;
    row.year = year;
    row.scenario = scenario.name();
    row.params = model_size_at(year, in.growth);
    row.experts = experts_at(year, scenario, in.growth);
    row.flops = scenario.flop_per_param * std::pow(row.params, scenario.token_scaling) /
                static_cast<double>(row.experts);
    row.gpu_cost_usd = in.cost_scale * row.flops * dollars_per_flop_at(year, in.growth, in.rates);
    row.cloud_cost_usd = row.gpu_cost_usd * in.rates.cloud_multiplier;
    // GPU price stays fixed while throughput per GPU follows the price-performance trend.
    row.gpu_hours = row.gpu_cost_usd / in.rates.dollars_per_gpu_hour;
    const MarketValue m = market_value_at(year, in.growth, in.market);
    row.gpu_base_usd = m.gpu_base_usd;
    row.it_spend_usd = m.it_spend_usd;
    return row;
}

double compute_growth_rate(const GrowthModel& growth, const Scenario& scenario) {
    return std::pow(1.0 + growth.param_growth_per_year, scenario.token_scaling) - 1.0;
}

namespace {

std::optional<double> first_crossing(const Scenario& scenario, const ProjectionInputs& in,
                                     double MarketValue::*curve) {
    double prev_gap = 0.0;
    for (int year = kCrossingFirstYear; year <= kCrossingLastYear; ++year) {
        const double y = year;
        const double cost = training_cost_at(y, scenario, in).gpu_cost_usd;
        const double market = market_value_at(y, in.growth, in.market).*curve;
        const double gap = std::log(cost) - std::log(market);  // > 0 once cost exceeds market
        if (gap > 0.0) {
            if (year == kCrossingFirstYear) return y;
            return y - 1.0 + (-prev_gap) / (gap - prev_gap);
        }
        prev_gap = gap;
    }
    return std::nullopt;
}

}  // namespace

Crossings intersection_year(const Scenario& scenario, const ProjectionInputs& in) {
    return {first_crossing(scenario, in, &MarketValue::gpu_base_usd),
            first_crossing(scenario, in, &MarketValue::it_spend_usd)};
}

std::optional<double> scenario_spread(std::span<const Scenario> scenarios, const ProjectionInputs& in) {
    std::vector<double> years;
    for (const auto& s : scenarios) {
        const auto c = intersection_year(s, in).gpu_base;
        if (!c) return std::nullopt;
        years.push_back(*c);
    }
    if (years.empty()) return 0.0;
    const auto [lo, hi] = std::minmax_element(years.begin(), years.end());
    return *hi - *lo;
}

std::optional<double> scenario_spread(const ProjectionInputs& in) {
    const Scenario all[] = {Scenario::best_case(), Scenario::best_guess(), Scenario::worst_case()};
    return scenario_spread(all, in);
}

std::vector<YearRow> project_years(int first_year, int last_year, std::span<const Scenario> scenarios,
                                   const ProjectionInputs& in) {
    if (last_year < first_year) throw std::invalid_argument("year range is empty");
    std::vector<YearRow> rows;
    for (const auto& s : scenarios) {
        for (int year = first_year; year <= last_year; ++year) {
            rows.push_back(training_cost_at(year, s, in));
        }
    }
    return rows;
}

}  // namespace llmcost
