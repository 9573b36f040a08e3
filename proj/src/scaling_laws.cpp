#include "llmcost/scaling_laws.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace llmcost {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0)) {
        throw std::invalid_argument(std::string(name) + " must be > 0");
    }
}

}  // namespace

void ScalingConstants::validate() const {
    require_positive(flop_per_token, "flop_per_token");
    require_positive(tokens_per_param, "tokens_per_param");
    if (!(token_scaling >= 1.0 && token_scaling <= 2.5)) {
        throw std::invalid_argument("token_scaling must lie in [1.0, 2.5]");
    }
}

void ModelSpec::validate() const {
    require_positive(params, "params");
    if (experts < 1) throw std::invalid_argument("experts must be >= 1");
}

void CostRates::validate() const {
    require_positive(sustained_flops_per_gpu, "sustained_flops_per_gpu");
    require_positive(dollars_per_gpu_hour, "dollars_per_gpu_hour");
    require_positive(cloud_multiplier, "cloud_multiplier");
}

double required_tokens(const ModelSpec& model, const ScalingConstants& k) {
    return k.tokens_per_param * std::pow(model.params, k.token_scaling - 1.0);
}

double dense_training_flops(const ModelSpec& model, const ScalingConstants& k) {
    return k.flop_per_token * k.tokens_per_param * std::pow(model.params, k.token_scaling);
}

double moe_training_flops(const ModelSpec& model, const ScalingConstants& k) {
    return dense_training_flops(model, k) / static_cast<double>(model.experts);
}

double ideal_gpu_hours(double flops, const CostRates& rates) {
    return flops / (rates.sustained_flops_per_gpu * 3600.0);
}

DollarCost dollar_cost(double gpu_hours, const CostRates& rates) {
    DollarCost c;
    c.gpu_dollars = gpu_hours * rates.dollars_per_gpu_hour;
    c.cloud_dollars = c.gpu_dollars * rates.cloud_multiplier;
    return c;
}

}  // namespace llmcost
