#pragma once

#include <cstdint>

namespace llmcost {

/// Chinchilla-style constants: compute C = flop_per_token * tokens_per_param * P^token_scaling.
struct ScalingConstants {
    double flop_per_token = 6.0;
    double tokens_per_param = 20.0;
    // 2.0 is the theoretical exponent; the empirical fit is 1.91.
    double token_scaling = 2.0;

    void validate() const;
    bool operator==(const ScalingConstants&) const = default;
};

struct ModelSpec {
    double params = 1.8e12;
    std::int64_t experts = 1;  // 1 = dense

    void validate() const;
    bool operator==(const ModelSpec&) const = default;
};

struct CostRates {
    double sustained_flops_per_gpu = 150e12;
    double dollars_per_gpu_hour = 2.5;
    double cloud_multiplier = 4.8;

    void validate() const;
    bool operator==(const CostRates&) const = default;
};

struct DollarCost {
    double gpu_dollars = 0.0;
    double cloud_dollars = 0.0;
};

double required_tokens(const ModelSpec& model, const ScalingConstants& k);

/// Dense training compute in FLOP. Ignores model.experts.
double dense_training_flops(const ModelSpec& model, const ScalingConstants& k);

/// Mixture-of-experts compute: each token exercises one of K partitions, so the
/// dense cost shrinks by a factor K.
double moe_training_flops(const ModelSpec& model, const ScalingConstants& k);

double ideal_gpu_hours(double flops, const CostRates& rates);

DollarCost dollar_cost(double gpu_hours, const CostRates& rates);

}  // namespace llmcost
