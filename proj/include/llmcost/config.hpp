#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "llmcost/cluster_model.hpp"
#include "llmcost/projection.hpp"
#include "llmcost/scaling_laws.hpp"

namespace llmcost {

class ConfigError : public std::runtime_error {
public:
    enum class Kind { Parse, Validation };

    ConfigError(Kind kind, std::string key, int line, const std::string& message);

    Kind kind() const { return kind_; }
    const std::string& key() const { return key_; }
    int line() const { return line_; }  // 1-based; 0 when not tied to a line

private:
    Kind kind_;
    std::string key_;
    int line_;
};

/// Every configurable value, keyed by dotted path ("cluster.gpu_mtbf_h").
/// Values are kept in document units so that serialize/parse is lossless.
class Config {
public:
    struct Entry {
        std::string key;
        double value;
        bool defaulted;
    };

    Config();

    const std::vector<Entry>& entries() const { return entries_; }
    double get(std::string_view key) const;
    void set(std::string_view key, double value);
    bool has_key(std::string_view key) const;

    /// Keys that took their default value, in document order.
    std::vector<std::string> defaulted_keys() const;

    ModelSpec model() const;
    ScalingConstants scaling() const;
    ClusterSpec cluster() const;
    ResilienceConfig resilience() const;
    RunConfig baseline() const;
    RunConfig optimized() const;
    std::optional<RunConfig> variant(std::string_view name) const;
    GrowthModel growth() const;
    MarketModel market() const;
    Scenario scenario(ScenarioKind kind) const;
    ProjectionInputs projection_inputs() const;
    std::optional<double> sim_work_h() const;  // unset when derived from the model
    double sim_horizon_factor() const;

    /// Range and cross-field checks; throws ConfigError naming the key.
    void validate() const;

    bool operator==(const Config& other) const;

private:
    friend Config parse_config(std::string_view text);
    Entry* find(std::string_view key);
    const Entry* find(std::string_view key) const;

    std::vector<Entry> entries_;
    std::vector<int> lines_;
};

/// Parses the YAML-style nested key/value document. Missing keys keep their
/// defaults; unknown keys and out-of-range values raise ConfigError.
Config parse_config(std::string_view text);

/// Writes every key, defaulted or not, in a form parse_config reads back exactly.
std::string serialize_config(const Config& config);

}  // namespace llmcost
