#include "llmcost/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace llmcost {

namespace {

enum class Check {
    Positive,         // > 0, finite
    PositiveOrInf,    // > 0, infinity allowed (MTBFs, market anchors)
    NonNegative,      // >= 0, finite
    Fraction,         // (0, 1]
    SeqFraction,      // [0, 1)
    TokenScaling,     // [1, 2.5]
    GrowthFactor,     // > -1
    AtLeastOne,       // >= 1, real
    Count,            // integer >= 1
    CountOrZero,      // integer >= 0
    Year,             // integer
};

struct KeySpec {
    std::string key;
    double default_value;
    Check check;
};

// Document order; serialize_config writes keys in this order.
const std::vector<KeySpec>& key_table() {
    static const std::vector<KeySpec> table = [] {
        std::vector<KeySpec> t = {
            {"model.params", 1.8e12, Check::Positive},
            {"model.experts", 1, Check::Count},
            {"scaling.flop_per_token", 6, Check::Positive},
            {"scaling.tokens_per_param", 20, Check::Positive},
            {"scaling.token_scaling", 2.0, Check::TokenScaling},
            {"cluster.n_gpus", 50000, Check::Count},
            {"cluster.gpu_mem_gb", 80, Check::NonNegative},
            {"cluster.gpu_mtbf_h", 950000, Check::PositiveOrInf},
            {"cluster.cpu_mtbf_h", 1500000, Check::PositiveOrInf},
            {"cluster.gpus_per_cpu", 4, Check::Count},
            {"cluster.tf_per_gpu", 150, Check::Positive},
            {"cluster.fs_bw_gbs", 500, Check::Positive},
            {"cluster.gpus_per_group", 512, Check::Count},
            {"cluster.cost_per_gpu_h", 2.5, Check::Positive},
            {"cluster.cloud_multiplier", 4.8, Check::Positive},
            {"resilience.ckpt_mem_fraction", 1.0, Check::Fraction},
            {"resilience.ft_f", 0, Check::CountOrZero},
            {"resilience.ft_g", 100, Check::Count},
            {"resilience.ttr_h", 2, Check::NonNegative},
            {"resilience.seq_comp", 0.01, Check::SeqFraction},
            {"optimized.fs_bw_gbs", 2000, Check::Positive},
            {"optimized.ckpt_mem_fraction", 0.5, Check::Fraction},
            {"optimized.ft_f", 5, Check::CountOrZero},
            {"growth.base_year", 2023, Check::Year},
            {"growth.base_params", 1.8e12, Check::Positive},
            {"growth.param_growth", 1.8, Check::NonNegative},
            {"growth.gpu_perf_per_dollar_doubling_years", 2.46, Check::Positive},
            {"growth.gpu_perf_growth", 0.69, Check::Positive},
            {"growth.supercomputer_growth", 0.78, Check::Positive},
            {"growth.compute_doubling_months", 4, Check::Positive},
        };
        for (auto kind : {ScenarioKind::BestCase, ScenarioKind::BestGuess, ScenarioKind::WorstCase,
                          ScenarioKind::Custom}) {
            const Scenario s = Scenario::preset(kind);
            const std::string prefix = std::string("scenario.") + to_string(kind) + ".";
            auto add = [&](const char* field, double v, Check c) { t.push_back({prefix + field, v, c}); };
            add("experts_per_year", s.experts_per_year, Check::NonNegative);
            add("flop_per_param", s.flop_per_param, Check::Positive);
            add("base_experts", s.base_experts, Check::AtLeastOne);
            add("token_scaling", s.token_scaling, Check::TokenScaling);
        }
        const MarketModel m;
        t.push_back({"market.gpu_base_usd", m.gpu_base_usd, Check::PositiveOrInf});
        t.push_back({"market.gpu_base_growth", m.gpu_base_growth_per_year, Check::GrowthFactor});
        t.push_back({"market.it_spend_usd", m.it_spend_usd, Check::PositiveOrInf});
        t.push_back({"market.it_spend_growth", m.it_spend_growth_per_year, Check::GrowthFactor});
        t.push_back({"simulation.work_h", 0, Check::NonNegative});
        t.push_back({"simulation.horizon_factor", 50, Check::AtLeastOne});
        return t;
    }();
    return table;
}

const KeySpec* find_spec(std::string_view key) {
    for (const auto& s : key_table()) {
        if (key == s.key) return &s;
    }
    return nullptr;
}

bool is_section_prefix(std::string_view path) {
    for (const auto& s : key_table()) {
        const std::string_view k = s.key;
        if (k.size() > path.size() && k.substr(0, path.size()) == path && k[path.size()] == '.') return true;
    }
    return false;
}

std::string range_message(Check c) {
    switch (c) {
        case Check::Positive: return "must be finite and > 0";
        case Check::PositiveOrInf: return "must be > 0";
        case Check::NonNegative: return "must be finite and >= 0";
        case Check::Fraction: return "must lie in (0, 1]";
        case Check::SeqFraction: return "must lie in [0, 1)";
        case Check::TokenScaling: return "must lie in [1.0, 2.5]";
        case Check::GrowthFactor: return "must be finite and > -1";
        case Check::AtLeastOne: return "must be finite and >= 1";
        case Check::Count: return "must be an integer >= 1";
        case Check::CountOrZero: return "must be an integer >= 0";
        case Check::Year: return "must be an integer year";
    }
    return "is out of range";
}

bool in_range(double v, Check c) {
    const bool finite = std::isfinite(v);
    const bool integral = finite && std::floor(v) == v && std::abs(v) < 9.0e15;
    switch (c) {
        case Check::Positive: return finite && v > 0.0;
        case Check::PositiveOrInf: return v > 0.0;
        case Check::NonNegative: return finite && v >= 0.0;
        case Check::Fraction: return v > 0.0 && v <= 1.0;
        case Check::SeqFraction: return v >= 0.0 && v < 1.0;
        case Check::TokenScaling: return v >= 1.0 && v <= 2.5;
        case Check::GrowthFactor: return finite && v > -1.0;
        case Check::AtLeastOne: return finite && v >= 1.0;
        case Check::Count: return integral && v >= 1.0;
        case Check::CountOrZero: return integral && v >= 0.0;
        case Check::Year: return integral;
    }
    return false;
}

std::string format_value(double v) {
    if (std::isinf(v)) return v > 0 ? ".inf" : "-.inf";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

void walk(const YAML::Node& node, const std::string& prefix, Config& config, std::vector<int>& lines,
          const std::vector<Config::Entry>& entries) {
    if (node.IsNull()) return;
    if (!node.IsMap()) {
        throw ConfigError(ConfigError::Kind::Parse, prefix.empty() ? "<document>" : prefix,
                          node.Mark().line + 1, "expected a mapping");
    }
    for (const auto& item : node) {
        const int line = item.first.Mark().line + 1;
        std::string name;
        try {
            name = item.first.as<std::string>();
        } catch (const YAML::Exception&) {
            throw ConfigError(ConfigError::Kind::Parse, prefix, line, "mapping key is not a scalar");
        }
        const std::string path = prefix.empty() ? name : prefix + "." + name;
        if (is_section_prefix(path)) {
            walk(item.second, path, config, lines, entries);
            continue;
        }
        if (!find_spec(path)) {
            throw ConfigError(ConfigError::Kind::Validation, path, line, "unknown key");
        }
        if (!item.second.IsScalar()) {
            throw ConfigError(ConfigError::Kind::Parse, path, line, "expected a number");
        }
        double value = 0.0;
        try {
            value = item.second.as<double>();
        } catch (const YAML::Exception&) {
            throw ConfigError(ConfigError::Kind::Parse, path, line,
                              "'" + item.second.Scalar() + "' is not a number");
        }
        config.set(path, value);
        for (std::size_t i = 0; i < entries.size(); ++i) {
            if (entries[i].key == path) lines[i] = line;
        }
    }
}

std::string where(const std::string& key, int line) {
    std::string s = key;
    if (line > 0) s += " (line " + std::to_string(line) + ")";
    return s;
}

}  // namespace

ConfigError::ConfigError(Kind kind, std::string key, int line, const std::string& message)
    : std::runtime_error((kind == Kind::Parse ? "config parse error: " : "config error: ") +
                         where(key, line) + ": " + message),
      kind_(kind),
      key_(std::move(key)),
      line_(line) {}

Config::Config() {
    for (const auto& s : key_table()) entries_.push_back({s.key, s.default_value, true});
    lines_.assign(entries_.size(), 0);
}

Config::Entry* Config::find(std::string_view key) {
    for (auto& e : entries_) {
        if (e.key == key) return &e;
    }
    return nullptr;
}

const Config::Entry* Config::find(std::string_view key) const {
    for (const auto& e : entries_) {
        if (e.key == key) return &e;
    }
    return nullptr;
}

bool Config::has_key(std::string_view key) const { return find(key) != nullptr; }

double Config::get(std::string_view key) const {
    const Entry* e = find(key);
    if (!e) throw ConfigError(ConfigError::Kind::Validation, std::string(key), 0, "unknown key");
    return e->value;
}

void Config::set(std::string_view key, double value) {
    Entry* e = find(key);
    if (!e) throw ConfigError(ConfigError::Kind::Validation, std::string(key), 0, "unknown key");
    e->value = value;
    e->defaulted = false;
}

std::vector<std::string> Config::defaulted_keys() const {
    std::vector<std::string> out;
    for (const auto& e : entries_) {
        if (e.defaulted) out.push_back(e.key);
    }
    return out;
}

bool Config::operator==(const Config& other) const {
    if (entries_.size() != other.entries_.size()) return false;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].key != other.entries_[i].key || entries_[i].value != other.entries_[i].value) {
            return false;
        }
    }
    return true;
}

void Config::validate() const {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        const KeySpec* spec = find_spec(e.key);
        if (!in_range(e.value, spec->check)) {
            throw ConfigError(ConfigError::Kind::Validation, e.key, lines_[i],
                              format_value(e.value) + " " + range_message(spec->check));
        }
    }
    auto line_of = [&](std::string_view key) {
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (entries_[i].key == key) return lines_[i];
        }
        return 0;
    };
    const double groups = get("resilience.ft_g");
    for (const char* key : {"resilience.ft_f", "optimized.ft_f"}) {
        if (get(key) >= groups) {
            throw ConfigError(ConfigError::Kind::Validation, key, line_of(key),
                              "tolerated group failures must be < resilience.ft_g");
        }
    }
}

ModelSpec Config::model() const {
    return {get("model.params"), static_cast<std::int64_t>(get("model.experts"))};
}

ScalingConstants Config::scaling() const {
    return {get("scaling.flop_per_token"), get("scaling.tokens_per_param"), get("scaling.token_scaling")};
}

ClusterSpec Config::cluster() const {
    ClusterSpec c;
    c.n_gpus = static_cast<std::int64_t>(get("cluster.n_gpus"));
    c.gpus_per_cpu = static_cast<std::int64_t>(get("cluster.gpus_per_cpu"));
    c.gpu_mtbf_h = get("cluster.gpu_mtbf_h");
    c.cpu_mtbf_h = get("cluster.cpu_mtbf_h");
    c.gpu_mem_gb = get("cluster.gpu_mem_gb");
    c.fs_bw_gbs = get("cluster.fs_bw_gbs");
    c.gpus_per_group = static_cast<std::int64_t>(get("cluster.gpus_per_group"));
    c.rates.sustained_flops_per_gpu = get("cluster.tf_per_gpu") * 1e12;
    c.rates.dollars_per_gpu_hour = get("cluster.cost_per_gpu_h");
    c.rates.cloud_multiplier = get("cluster.cloud_multiplier");
    return c;
}

ResilienceConfig Config::resilience() const {
    ResilienceConfig r;
    r.ckpt_mem_fraction = get("resilience.ckpt_mem_fraction");
    r.tolerated_group_failures = static_cast<std::int64_t>(get("resilience.ft_f"));
    r.group_count_cap = static_cast<std::int64_t>(get("resilience.ft_g"));
    r.ttr_h = get("resilience.ttr_h");
    r.seq_fraction = get("resilience.seq_comp");
    return r;
}

RunConfig Config::baseline() const { return {"baseline", cluster(), resilience()}; }

RunConfig Config::optimized() const {
    RunConfig c{"optimized", cluster(), resilience()};
    c.cluster.fs_bw_gbs = get("optimized.fs_bw_gbs");
    c.resilience.ckpt_mem_fraction = get("optimized.ckpt_mem_fraction");
    c.resilience.tolerated_group_failures = static_cast<std::int64_t>(get("optimized.ft_f"));
    return c;
}

std::optional<RunConfig> Config::variant(std::string_view name) const {
    if (name == "baseline") return baseline();
    if (name == "optimized") return optimized();
    return std::nullopt;
}

GrowthModel Config::growth() const {
    GrowthModel g;
    g.base_year = static_cast<int>(get("growth.base_year"));
    g.base_params = get("growth.base_params");
    g.param_growth_per_year = get("growth.param_growth");
    g.gpu_perf_per_dollar_doubling_years = get("growth.gpu_perf_per_dollar_doubling_years");
    g.gpu_perf_growth_per_year = get("growth.gpu_perf_growth");
    g.supercomputer_growth_per_year = get("growth.supercomputer_growth");
    g.compute_doubling_months = get("growth.compute_doubling_months");
    return g;
}

MarketModel Config::market() const {
    return {get("market.gpu_base_usd"), get("market.gpu_base_growth"), get("market.it_spend_usd"),
            get("market.it_spend_growth")};
}

Scenario Config::scenario(ScenarioKind kind) const {
    const std::string prefix = std::string("scenario.") + to_string(kind) + ".";
    Scenario s;
    s.kind = kind;
    s.experts_per_year = get(prefix + "experts_per_year");
    s.flop_per_param = get(prefix + "flop_per_param");
    s.base_experts = get(prefix + "base_experts");
    s.token_scaling = get(prefix + "token_scaling");
    return s;
}

ProjectionInputs Config::projection_inputs() const {
    return {growth(), cluster().rates, market(), 1.0};
}

std::optional<double> Config::sim_work_h() const {
    const double w = get("simulation.work_h");
    if (w > 0.0) return w;
    return std::nullopt;
}

double Config::sim_horizon_factor() const { return get("simulation.horizon_factor"); }

Config parse_config(std::string_view text) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::ParserException& e) {
        throw ConfigError(ConfigError::Kind::Parse, "<document>", e.mark.line + 1, e.msg);
    }
    Config config;
    walk(root, "", config, config.lines_, config.entries_);
    config.validate();
    return config;
}

std::string serialize_config(const Config& config) {
    std::ostringstream out;
    std::vector<std::string> open;  // currently open path components
    for (const auto& e : config.entries()) {
        std::vector<std::string> parts;
        std::size_t start = 0;
        for (std::size_t dot; (dot = e.key.find('.', start)) != std::string::npos; start = dot + 1) {
            parts.push_back(e.key.substr(start, dot - start));
        }
        const std::string leaf = e.key.substr(start);
        std::size_t common = 0;
        while (common < open.size() && common < parts.size() && open[common] == parts[common]) ++common;
        for (std::size_t d = common; d < parts.size(); ++d) {
            out << std::string(2 * d, ' ') << parts[d] << ":\n";
        }
        open = parts;
        out << std::string(2 * parts.size(), ' ') << leaf << ": " << format_value(e.value) << "\n";
    }
    return out.str();
}

}  // namespace llmcost
