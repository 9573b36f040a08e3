#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "llmcost/cluster_model.hpp"
#include "llmcost/commands.hpp"
#include "llmcost/config.hpp"
#include "llmcost/failure_sim.hpp"
#include "llmcost/projection.hpp"
#include "llmcost/scaling_laws.hpp"

namespace py = pybind11;
using namespace llmcost;

namespace {

Config config_from(const std::optional<std::string>& text) { return text ? parse_config(*text) : Config{}; }

py::dict output_dict(const CommandOutput& out) {
    py::dict d;
    d["csv"] = out.table.str();
    d["summary"] = out.summary;
    d["svg"] = out.svg;
    d["exit_code"] = out.exit_code;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Training compute, time and cost estimates for large models";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<ScalingConstants>(m, "ScalingConstants")
        .def(py::init<>())
        .def(py::init([](double fpt, double tpp, double exponent) { return ScalingConstants{fpt, tpp, exponent}; }),
             py::arg("flop_per_token") = 6.0, py::arg("tokens_per_param") = 20.0, py::arg("token_scaling") = 2.0)
        .def_readwrite("flop_per_token", &ScalingConstants::flop_per_token)
        .def_readwrite("tokens_per_param", &ScalingConstants::tokens_per_param)
        .def_readwrite("token_scaling", &ScalingConstants::token_scaling)
        .def("validate", &ScalingConstants::validate);

    py::class_<ModelSpec>(m, "ModelSpec")
        .def(py::init([](double params, std::int64_t experts) { return ModelSpec{params, experts}; }),
             py::arg("params") = 1.8e12, py::arg("experts") = 1)
        .def_readwrite("params", &ModelSpec::params)
        .def_readwrite("experts", &ModelSpec::experts)
        .def("validate", &ModelSpec::validate);

    py::class_<CostRates>(m, "CostRates")
        .def(py::init([](double flops, double dollars, double cloud) { return CostRates{flops, dollars, cloud}; }),
             py::arg("sustained_flops_per_gpu") = 150e12, py::arg("dollars_per_gpu_hour") = 2.5,
             py::arg("cloud_multiplier") = 4.8)
        .def_readwrite("sustained_flops_per_gpu", &CostRates::sustained_flops_per_gpu)
        .def_readwrite("dollars_per_gpu_hour", &CostRates::dollars_per_gpu_hour)
        .def_readwrite("cloud_multiplier", &CostRates::cloud_multiplier);

    py::class_<DollarCost>(m, "DollarCost")
        .def_readonly("gpu_dollars", &DollarCost::gpu_dollars)
        .def_readonly("cloud_dollars", &DollarCost::cloud_dollars);

    m.def("required_tokens", &required_tokens, py::arg("model"), py::arg("constants") = ScalingConstants{});
    m.def("dense_training_flops", &dense_training_flops, py::arg("model"), py::arg("constants") = ScalingConstants{});
    m.def("moe_training_flops", &moe_training_flops, py::arg("model"), py::arg("constants") = ScalingConstants{});
    m.def("ideal_gpu_hours", &ideal_gpu_hours, py::arg("flops"), py::arg("rates") = CostRates{});
    m.def("dollar_cost", &dollar_cost, py::arg("gpu_hours"), py::arg("rates") = CostRates{});

    py::class_<ClusterSpec>(m, "ClusterSpec")
        .def(py::init<>())
        .def_readwrite("n_gpus", &ClusterSpec::n_gpus)
        .def_readwrite("gpus_per_cpu", &ClusterSpec::gpus_per_cpu)
        .def_readwrite("gpu_mtbf_h", &ClusterSpec::gpu_mtbf_h)
        .def_readwrite("cpu_mtbf_h", &ClusterSpec::cpu_mtbf_h)
        .def_readwrite("gpu_mem_gb", &ClusterSpec::gpu_mem_gb)
        .def_readwrite("fs_bw_gbs", &ClusterSpec::fs_bw_gbs)
        .def_readwrite("gpus_per_group", &ClusterSpec::gpus_per_group)
        .def_readwrite("rates", &ClusterSpec::rates);

    py::class_<ResilienceConfig>(m, "ResilienceConfig")
        .def(py::init<>())
        .def_readwrite("ckpt_mem_fraction", &ResilienceConfig::ckpt_mem_fraction)
        .def_readwrite("tolerated_group_failures", &ResilienceConfig::tolerated_group_failures)
        .def_readwrite("group_count_cap", &ResilienceConfig::group_count_cap)
        .def_readwrite("ttr_h", &ResilienceConfig::ttr_h)
        .def_readwrite("seq_fraction", &ResilienceConfig::seq_fraction);

    py::class_<RunConfig>(m, "RunConfig")
        .def(py::init<>())
        .def_readwrite("name", &RunConfig::name)
        .def_readwrite("cluster", &RunConfig::cluster)
        .def_readwrite("resilience", &RunConfig::resilience)
        .def_static("baseline", &RunConfig::baseline)
        .def_static("optimized", &RunConfig::optimized);

    py::enum_<RunStatus>(m, "RunStatus").value("Ok", RunStatus::Ok).value("NoProgress", RunStatus::NoProgress);

    py::class_<RunBreakdown>(m, "RunBreakdown")
        .def_readonly("flops", &RunBreakdown::flops)
        .def_readonly("groups", &RunBreakdown::groups)
        .def_readonly("efficiency", &RunBreakdown::efficiency)
        .def_readonly("mtti_h", &RunBreakdown::mtti_h)
        .def_readonly("mtti_eff_h", &RunBreakdown::mtti_eff_h)
        .def_readonly("ckpt_h", &RunBreakdown::ckpt_h)
        .def_readonly("tau_h", &RunBreakdown::tau_h)
        .def_readonly("n_ckpt", &RunBreakdown::n_ckpt)
        .def_readonly("solve_h", &RunBreakdown::solve_h)
        .def_readonly("ckpt_overhead_h", &RunBreakdown::ckpt_overhead_h)
        .def_readonly("expected_rework_h", &RunBreakdown::expected_rework_h)
        .def_readonly("expected_restart_h", &RunBreakdown::expected_restart_h)
        .def_readonly("wall_h", &RunBreakdown::wall_h)
        .def_readonly("gpu_hours", &RunBreakdown::gpu_hours)
        .def_readonly("gpu_dollars", &RunBreakdown::gpu_dollars)
        .def_readonly("cloud_dollars", &RunBreakdown::cloud_dollars)
        .def_readonly("status", &RunBreakdown::status);

    py::class_<SweepRow>(m, "SweepRow")
        .def_readonly("n_gpus", &SweepRow::n_gpus)
        .def_readonly("config_name", &SweepRow::config_name)
        .def_readonly("run", &SweepRow::run);

    m.def("system_mtti", &system_mtti, py::arg("cluster"));
    m.def("expected_runtime", &expected_runtime, py::arg("model"), py::arg("constants"), py::arg("cluster"),
          py::arg("resilience"));
    m.def("expected_runtime_for_work", &expected_runtime_for_work, py::arg("solve_h"), py::arg("cluster"),
          py::arg("resilience"));
    m.def(
        "sweep_system_size",
        [](const ModelSpec& model, const ScalingConstants& k, const std::vector<RunConfig>& configs,
           const std::vector<std::int64_t>& n_gpus, unsigned threads) {
            py::gil_scoped_release release;
            return sweep_system_size(model, k, configs, n_gpus, threads);
        },
        py::arg("model"), py::arg("constants"), py::arg("configs"), py::arg("n_gpus"), py::arg("threads") = 1);

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("model", &SimConfig::model)
        .def_readwrite("constants", &SimConfig::constants)
        .def_readwrite("cluster", &SimConfig::cluster)
        .def_readwrite("resilience", &SimConfig::resilience)
        .def_readwrite("seed", &SimConfig::seed)
        .def_readwrite("replications", &SimConfig::replications)
        .def_readwrite("work_h", &SimConfig::work_h)
        .def_readwrite("horizon_factor", &SimConfig::horizon_factor);

    py::class_<SimResult>(m, "SimResult")
        .def_property_readonly("wall_h",
                               [](const SimResult& r) {
                                   std::vector<double> out;
                                   out.reserve(r.replications.size());
                                   for (const auto& rep : r.replications) out.push_back(rep.wall_h);
                                   return out;
                               })
        .def_readonly("mean_wall_h", &SimResult::mean_wall_h)
        .def_readonly("stddev_wall_h", &SimResult::stddev_wall_h)
        .def_readonly("ci95_half_width", &SimResult::ci95_half_width)
        .def_readonly("mean_interrupts", &SimResult::mean_interrupts)
        .def_readonly("mean_checkpoints", &SimResult::mean_checkpoints)
        .def_readonly("truncated", &SimResult::truncated)
        .def_readonly("generator", &SimResult::generator);

    py::class_<ValidationReport>(m, "ValidationReport")
        .def_readonly("analytic_status", &ValidationReport::analytic_status)
        .def_readonly("analytic_h", &ValidationReport::analytic_h)
        .def_readonly("simulated_mean_h", &ValidationReport::simulated_mean_h)
        .def_readonly("relative_error", &ValidationReport::relative_error)
        .def_readonly("horizon_h", &ValidationReport::horizon_h)
        .def_readonly("passed", &ValidationReport::pass);

    m.def(
        "run_ensemble",
        [](const SimConfig& c, unsigned threads) {
            py::gil_scoped_release release;
            return run_ensemble(c, threads);
        },
        py::arg("config"), py::arg("threads") = 1);
    m.def(
        "validate_analytic",
        [](const SimConfig& c, double tolerance, unsigned threads) {
            py::gil_scoped_release release;
            return validate_analytic(c, tolerance, threads);
        },
        py::arg("config"), py::arg("tolerance") = 0.2, py::arg("threads") = 1);

    py::enum_<ScenarioKind>(m, "ScenarioKind")
        .value("BestCase", ScenarioKind::BestCase)
        .value("BestGuess", ScenarioKind::BestGuess)
        .value("WorstCase", ScenarioKind::WorstCase)
        .value("Custom", ScenarioKind::Custom);

    py::class_<Scenario>(m, "Scenario")
        .def_static("preset", &Scenario::preset)
        .def_readwrite("experts_per_year", &Scenario::experts_per_year)
        .def_readwrite("flop_per_param", &Scenario::flop_per_param)
        .def_readwrite("base_experts", &Scenario::base_experts)
        .def_readwrite("token_scaling", &Scenario::token_scaling)
        .def_property_readonly("name", &Scenario::name);

    py::class_<ProjectionInputs>(m, "ProjectionInputs")
        .def(py::init<>())
        .def_readwrite("cost_scale", &ProjectionInputs::cost_scale);

    py::class_<YearRow>(m, "YearRow")
        .def_readonly("year", &YearRow::year)
        .def_readonly("scenario", &YearRow::scenario)
        .def_readonly("params", &YearRow::params)
        .def_readonly("experts", &YearRow::experts)
        .def_readonly("flops", &YearRow::flops)
        .def_readonly("gpu_hours", &YearRow::gpu_hours)
        .def_readonly("gpu_cost_usd", &YearRow::gpu_cost_usd)
        .def_readonly("cloud_cost_usd", &YearRow::cloud_cost_usd)
        .def_readonly("gpu_base_usd", &YearRow::gpu_base_usd)
        .def_readonly("it_spend_usd", &YearRow::it_spend_usd);

    py::class_<Crossings>(m, "Crossings")
        .def_readonly("gpu_base", &Crossings::gpu_base)
        .def_readonly("it_spend", &Crossings::it_spend);

    m.def("training_cost_at", &training_cost_at, py::arg("year"), py::arg("scenario"),
          py::arg("inputs") = ProjectionInputs{});
    m.def("intersection_year", &intersection_year, py::arg("scenario"), py::arg("inputs") = ProjectionInputs{});
    m.def(
        "scenario_spread", [](const ProjectionInputs& in) { return scenario_spread(in); },
        py::arg("inputs") = ProjectionInputs{});
    m.def("compute_growth_rate", [](const Scenario& s) { return compute_growth_rate(GrowthModel{}, s); },
          py::arg("scenario"));

    py::class_<Config>(m, "Config")
        .def(py::init<>())
        .def_static("parse", &parse_config, py::arg("text"))
        .def("get", &Config::get)
        .def("set", &Config::set)
        .def("defaulted_keys", &Config::defaulted_keys)
        .def("serialize", &serialize_config)
        .def("__eq__", &Config::operator==)
        .def("keys", [](const Config& c) {
            std::vector<std::string> keys;
            for (const auto& e : c.entries()) keys.push_back(e.key);
            return keys;
        });

    m.def(
        "cost",
        [](const std::optional<std::string>& config, std::optional<double> params,
           std::optional<std::int64_t> experts) { return output_dict(cmd_cost(config_from(config), params, experts)); },
        py::arg("config") = py::none(), py::arg("params") = py::none(), py::arg("experts") = py::none());
    m.def(
        "sweep",
        [](const std::optional<std::string>& config, const std::string& gpus, const std::vector<std::string>& variants,
           unsigned threads) {
            const Config c = config_from(config);
            const GpuRange range = GpuRange::parse(gpus);
            CommandOutput out;
            {
                py::gil_scoped_release release;
                out = cmd_sweep(c, range, variants, threads);
            }
            return output_dict(out);
        },
        py::arg("config") = py::none(), py::arg("gpus") = "1024:262144:9:geometric",
        py::arg("variants") = std::vector<std::string>{}, py::arg("threads") = 1);
    m.def(
        "simulate",
        [](const std::optional<std::string>& config, std::uint64_t seed, std::uint64_t reps,
           const std::string& variant, unsigned threads, double tolerance) {
            const Config c = config_from(config);
            SimulateOptions o{seed, reps, variant, threads, tolerance};
            CommandOutput out;
            {
                py::gil_scoped_release release;
                out = cmd_simulate(c, o);
            }
            return output_dict(out);
        },
        py::arg("config") = py::none(), py::arg("seed") = 42, py::arg("reps") = 1000,
        py::arg("variant") = "baseline", py::arg("threads") = 1, py::arg("tolerance") = 0.2);
}
