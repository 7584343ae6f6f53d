// Python bindings for the core operations: scenario simulation, source
// fitting, the streaming experiment, the control study, and the small
// numerical primitives the notebooks tend to poke at.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gotl/gotl.hpp"
#include "gotl/harness.hpp"
#include "gotl/io.hpp"
#include "gotl/mpc.hpp"
#include "gotl/regressors.hpp"
#include "gotl/simulator.hpp"
#include "gotl/tca.hpp"

namespace py = pybind11;
using namespace gotl;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Online transfer learning for multi-step thermal prediction";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  py::class_<HouseConfig>(m, "HouseConfig")
      .def(py::init<>())
      .def_readwrite("thermal_capacitance", &HouseConfig::thermal_capacitance)
      .def_readwrite("envelope_conductance", &HouseConfig::envelope_conductance)
      .def_readwrite("radiant_effectiveness", &HouseConfig::radiant_effectiveness)
      .def_readwrite("solar_aperture", &HouseConfig::solar_aperture)
      .def_readwrite("internal_gain_per_person",
                     &HouseConfig::internal_gain_per_person)
      .def_readwrite("size_factor", &HouseConfig::size_factor)
      .def("validate", &HouseConfig::validate);

  py::class_<SampleRecord>(m, "SampleRecord")
      .def(py::init<>())
      .def_readwrite("time_index", &SampleRecord::time_index)
      .def_readwrite("output", &SampleRecord::output)
      .def_readwrite("inputs", &SampleRecord::inputs);

  py::class_<Dataset>(m, "Dataset")
      .def(py::init<>())
      .def_readwrite("records", &Dataset::records)
      .def_readwrite("domain_id", &Dataset::domain_id)
      .def("input_dim", &Dataset::input_dim)
      .def("size", &Dataset::size)
      .def("__len__", &Dataset::size);

  py::class_<ScenarioSpec>(m, "ScenarioSpec")
      .def(py::init<>())
      .def_readwrite("house", &ScenarioSpec::house)
      .def_readwrite("weather", &ScenarioSpec::weather)
      .def_readwrite("occupancy", &ScenarioSpec::occupancy)
      .def_readwrite("flow_max", &ScenarioSpec::flow_max)
      .def_readwrite("noise_sd", &ScenarioSpec::noise_sd)
      .def_readwrite("weather_seed", &ScenarioSpec::weather_seed)
      .def_readwrite("occupancy_seed", &ScenarioSpec::occupancy_seed)
      .def_readwrite("noise_seed", &ScenarioSpec::noise_seed);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("experiment_id", &ExperimentConfig::experiment_id)
      .def_readwrite("sources", &ExperimentConfig::sources)
      .def_readwrite("target", &ExperimentConfig::target)
      .def_readwrite("source_days", &ExperimentConfig::source_days)
      .def_readwrite("target_days", &ExperimentConfig::target_days)
      .def_readwrite("ell", &ExperimentConfig::ell)
      .def_readwrite("rls_forgetting", &ExperimentConfig::rls_forgetting)
      .def_readwrite("rls_p0", &ExperimentConfig::rls_p0)
      .def_readwrite("source_ridge", &ExperimentConfig::source_ridge)
      .def_readwrite("gotl_delta", &ExperimentConfig::gotl_delta)
      .def_readwrite("gotl_discount", &ExperimentConfig::gotl_discount)
      .def_readwrite("gotl_retention", &ExperimentConfig::gotl_retention)
      .def_readwrite("initial_alpha", &ExperimentConfig::initial_alpha)
      .def_readwrite("interval_steps", &ExperimentConfig::interval_steps)
      .def_readwrite("ewma_smoothing", &ExperimentConfig::ewma_smoothing)
      .def_readwrite("tca_mu", &ExperimentConfig::tca_mu)
      .def_readwrite("tca_components", &ExperimentConfig::tca_components)
      .def_readwrite("tca_grid", &ExperimentConfig::tca_grid)
      .def_readwrite("tca_landmark_cap", &ExperimentConfig::tca_landmark_cap)
      .def_readwrite("kappa_list", &ExperimentConfig::kappa_list)
      .def_readwrite("mpc_days", &ExperimentConfig::mpc_days)
      .def_readwrite("mpc_horizon", &ExperimentConfig::mpc_horizon)
      .def_readwrite("mpc_reopt", &ExperimentConfig::mpc_reopt)
      .def_readwrite("mpc_interval_steps", &ExperimentConfig::mpc_interval_steps)
      .def_readwrite("mpc_retention", &ExperimentConfig::mpc_retention)
      .def_readwrite("mpc_warmup_steps", &ExperimentConfig::mpc_warmup_steps)
      .def_readwrite("mpc_noise_sd", &ExperimentConfig::mpc_noise_sd)
      .def_readwrite("mpc_noise_seed", &ExperimentConfig::mpc_noise_seed)
      .def("validate", &ExperimentConfig::validate);

  py::class_<LinearModel>(m, "LinearModel")
      .def(py::init<>())
      .def_readwrite("coefficients", &LinearModel::coefficients)
      .def("predict", &LinearModel::predict);

  py::class_<GotlState>(m, "GotlState")
      .def_property_readonly("alpha", &GotlState::alpha)
      .def_readonly("interval_index", &GotlState::interval_index)
      .def_readonly("discount", &GotlState::discount)
      .def_readonly("history_retention", &GotlState::history_retention)
      .def_readonly("stat_source_sq", &GotlState::stat_source_sq)
      .def_readonly("stat_target_sq", &GotlState::stat_target_sq)
      .def_readonly("stat_cross", &GotlState::stat_cross);

  py::class_<MetricsRow>(m, "MetricsRow")
      .def_readonly("k", &MetricsRow::k)
      .def_readonly("rmse_source", &MetricsRow::rmse_source)
      .def_readonly("rmse_target", &MetricsRow::rmse_target)
      .def_readonly("rmse_gotl", &MetricsRow::rmse_gotl)
      .def_readonly("rmse_ensemble", &MetricsRow::rmse_ensemble)
      .def_readonly("ewma_source", &MetricsRow::ewma_source)
      .def_readonly("ewma_target", &MetricsRow::ewma_target)
      .def_readonly("ewma_gotl", &MetricsRow::ewma_gotl)
      .def_readonly("ewma_ensemble", &MetricsRow::ewma_ensemble)
      .def_readonly("alpha", &MetricsRow::alpha)
      .def_readonly("rmse_singles", &MetricsRow::rmse_singles)
      .def_readonly("ewma_singles", &MetricsRow::ewma_singles);

  py::class_<IntervalLogRow>(m, "IntervalLogRow")
      .def_readonly("k", &IntervalLogRow::k)
      .def_readonly("alpha", &IntervalLogRow::alpha)
      .def_readonly("r_target", &IntervalLogRow::r_target)
      .def_readonly("r_source", &IntervalLogRow::r_source)
      .def_readonly("r_combined", &IntervalLogRow::r_combined)
      .def_readonly("rmse_interval", &IntervalLogRow::rmse_interval);

  py::class_<ExperimentResult>(m, "ExperimentResult")
      .def_readonly("metrics", &ExperimentResult::metrics)
      .def_readonly("weight_log", &ExperimentResult::weight_log)
      .def_readonly("source_model", &ExperimentResult::source_model)
      .def_readonly("single_source_models", &ExperimentResult::single_source_models)
      .def_readonly("target_data", &ExperimentResult::target_data)
      .def_readonly("final_state", &ExperimentResult::final_state);

  py::class_<CurvePoint>(m, "CurvePoint")
      .def_readonly("kappa", &CurvePoint::kappa)
      .def_readonly("comfort", &CurvePoint::comfort)
      .def_readonly("heating_kwh", &CurvePoint::heating_kwh)
      .def_readonly("pump_kwh", &CurvePoint::pump_kwh);

  py::class_<CurveStudyResult>(m, "CurveStudyResult")
      .def_readonly("gotl_curve", &CurveStudyResult::gotl_curve)
      .def_readonly("target_curve", &CurveStudyResult::target_curve);

  m.def("feature_dim", &feature_dim, py::arg("ell"), py::arg("input_channels"));
  m.def("closed_form_alpha", &closed_form_alpha, py::arg("stat_source_sq"),
        py::arg("stat_target_sq"), py::arg("stat_cross"), py::arg("fallback") = 0.5);
  m.def("neighbor_set", &neighbor_set, py::arg("alpha"), py::arg("delta"));
  m.def("interval_discount_weights", &interval_discount_weights, py::arg("steps"),
        py::arg("discount"));
  m.def("ewma", &ewma, py::arg("series"), py::arg("smoothing"));

  m.def("simulate_scenario", &simulate_scenario, py::arg("spec"), py::arg("days"));
  m.def(
      "fit_source_model",
      [](const ExperimentConfig& config) { return fit_source_model(config); },
      py::arg("config"));
  m.def("run_experiment", &run_experiment, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def("run_mpc_study", &run_mpc_study, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());

  m.def(
      "load_experiment_config",
      [](const std::string& path) {
        return parse_experiment_config(read_config_file(path));
      },
      py::arg("path"));
  m.def("read_dataset_csv", &read_dataset_csv, py::arg("path"),
        py::arg("domain_id") = "");
  m.def("write_dataset_csv", &write_dataset_csv, py::arg("path"), py::arg("data"));
}
