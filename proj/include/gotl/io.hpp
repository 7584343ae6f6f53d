#pragma once

#include <map>
#include <string>
#include <vector>

#include "gotl/core.hpp"
#include "gotl/harness.hpp"
#include "gotl/mpc.hpp"
#include "gotl/regressors.hpp"
#include "gotl/tca.hpp"

namespace gotl {

// Shortest round-trip decimal rendering; locale independent, so identical
// inputs always serialize to identical bytes.
std::string format_number(double value);

// Interchange format: header `t,y,u1..u5`, one row per sampling period.
void write_dataset_csv(const std::string& path, const Dataset& data);
Dataset read_dataset_csv(const std::string& path, const std::string& domain_id = "");

// Coefficient table preceded by the feature layout it was fitted for.
void save_linear_model(const std::string& path, const LinearModel& model, int ell,
                       int input_channels);
LinearModel load_linear_model(const std::string& path, int* ell = nullptr,
                              int* input_channels = nullptr);

// Single-file bundle: meta line, standardization statistics, training points,
// projection columns.
void save_tca_model(const std::string& path, const TcaModel& model);
TcaModel load_tca_model(const std::string& path);

void write_metrics_csv(const std::string& path, const std::vector<MetricsRow>& rows);
void write_weight_log_csv(const std::string& path,
                          const std::vector<IntervalLogRow>& rows);
void write_ledger_csv(const std::string& path, const std::vector<LedgerRow>& rows);
void write_curve_csv(const std::string& path, const std::vector<CurvePoint>& points);

// Flat key=value text; '#' starts a comment, blank lines are skipped,
// whitespace around keys and values is trimmed. Duplicate keys are an error.
std::map<std::string, std::string> read_config_file(const std::string& path);

// Typed views over the flat map. Unknown keys are rejected so typos fail
// loudly instead of silently running defaults.
ExperimentConfig parse_experiment_config(const std::map<std::string, std::string>& kv);
struct ScenarioFileConfig {
  ScenarioSpec scenario;
  int days = 150;
  std::string scenario_id = "scenario";
};
ScenarioFileConfig parse_scenario_config(const std::map<std::string, std::string>& kv);

}  // namespace gotl
