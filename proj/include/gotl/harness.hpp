#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gotl/core.hpp"
#include "gotl/gotl.hpp"
#include "gotl/mpc.hpp"
#include "gotl/regressors.hpp"
#include "gotl/simulator.hpp"
#include "gotl/tca.hpp"

namespace gotl {

// One simulated building scenario: the house, its weather/occupancy presets
// and seeds, the thermostat flow level, and the sensor noise of the logger.
struct ScenarioSpec {
  HouseConfig house;
  std::string weather = "mild-site";
  std::string occupancy = "workweek";
  double flow_max = 0.10;  // kg/s while the thermostat is on
  double noise_sd = 0.025;
  std::uint64_t weather_seed = 1;
  std::uint64_t occupancy_seed = 2;
  std::uint64_t noise_seed = 3;
};

struct ExperimentConfig {
  std::string experiment_id = "exp1";  // exp1..exp4 | mpc
  std::vector<ScenarioSpec> sources;   // exactly 2 for exp4, exactly 1 otherwise
  ScenarioSpec target;
  int source_days = 150;
  int target_days = 150;

  int ell = 3;
  double rls_forgetting = 0.999;
  double rls_p0 = 1e4;
  double source_ridge = 1e-4;

  double gotl_delta = 0.025;
  double gotl_discount = 0.995;
  double gotl_retention = 0.97;
  double initial_alpha = 1.0;
  int interval_steps = 12;
  double ewma_smoothing = 0.9;

  // multi-source settings (exp4)
  double tca_mu = 1.0;
  int tca_components = 20;  // 0 = cross-validate over tca_grid
  std::vector<int> tca_grid = {5, 10, 15, 20, 25, 30};
  int tca_landmark_cap = 400;

  // control study settings (experiment_id == "mpc")
  std::vector<double> kappa_list = {5, 15, 50, 150, 500};
  int mpc_days = 60;
  int mpc_horizon = 12;
  int mpc_reopt = 2;
  int mpc_interval_steps = 12;
  double mpc_retention = 0.95;
  int mpc_warmup_steps = 480;
  double mpc_noise_sd = 0.10;
  std::uint64_t mpc_noise_seed = 91;

  void validate() const;
};

// Per-interval paired evaluation of the four predictors. The alpha column is
// the weight that was active during interval k (i.e. before the update).
struct MetricsRow {
  long long k = 0;
  double rmse_source = 0, rmse_target = 0, rmse_gotl = 0, rmse_ensemble = 0;
  double ewma_source = 0, ewma_target = 0, ewma_gotl = 0, ewma_ensemble = 0;
  double alpha = 0;
  // per-single-source rollout RMSE and its EWMA (multi-source runs only)
  std::vector<double> rmse_singles;
  std::vector<double> ewma_singles;
};

// Weight-adaptation log: accounts after folding interval k, evaluated at the
// boundary weights and at the alpha active during the interval;
// rmse_interval is the deployed combined predictor's rollout RMSE.
struct IntervalLogRow {
  long long k = 0;
  double alpha = 0;
  double r_target = 0;    // account at weight 0
  double r_source = 0;    // account at weight 1
  double r_combined = 0;  // account at the active weight
  double rmse_interval = 0;
};

struct ExperimentResult {
  std::vector<MetricsRow> metrics;
  std::vector<IntervalLogRow> weight_log;
  LinearModel source_model;
  std::vector<LinearModel> single_source_models;
  Dataset target_data;
  GotlState final_state;
};

// s_0 = x_0; s_k = smoothing*s_{k-1} + (1-smoothing)*x_k.
std::vector<double> ewma(const std::vector<double>& series, double smoothing);

// Closed-loop hysteresis run of one scenario (days at 48 steps/day).
Dataset simulate_scenario(const ScenarioSpec& spec, int days);

// Offline source predictor: single-source ridge fit, or the latent-subspace
// fusion of two sources. Per-source individual fits are returned through
// `singles` when non-null; the fitted latent map (multi-source runs only)
// through `tca`.
LinearModel fit_source_model(const ExperimentConfig& config,
                             std::vector<LinearModel>* singles = nullptr,
                             TcaModel* tca = nullptr);

// Streams the target scenario interval by interval: paired rollout
// evaluation of source/target/combined/ensemble predictors, weight
// adaptation, then RLS updates on the interval's samples.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Comfort-heating trade-off curves of the receding-horizon controller under
// the adaptive combined predictor and under the online-only predictor.
struct CurveStudyResult {
  std::vector<CurvePoint> gotl_curve;
  std::vector<CurvePoint> target_curve;
};
CurveStudyResult run_mpc_study(const ExperimentConfig& config);

int cli_main(int argc, char** argv);

}  // namespace gotl
