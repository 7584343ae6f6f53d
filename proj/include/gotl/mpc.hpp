#pragma once

#include <cstdint>
#include <vector>

#include "gotl/core.hpp"
#include "gotl/gotl.hpp"
#include "gotl/regressors.hpp"
#include "gotl/simulator.hpp"

namespace gotl {

struct MpcParams {
  double kappa = 50.0;               // comfort weight
  double beta = 0.3333;              // heating cost weight, kW/degC h
  double gamma = 527.8;              // pump cost weight, kW s/(h m^3)
  double setpoint = 21.0;            // degC
  int horizon_steps = 12;            // N_hor
  int reopt_steps = 2;               // steps between re-optimizations
  double flow_max = 0.0787;          // kg/s
  double inlet_temp = 45.0;          // degC
  double outlet_effectiveness = 0.4; // w in outlet = T_room + w (T_in - T_room)
  double sampling_period_h = 0.5;

  void validate() const;
};

// beta = c_w * flow_max plus the sim-consistent outlet mix produce a heating
// term identical to the plant's delivered energy, which closed-loop
// consistency checks rely on.
MpcParams make_mpc_params(const HouseConfig& house, double flow_max, double kappa);

struct CostBreakdown {
  double total = 0.0, comfort = 0.0, heating = 0.0, pump = 0.0;
};

struct HorizonPlan {
  std::vector<int> flow_on;              // length N_hor, 0/1
  std::vector<double> predicted_temps;   // length N_hor, steps t+1..t+N
  CostBreakdown cost;
};

// temps has N_hor+1 entries (measured current temperature first, then the
// plan's predicted trajectory); flows and outlets have N_hor entries;
// presence has N_hor+1 entries. Heating counts only steps with flow on;
// heating and pump are in kWh.
CostBreakdown horizon_cost(const std::vector<double>& temps,
                           const std::vector<double>& flows,
                           const std::vector<double>& outlets,
                           const std::vector<int>& presence,
                           const MpcParams& params);

// Factory handing out a fresh single-step predictor for one candidate
// rollout; stateful predictors (e.g. a simulator copy) start from the same
// captured state for every candidate.
using PredictorFactory = std::function<PredictFn()>;

// Exhaustive search over all 2^N_hor on/off sequences. lag_y holds the
// measured outputs y_t, y_{t-1}, ... (most recent first, ell entries); past_u
// holds the applied inputs u_{t-1}, u_{t-2}, ... (ell-1 entries); forecast
// covers steps t..t+N_hor (the last entry only contributes presence).
// Cost ties resolve to the lexicographically smaller flow sequence.
HorizonPlan optimize_horizon(const PredictorFactory& make_predictor,
                             const std::vector<double>& lag_y,
                             const std::vector<std::vector<double>>& past_u,
                             const std::vector<Disturbances>& forecast,
                             const MpcParams& params, int ell);

// Fast path for linear predictors; same contract and tie-breaking.
HorizonPlan optimize_horizon_linear(const Eigen::VectorXd& coefficients,
                                    const std::vector<double>& lag_y,
                                    const std::vector<std::vector<double>>& past_u,
                                    const std::vector<Disturbances>& forecast,
                                    const MpcParams& params, int ell);

enum class MpcPredictorMode { TargetOnly, SourceOnly, Gotl, Ensemble, ExactSim };

struct MpcRunConfig {
  MpcPredictorMode mode = MpcPredictorMode::TargetOnly;
  LinearModel source_model;       // used by SourceOnly/Gotl/Ensemble
  int ell = 3;
  int days = 60;
  double rls_forgetting = 0.999;
  double rls_p0 = 1e4;
  double gotl_delta = 0.025;
  double gotl_discount = 0.995;
  double gotl_retention = 1.0;    // across-interval account decay
  int gotl_interval_steps = 12;   // M, steps per weight-evaluation interval
  double initial_alpha = 1.0;
  int warmup_steps = 13;          // hysteresis bootstrap before MPC takes over
  double hysteresis_band = 0.5;
  double sensor_noise_sd = 0.0;
  std::uint64_t noise_seed = 0;
};

struct LedgerRow {
  long long t = 0;
  double flow = 0.0;
  double zone_temp = 0.0;     // true plant temperature
  double comfort_cum = 0.0;   // presence-weighted squared deviation / N_hor (kappa-free)
  double heating_cum_kwh = 0.0;
  double pump_cum_kwh = 0.0;
  double alpha = 0.0;
};

// Planned-vs-realized cost pair for the steps a plan was actually applied.
struct SegmentCosts {
  CostBreakdown planned;
  CostBreakdown realized;
  int steps = 0;
};

struct MpcRunResult {
  Dataset data;
  std::vector<LedgerRow> ledger;
  double comfort_total = 0.0;  // kappa-free
  double heating_total_kwh = 0.0;
  double pump_total_kwh = 0.0;
  double final_alpha = 0.0;
  std::vector<SegmentCosts> segments;
};

// Closed loop: hysteresis warm-up, then re-optimization every reopt_steps
// with the selected predictor; RLS updates every step from logged data, the
// source/target weight updates every gotl_interval_steps.
MpcRunResult receding_horizon_run(const HouseConfig& house,
                                  const std::vector<Disturbances>& conditions,
                                  const MpcParams& params,
                                  const MpcRunConfig& run);

struct CurvePoint {
  double kappa = 0.0;
  double comfort = 0.0;       // kappa-free realized comfort
  double heating_kwh = 0.0;
  double pump_kwh = 0.0;
};

// One receding_horizon_run per kappa (fresh predictor state each), sorted by
// realized comfort.
std::vector<CurvePoint> comfort_heating_curve(const HouseConfig& house,
                                              const std::vector<Disturbances>& conditions,
                                              const MpcParams& base_params,
                                              const MpcRunConfig& run,
                                              const std::vector<double>& kappa_list);

}  // namespace gotl
