#include "gotl/mpc.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace gotl {

namespace {
constexpr int kInputChannels = 5;
}

void MpcParams::validate() const {
  if (kappa < 0.0) throw ConfigError("kappa must be >= 0");
  if (beta <= 0.0) throw ConfigError("beta must be > 0");
  if (gamma < 0.0) throw ConfigError("gamma must be >= 0");
  if (horizon_steps < 1 || horizon_steps > 20)
    throw ConfigError("horizon_steps must be in [1,20] for exhaustive search");
  if (reopt_steps < 1 || reopt_steps > horizon_steps)
    throw ConfigError("reopt_steps must be in [1, horizon_steps]");
  if (flow_max <= 0.0) throw ConfigError("flow_max must be > 0");
  if (outlet_effectiveness < 0.0 || outlet_effectiveness > 1.0)
    throw ConfigError("outlet_effectiveness must be in [0,1]");
  if (sampling_period_h <= 0.0) throw ConfigError("sampling_period_h must be > 0");
}

MpcParams make_mpc_params(const HouseConfig& house, double flow_max, double kappa) {
  house.validate();
  MpcParams p;
  p.kappa = kappa;
  p.flow_max = flow_max;
  p.beta = kWaterSpecificHeat * flow_max;
  // the plant's outlet is T_in - r*(T_in - T_room), i.e. a room/inlet mix with
  // weight 1-r on the inlet side
  p.outlet_effectiveness = 1.0 - house.radiant_effectiveness;
  p.sampling_period_h = kSamplingHours;
  return p;
}

CostBreakdown horizon_cost(const std::vector<double>& temps,
                           const std::vector<double>& flows,
                           const std::vector<double>& outlets,
                           const std::vector<int>& presence,
                           const MpcParams& params) {
  const int N = params.horizon_steps;
  if (static_cast<int>(temps.size()) != N + 1 ||
      static_cast<int>(flows.size()) != N ||
      static_cast<int>(outlets.size()) != N ||
      static_cast<int>(presence.size()) != N + 1)
    throw ConfigError("horizon cost inputs do not match the horizon length");

  CostBreakdown c;
  for (int i = 0; i <= N; ++i) {
    const double dev = temps[i] - params.setpoint;
    c.comfort += presence[i] * dev * dev;
  }
  c.comfort *= params.kappa / N;
  const double ts = params.sampling_period_h;
  for (int s = 0; s < N; ++s) {
    if (flows[s] > 0.0) {
      c.heating += params.beta * ts * (params.inlet_temp - outlets[s]);
      c.pump += params.gamma * ts * (flows[s] * 3.6) / 3600.0;
    }
  }
  c.total = c.comfort + c.heating + c.pump;
  return c;
}

namespace {

// Exhaustive enumeration shared by the generic and linear entry points.
// factory() hands out a fresh single-step predictor per candidate sequence;
// masks are visited in increasing order with bit N-1-s mapped to step s, so
// the first strict minimum is the lexicographically smallest flow sequence.
template <typename StepFactory>
HorizonPlan enumerate_masks(const StepFactory& factory,
                            const std::vector<double>& lag_y,
                            const std::vector<std::vector<double>>& past_u,
                            const std::vector<Disturbances>& forecast,
                            const MpcParams& params, int ell) {
  params.validate();
  const int N = params.horizon_steps;
  if (ell < 1) throw ConfigError("lag order must be >= 1");
  if (static_cast<int>(lag_y.size()) != ell)
    throw ConfigError("lag_y must hold exactly the lag order of outputs");
  if (static_cast<int>(past_u.size()) != ell - 1)
    throw ConfigError("past_u must hold lag order - 1 input rows");
  for (const auto& u : past_u)
    if (static_cast<int>(u.size()) != kInputChannels)
      throw ConfigError("past input rows must have 5 channels");
  if (static_cast<int>(forecast.size()) != N + 1)
    throw ConfigError("forecast must cover horizon_steps + 1 entries");

  std::vector<int> presence(N + 1);
  for (int i = 0; i <= N; ++i) presence[i] = forecast[i].presence_flag ? 1 : 0;

  std::vector<double> temps(N + 1), outlets(N), flows(N);
  std::vector<double> ly(ell);
  std::vector<std::vector<double>> lu(ell, std::vector<double>(kInputChannels));
  std::vector<int> flow_on(N);

  HorizonPlan best;
  bool have_best = false;
  const long long total = 1LL << N;
  for (long long mask = 0; mask < total; ++mask) {
    auto predict = factory();
    ly = lag_y;
    // lu[j] holds u_{t+s-j}; rows for j > s come from the logged past
    for (int j = 1; j < ell; ++j) lu[j] = past_u[j - 1];
    temps[0] = lag_y[0];
    for (int s = 0; s < N; ++s) {
      flow_on[s] = static_cast<int>((mask >> (N - 1 - s)) & 1);
      const double flow = flow_on[s] ? params.flow_max : 0.0;
      flows[s] = flow;
      lu[0][0] = flow;
      lu[0][1] = params.inlet_temp;
      lu[0][2] = forecast[s].outdoor_temp;
      lu[0][3] = forecast[s].solar_gain;
      lu[0][4] = static_cast<double>(forecast[s].occupancy);
      const double yhat = predict(assemble_feature(ly, lu, ell));
      const double room = temps[s];
      outlets[s] = room + params.outlet_effectiveness * (params.inlet_temp - room);
      temps[s + 1] = yhat;
      for (int j = ell - 1; j > 0; --j) {
        ly[j] = ly[j - 1];
        lu[j] = lu[j - 1];
      }
      ly[0] = yhat;
    }
    const CostBreakdown c = horizon_cost(temps, flows, outlets, presence, params);
    if (!have_best || c.total < best.cost.total) {
      best.flow_on = flow_on;
      best.predicted_temps.assign(temps.begin() + 1, temps.end());
      best.cost = c;
      have_best = true;
    }
  }
  return best;
}

}  // namespace

HorizonPlan optimize_horizon(const PredictorFactory& make_predictor,
                             const std::vector<double>& lag_y,
                             const std::vector<std::vector<double>>& past_u,
                             const std::vector<Disturbances>& forecast,
                             const MpcParams& params, int ell) {
  if (!make_predictor) throw ConfigError("predictor factory is empty");
  return enumerate_masks([&] { return make_predictor(); }, lag_y, past_u,
                         forecast, params, ell);
}

HorizonPlan optimize_horizon_linear(const Eigen::VectorXd& coefficients,
                                    const std::vector<double>& lag_y,
                                    const std::vector<std::vector<double>>& past_u,
                                    const std::vector<Disturbances>& forecast,
                                    const MpcParams& params, int ell) {
  if (coefficients.size() != feature_dim(ell, kInputChannels))
    throw ConfigError("coefficient vector does not match the feature layout");
  const Eigen::VectorXd* w = &coefficients;
  return enumerate_masks(
      [w] {
        return [w](const FeatureVector& x) { return w->dot(x); };
      },
      lag_y, past_u, forecast, params, ell);
}

namespace {

struct ActivePlan {
  HorizonPlan plan;
  long long start_t = 0;
  std::vector<double> comfort_terms;  // N+1 entries, kappa/N scaled
  std::vector<double> heat_terms;     // N entries
  std::vector<double> pump_terms;     // N entries
  CostBreakdown realized;
  int applied = 0;
};

SegmentCosts close_segment(const ActivePlan& ap) {
  SegmentCosts seg;
  seg.steps = ap.applied;
  for (int s = 0; s < ap.applied; ++s) {
    seg.planned.comfort += ap.comfort_terms[s];
    seg.planned.heating += ap.heat_terms[s];
    seg.planned.pump += ap.pump_terms[s];
  }
  seg.planned.total = seg.planned.comfort + seg.planned.heating + seg.planned.pump;
  seg.realized = ap.realized;
  seg.realized.total = seg.realized.comfort + seg.realized.heating + seg.realized.pump;
  return seg;
}

double mode_alpha(const MpcRunConfig& run, const GotlState& gotl) {
  switch (run.mode) {
    case MpcPredictorMode::Gotl: return gotl.alpha();
    case MpcPredictorMode::SourceOnly: return 1.0;
    case MpcPredictorMode::Ensemble: return 0.5;
    default: return 0.0;
  }
}

}  // namespace

MpcRunResult receding_horizon_run(const HouseConfig& house,
                                  const std::vector<Disturbances>& conditions,
                                  const MpcParams& params,
                                  const MpcRunConfig& run) {
  house.validate();
  params.validate();
  if (run.days < 1) throw ConfigError("days must be >= 1");
  const int steps_per_day = static_cast<int>(std::lround(24.0 / params.sampling_period_h));
  const long long n = static_cast<long long>(run.days) * steps_per_day;
  if (static_cast<long long>(conditions.size()) < n)
    throw ConfigError("conditions shorter than the requested run");
  const int ell = run.ell;
  if (ell < 1) throw ConfigError("lag order must be >= 1");
  if (run.warmup_steps < ell) throw ConfigError("warmup_steps must cover the lag order");
  if (run.warmup_steps >= n) throw ConfigError("warmup_steps must leave room for the controlled phase");
  const int M = run.gotl_interval_steps;
  const bool needs_source = run.mode == MpcPredictorMode::SourceOnly ||
                            run.mode == MpcPredictorMode::Gotl ||
                            run.mode == MpcPredictorMode::Ensemble;
  const int dim = feature_dim(ell, kInputChannels);
  if (needs_source && run.source_model.coefficients.size() != dim)
    throw ConfigError("source model does not match the feature layout");
  if (run.mode == MpcPredictorMode::Gotl && M < ell)
    throw ConfigError("gotl_interval_steps must be >= the lag order");

  const int N = params.horizon_steps;
  const double ts = params.sampling_period_h;

  RlsState rls = rls_init(dim, run.rls_forgetting, run.rls_p0);
  GotlState gotl = gotl_init(run.gotl_delta, run.gotl_discount, run.initial_alpha,
                             run.gotl_retention);
  HysteresisController hc(params.setpoint, run.hysteresis_band, params.flow_max,
                          params.inlet_temp);
  Rng noise_rng(run.noise_seed);

  MpcRunResult res;
  res.data.domain_id = "mpc-run";
  res.data.records.reserve(n);
  res.ledger.reserve(n);

  ZoneState state;
  bool have_plan = false;
  ActivePlan ap;

  double comfort_cum = 0.0, heating_cum = 0.0, pump_cum = 0.0;

  for (long long t = 0; t < n; ++t) {
    const double true_temp = state.zone_temp;
    const double measured = true_temp + run.sensor_noise_sd * noise_rng.gauss();

    if (t >= ell) {
      const FeatureVector x = build_feature_vector(res.data, static_cast<int>(t), ell);
      rls = rls_update(rls, x, measured);
    }

    if (run.mode == MpcPredictorMode::Gotl && t >= 2 * M && t % M == 0) {
      const Eigen::VectorXd wt = rls.coefficients;
      const IntervalErrors errs = interval_rollout_errors(
          [&wt](const FeatureVector& x) { return wt.dot(x); },
          run.source_model.as_fn(), gotl.alpha(), res.data,
          static_cast<int>(t) - M, M, ell, run.gotl_discount);
      gotl = gotl_step(gotl, errs);
    }

    ControlAction action;
    if (t < run.warmup_steps) {
      action = hc.act(measured);
    } else {
      if ((t - run.warmup_steps) % params.reopt_steps == 0) {
        if (have_plan) res.segments.push_back(close_segment(ap));

        std::vector<double> lag_y(ell);
        lag_y[0] = measured;
        for (int j = 1; j < ell; ++j)
          lag_y[j] = res.data.records[t - j].output;
        std::vector<std::vector<double>> past_u(ell - 1);
        for (int j = 1; j < ell; ++j)
          past_u[j - 1] = res.data.records[t - j].inputs;
        std::vector<Disturbances> forecast(N + 1);
        for (int i = 0; i <= N; ++i) {
          const long long idx = std::min<long long>(t + i, conditions.size() - 1);
          forecast[i] = conditions[idx];
        }

        HorizonPlan plan;
        if (run.mode == MpcPredictorMode::ExactSim) {
          const ZoneState plan_state = state;
          PredictorFactory factory = [&house, plan_state, ell, ts]() -> PredictFn {
            auto st = std::make_shared<ZoneState>(plan_state);
            return [&house, st, ell, ts](const FeatureVector& x) {
              ControlAction a;
              a.water_flow = x[ell + 0];
              a.inlet_temp = x[ell + 1];
              Disturbances d;
              d.outdoor_temp = x[ell + 2];
              d.solar_gain = x[ell + 3];
              d.occupancy = static_cast<int>(std::lround(x[ell + 4]));
              *st = step_zone(house, *st, a, d, ts).state;
              return st->zone_temp;
            };
          };
          plan = optimize_horizon(factory, lag_y, past_u, forecast, params, ell);
        } else {
          Eigen::VectorXd w;
          switch (run.mode) {
            case MpcPredictorMode::TargetOnly:
              w = rls.coefficients;
              break;
            case MpcPredictorMode::SourceOnly:
              w = run.source_model.coefficients;
              break;
            case MpcPredictorMode::Ensemble:
              w = 0.5 * (rls.coefficients + run.source_model.coefficients);
              break;
            default: {
              const double a = gotl.alpha();
              w = (1.0 - a) * rls.coefficients + a * run.source_model.coefficients;
              break;
            }
          }
          plan = optimize_horizon_linear(w, lag_y, past_u, forecast, params, ell);
        }

        ap = ActivePlan{};
        ap.plan = plan;
        ap.start_t = t;
        ap.comfort_terms.resize(N + 1);
        ap.heat_terms.assign(N, 0.0);
        ap.pump_terms.assign(N, 0.0);
        const double scale = params.kappa / N;
        for (int i = 0; i <= N; ++i) {
          const double temp = (i == 0) ? measured : plan.predicted_temps[i - 1];
          const double dev = temp - params.setpoint;
          ap.comfort_terms[i] = scale * (forecast[i].presence_flag ? 1 : 0) * dev * dev;
        }
        for (int s = 0; s < N; ++s) {
          if (!plan.flow_on[s]) continue;
          const double room = (s == 0) ? measured : plan.predicted_temps[s - 1];
          const double outlet =
              room + params.outlet_effectiveness * (params.inlet_temp - room);
          ap.heat_terms[s] = params.beta * ts * (params.inlet_temp - outlet);
          ap.pump_terms[s] = params.gamma * ts * (params.flow_max * 3.6) / 3600.0;
        }
        have_plan = true;
      }
      const int offset = static_cast<int>(t - ap.start_t);
      action.water_flow = ap.plan.flow_on[offset] ? params.flow_max : 0.0;
      action.inlet_temp = params.inlet_temp;
    }

    const StepResult sr = step_zone(house, state, action, conditions[t], ts);

    const int pres = conditions[t].presence_flag ? 1 : 0;
    const double dev = true_temp - params.setpoint;
    comfort_cum += pres * dev * dev / N;
    double heat_step = 0.0, pump_step = 0.0;
    if (action.water_flow > 0.0) {
      heat_step = params.beta * ts * (params.inlet_temp - sr.outlet_temp);
      pump_step = params.gamma * ts * (action.water_flow * 3.6) / 3600.0;
    }
    heating_cum += heat_step;
    pump_cum += pump_step;

    if (have_plan && t >= ap.start_t) {
      ap.realized.comfort += params.kappa / N * pres * dev * dev;
      ap.realized.heating += heat_step;
      ap.realized.pump += pump_step;
      ap.applied += 1;
    }

    SampleRecord rec;
    rec.time_index = t;
    rec.output = measured;
    rec.inputs = {action.water_flow, action.inlet_temp, conditions[t].outdoor_temp,
                  conditions[t].solar_gain, static_cast<double>(conditions[t].occupancy)};
    res.data.records.push_back(std::move(rec));

    LedgerRow row;
    row.t = t;
    row.flow = action.water_flow;
    row.zone_temp = true_temp;
    row.comfort_cum = comfort_cum;
    row.heating_cum_kwh = heating_cum;
    row.pump_cum_kwh = pump_cum;
    row.alpha = mode_alpha(run, gotl);
    res.ledger.push_back(row);

    state = sr.state;
  }

  if (have_plan) res.segments.push_back(close_segment(ap));

  res.comfort_total = comfort_cum;
  res.heating_total_kwh = heating_cum;
  res.pump_total_kwh = pump_cum;
  res.final_alpha = mode_alpha(run, gotl);
  return res;
}

std::vector<CurvePoint> comfort_heating_curve(const HouseConfig& house,
                                              const std::vector<Disturbances>& conditions,
                                              const MpcParams& base_params,
                                              const MpcRunConfig& run,
                                              const std::vector<double>& kappa_list) {
  if (kappa_list.size() < 2) throw ConfigError("kappa_list needs at least 2 values");
  std::vector<CurvePoint> out;
  out.reserve(kappa_list.size());
  for (double kappa : kappa_list) {
    MpcParams p = base_params;
    p.kappa = kappa;
    const MpcRunResult r = receding_horizon_run(house, conditions, p, run);
    CurvePoint pt;
    pt.kappa = kappa;
    pt.comfort = r.comfort_total;
    pt.heating_kwh = r.heating_total_kwh;
    pt.pump_kwh = r.pump_total_kwh;
    out.push_back(pt);
  }
  std::sort(out.begin(), out.end(),
            [](const CurvePoint& a, const CurvePoint& b) { return a.comfort < b.comfort; });
  return out;
}

}  // namespace gotl
