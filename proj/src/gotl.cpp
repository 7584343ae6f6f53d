#include "gotl/gotl.hpp"

#include <cmath>

namespace gotl {

WeightGrid WeightGrid::make(double delta) {
  if (delta <= 0.0 || delta >= 1.0) throw ConfigError("delta must be in (0,1)");
  double inv = 1.0 / delta;
  int steps = static_cast<int>(std::lround(inv));
  if (std::abs(inv - steps) > 1e-9) throw ConfigError("1/delta must be an integer");
  WeightGrid g;
  g.delta = delta;
  g.steps = steps;
  return g;
}

std::vector<double> interval_discount_weights(int M, double discount) {
  if (M < 1) throw ConfigError("interval length must be >= 1");
  std::vector<double> w(M);
  for (int i = 0; i < M; ++i) w[i] = std::pow(discount, M - 1 - i);
  return w;
}

GotlState gotl_init(double delta, double discount, double initial_alpha,
                    double history_retention) {
  if (discount <= 0.0 || discount > 1.0) throw ConfigError("discount must be in (0,1]");
  if (history_retention <= 0.0 || history_retention > 1.0)
    throw ConfigError("history_retention must be in (0,1]");
  GotlState s;
  s.grid = WeightGrid::make(delta);
  double idx = initial_alpha / delta;
  s.alpha_index = static_cast<int>(std::lround(idx));
  if (s.alpha_index < 0 || s.alpha_index > s.grid.steps ||
      std::abs(initial_alpha - s.alpha_index * delta) > 1e-9)
    throw ConfigError("initial alpha not on the weight grid");
  s.discount = discount;
  s.history_retention = history_retention;
  return s;
}

PredictFn make_combined(PredictFn f_target, PredictFn f_source, double alpha) {
  if (alpha < 0.0 || alpha > 1.0) throw ConfigError("alpha outside [0,1]");
  return [f_target = std::move(f_target), f_source = std::move(f_source), alpha](const FeatureVector& x) {
    return (1.0 - alpha) * f_target(x) + alpha * f_source(x);
  };
}

GotlState interval_error_update(const GotlState& state, const IntervalErrors& errs) {
  const size_t M = errs.target_errors.size();
  if (errs.source_errors.size() != M || errs.discount_weights.size() != M)
    throw ConfigError("interval error sequences have mismatched lengths");
  double a = 0.0, b = 0.0, c = 0.0;
  for (size_t i = 0; i < M; ++i) {
    double d = errs.discount_weights[i];
    double et = errs.target_errors[i];
    double es = errs.source_errors[i];
    a += d * es * es;
    b += d * et * et;
    c += d * et * es;
  }
  GotlState s = state;
  s.stat_source_sq = s.history_retention * s.stat_source_sq + a;
  s.stat_target_sq = s.history_retention * s.stat_target_sq + b;
  s.stat_cross = s.history_retention * s.stat_cross + c;
  return s;
}

double weight_account(const GotlState& state, double alpha) {
  return alpha * alpha * state.stat_source_sq +
         (1.0 - alpha) * (1.0 - alpha) * state.stat_target_sq +
         2.0 * alpha * (1.0 - alpha) * state.stat_cross;
}

std::vector<double> neighbor_set(double alpha, double delta) {
  WeightGrid g = WeightGrid::make(delta);
  int idx = static_cast<int>(std::lround(alpha / delta));
  if (idx < 0 || idx > g.steps || std::abs(alpha - idx * delta) > 1e-9)
    throw ConfigError("alpha not on the weight grid");
  // the down-neighbor exists only strictly inside (delta, 1]; the up-neighbor
  // only strictly inside [0, 1-delta)
  std::vector<double> out;
  if (idx >= 2) out.push_back(g.value(idx - 1));
  out.push_back(g.value(idx));
  if (idx <= g.steps - 2) out.push_back(g.value(idx + 1));
  return out;
}

std::optional<double> better_reply(const GotlState& state) {
  const double cur = state.alpha();
  const double r_cur = weight_account(state, cur);
  std::optional<double> best;
  double r_best = r_cur;
  for (double a : neighbor_set(cur, state.grid.delta)) {
    if (a == cur) continue;
    double r = weight_account(state, a);
    if (r < r_cur && (!best || r < r_best || (r == r_best && a < *best))) {
      best = a;
      r_best = r;
    }
  }
  return best;
}

GotlState gotl_step(const GotlState& state, const IntervalErrors& errs) {
  GotlState s = interval_error_update(state, errs);
  if (auto next = better_reply(s)) {
    s.alpha_index = static_cast<int>(std::lround(*next / s.grid.delta));
  }
  s.interval_index += 1;
  return s;
}

IntervalErrors interval_rollout_errors(const PredictFn& f_target,
                                       const PredictFn& f_source, double alpha,
                                       const Dataset& data, int t_start,
                                       int steps, int ell, double discount) {
  if (alpha < 0.0 || alpha > 1.0) throw ConfigError("alpha outside [0,1]");
  if (steps < 1) throw ConfigError("interval length must be >= 1");
  if (t_start < ell) throw ConfigError("interval start leaves no room for lags");
  if (t_start + steps > data.size()) throw ConfigError("interval extends past the data");

  std::vector<double> lag_y(ell);
  for (int j = 0; j < ell; ++j) lag_y[j] = data.records[t_start - 1 - j].output;
  std::vector<std::vector<double>> lag_u(ell);

  IntervalErrors errs;
  errs.target_errors.reserve(steps);
  errs.source_errors.reserve(steps);
  for (int s = 0; s < steps; ++s) {
    const int t = t_start + s;
    for (int j = 0; j < ell; ++j) lag_u[j] = data.records[t - 1 - j].inputs;
    const FeatureVector x = assemble_feature(lag_y, lag_u, ell);
    const double pt = f_target(x);
    const double ps = f_source(x);
    const double pc = (1.0 - alpha) * pt + alpha * ps;
    const double y = data.records[t].output;
    errs.target_errors.push_back(y - pt);
    errs.source_errors.push_back(y - ps);
    for (int j = ell - 1; j > 0; --j) lag_y[j] = lag_y[j - 1];
    lag_y[0] = pc;
  }
  errs.discount_weights = interval_discount_weights(steps, discount);
  return errs;
}

double closed_form_alpha(double A, double B, double C, double fallback) {
  if (A < 0.0 || B < 0.0) throw ConfigError("negative squared-error statistic");
  const double denom = A + B - 2.0 * C;
  if (denom == 0.0) return fallback;
  double a = (B - C) / denom;
  if (a < 0.0) a = 0.0;
  if (a > 1.0) a = 1.0;
  return a;
}

}  // namespace gotl
