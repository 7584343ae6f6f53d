#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "gotl/core.hpp"

namespace gotl {

// Weight grid {0, delta, 2*delta, ..., 1}; 1/delta must be an integer.
struct WeightGrid {
  double delta = 0.025;
  int steps = 40;  // 1/delta

  static WeightGrid make(double delta);
  double value(int index) const { return index * delta; }
};

// One evaluation interval's rollout errors for the two base predictors on the
// shared deployed trajectory, plus the in-interval discount weights.
struct IntervalErrors {
  std::vector<double> target_errors;
  std::vector<double> source_errors;
  std::vector<double> discount_weights;
};

// Discount weights for an interval of M steps: the step closest to the
// interval end gets weight 1, the earliest gets discount^(M-1).
std::vector<double> interval_discount_weights(int M, double discount);

// Weight-adaptation state. The per-candidate discounted error accounts are
// represented by three sufficient statistics: R(alpha) =
// alpha^2 * stat_source_sq + (1-alpha)^2 * stat_target_sq
// + 2*alpha*(1-alpha) * stat_cross.
struct GotlState {
  WeightGrid grid;
  int alpha_index = 0;
  double discount = 0.995;
  long long interval_index = 0;
  double stat_source_sq = 0.0;
  double stat_target_sq = 0.0;
  double stat_cross = 0.0;
  // Optional decay of the accumulated statistics between intervals; 1 = keep
  // the full history (the default accumulation).
  double history_retention = 1.0;

  double alpha() const { return grid.value(alpha_index); }
};

GotlState gotl_init(double delta = 0.025, double discount = 0.995,
                    double initial_alpha = 1.0, double history_retention = 1.0);

inline double combined_predict(const PredictFn& f_target, const PredictFn& f_source,
                               double alpha, const FeatureVector& x) {
  if (alpha < 0.0 || alpha > 1.0) throw ConfigError("alpha outside [0,1]");
  return (1.0 - alpha) * f_target(x) + alpha * f_source(x);
}

PredictFn make_combined(PredictFn f_target, PredictFn f_source, double alpha);

// Folds one interval's errors into the accounts (discount weights applied
// per step; history_retention applied to the previous accounts).
GotlState interval_error_update(const GotlState& state, const IntervalErrors& errs);

// Discounted cumulative squared error account for a candidate weight.
double weight_account(const GotlState& state, double alpha);

std::vector<double> neighbor_set(double alpha, double delta);

// Strictly improving neighbor with the smallest account (ties toward smaller
// alpha); empty when the current weight is already locally optimal.
std::optional<double> better_reply(const GotlState& state);

// One full adaptation step: fold the finished interval's errors, move to the
// better reply if any, advance the interval counter.
GotlState gotl_step(const GotlState& state, const IntervalErrors& errs);

// Quadratic-minimizer oracle: arg min over [0,1] of
// a^2*A + (1-a)^2*B + 2a(1-a)*C. When A+B-2C == 0 the objective is flat and
// `fallback` (the caller's current weight) is returned.
double closed_form_alpha(double A, double B, double C, double fallback = 0.5);

// Both base predictors evaluated along the deployed multi-step trajectory of
// their alpha-combination over logged data [t_start, t_start+steps): lagged
// outputs switch from measured values to combined predictions past t_start,
// lagged inputs stay measured. Errors are truth minus prediction.
IntervalErrors interval_rollout_errors(const PredictFn& f_target,
                                       const PredictFn& f_source, double alpha,
                                       const Dataset& data, int t_start,
                                       int steps, int ell, double discount);

}  // namespace gotl
