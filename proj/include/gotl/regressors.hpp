#pragma once

#include <Eigen/Dense>

#include "gotl/core.hpp"

namespace gotl {

struct LinearModel {
  Eigen::VectorXd coefficients;

  double predict(const FeatureVector& x) const { return coefficients.dot(x); }
  PredictFn as_fn() const {
    Eigen::VectorXd w = coefficients;
    return [w](const FeatureVector& x) { return w.dot(x); };
  }
};

// Ridge-regularized least squares on (X, y) pairs; the penalty applies to all
// coefficients including the intercept.
LinearModel fit_linear_xy(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double ridge);

// Builds lagged features from the dataset and fits. Default ridge guards rank
// deficiency from constant input channels (e.g. fixed inlet temperature).
LinearModel fit_batch_linear(const Dataset& data, int ell, double ridge = 1e-8);

struct RlsState {
  Eigen::VectorXd coefficients;
  Eigen::MatrixXd inverse_covariance;
  double forgetting = 0.999;
  long long sample_count = 0;

  double predict(const FeatureVector& x) const { return coefficients.dot(x); }
  PredictFn as_fn() const {
    Eigen::VectorXd w = coefficients;
    return [w](const FeatureVector& x) { return w.dot(x); };
  }
};

RlsState rls_init(int dim, double forgetting = 0.999, double p0 = 1e4);

// Exponentially weighted RLS update; the covariance is re-symmetrized each
// step to keep it positive definite over long streams.
RlsState rls_update(const RlsState& state, const FeatureVector& x, double y);

}  // namespace gotl
