#include "gotl/regressors.hpp"

#include <cmath>

namespace gotl {

LinearModel fit_linear_xy(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double ridge) {
  if (X.rows() == 0 || X.rows() != y.size()) throw ConfigError("empty or mismatched fit data");
  if (ridge < 0) throw ConfigError("ridge must be nonnegative");
  Eigen::MatrixXd A = X.transpose() * X;
  A.diagonal().array() += ridge;
  Eigen::VectorXd b = X.transpose() * y;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
  if (ldlt.info() != Eigen::Success)
    throw NumericalError("normal equations decomposition failed");
  if (ridge == 0.0) {
    // unregularized: a singular system has no unique minimizer
    Eigen::VectorXd dvec = ldlt.vectorD();
    double dmax = dvec.cwiseAbs().maxCoeff();
    if (dmax <= 0 || dvec.cwiseAbs().minCoeff() < 1e-13 * dmax)
      throw NumericalError("rank-deficient normal equations; use ridge > 0");
  }
  Eigen::VectorXd w = ldlt.solve(b);
  if (!w.allFinite()) throw NumericalError("linear solve produced non-finite coefficients");
  LinearModel m;
  m.coefficients = w;
  return m;
}

LinearModel fit_batch_linear(const Dataset& data, int ell, double ridge) {
  const int n = data.size();
  if (n <= ell) throw ConfigError("dataset too short for lag order");
  const int d = feature_dim(ell, data.input_dim());
  Eigen::MatrixXd X(n - ell, d);
  Eigen::VectorXd y(n - ell);
  for (int t = ell; t < n; ++t) {
    X.row(t - ell) = build_feature_vector(data, t, ell);
    y[t - ell] = data.records[t].output;
  }
  return fit_linear_xy(X, y, ridge);
}

RlsState rls_init(int dim, double forgetting, double p0) {
  if (dim < 1) throw ConfigError("dimension must be >= 1");
  if (p0 <= 0) throw ConfigError("p0 must be positive");
  if (forgetting <= 0 || forgetting > 1) throw ConfigError("forgetting must be in (0,1]");
  RlsState s;
  s.coefficients = Eigen::VectorXd::Zero(dim);
  s.inverse_covariance = p0 * Eigen::MatrixXd::Identity(dim, dim);
  s.forgetting = forgetting;
  s.sample_count = 0;
  return s;
}

RlsState rls_update(const RlsState& state, const FeatureVector& x, double y) {
  if (x.size() != state.coefficients.size()) throw ConfigError("feature dimension mismatch");
  if (!x.allFinite() || !std::isfinite(y)) throw NumericalError("non-finite RLS input");
  RlsState s = state;
  const double lam = s.forgetting;
  Eigen::VectorXd Px = s.inverse_covariance * x;
  double denom = lam + x.dot(Px);
  Eigen::VectorXd g = Px / denom;
  s.coefficients += g * (y - s.coefficients.dot(x));
  s.inverse_covariance = (s.inverse_covariance - g * Px.transpose()) / lam;
  s.inverse_covariance = 0.5 * (s.inverse_covariance + s.inverse_covariance.transpose()).eval();
  s.sample_count += 1;
  return s;
}

}  // namespace gotl
