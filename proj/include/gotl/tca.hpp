#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "gotl/core.hpp"
#include "gotl/regressors.hpp"

namespace gotl {

struct DomainLayout {
  std::vector<int> sizes;

  int total() const {
    int n = 0;
    for (int s : sizes) n += s;
    return n;
  }
  int domains() const { return static_cast<int>(sizes.size()); }
  void validate() const;
};

// Latent-subspace model fitted on the union of source-domain features.
// training_points holds the (standardized, intercept-stripped) landmark rows;
// projection maps kernel evaluations against them into the m components.
struct TcaModel {
  Eigen::MatrixXd training_points;  // N x d
  Eigen::MatrixXd projection;       // N x m
  Eigen::VectorXd mean, sd;         // standardization statistics, length d
  double mu = 1.0;
  int components = 0;
  std::string kernel = "linear";
};

// Linear-kernel Gram matrix of the given rows.
Eigen::MatrixXd gram_matrix(const Eigen::MatrixXd& points);

// Domain-contrast matrix: same-domain blocks (D-1)/(N^2 n_d^2), cross blocks
// -1/(N^2 n_d n_u).
Eigen::MatrixXd build_L(const DomainLayout& layout);

// Centering matrix I - 11^T/N.
Eigen::MatrixXd build_H(int N);

// Leading-eigenvector solution of KHK v = lambda (KLK + mu I) v, columns
// scaled so diag(W^T KHK W) = 1 wherever the eigenvalue is nonzero.
Eigen::MatrixXd solve_tca(const Eigen::MatrixXd& K, const Eigen::MatrixXd& L,
                          const Eigen::MatrixXd& H, double mu, int m);

// Projection of a point living in the training-point space (standardized,
// no intercept): W^T [k(x, x_j)]_j.
Eigen::VectorXd project(const TcaModel& model, const Eigen::VectorXd& x);

// Projection of a raw lagged feature vector (intercept last): strips the
// intercept, standardizes with the model statistics, then projects.
Eigen::VectorXd project_feature(const TcaModel& model, const FeatureVector& x);

// Squared maximum mean discrepancy between two samples (rows), linear kernel.
double mmd(const Eigen::MatrixXd& sample_a, const Eigen::MatrixXd& sample_b);

struct MultiSourceModel {
  TcaModel tca;
  LinearModel head;       // on [projected components, 1]
  LinearModel collapsed;  // equivalent model on the raw feature layout

  double predict(const FeatureVector& x) const { return collapsed.predict(x); }
  PredictFn as_fn() const { return collapsed.as_fn(); }
};

// Fits TCA on the union of the source datasets' lagged features and a ridge
// regression head on the projected points. With a linear kernel the composed
// map collapses exactly to a single LinearModel on the raw layout, stored as
// `collapsed`. Landmark rows per domain are capped (strided subsample) to
// bound the eigenproblem size.
MultiSourceModel fit_multisource_predictor(const std::vector<Dataset>& sources,
                                           int ell, double mu, int m,
                                           double ridge = 1e-4,
                                           int landmark_cap = 400);

// 6-fold cross-validation (domain x third, rollout RMSE on the held-out
// third) over the component-count grid; ties resolve to the smaller count.
int select_components(const std::vector<Dataset>& sources, int ell,
                      const std::vector<int>& grid, double mu,
                      double ridge = 1e-4, int landmark_cap = 400,
                      int horizon_steps = 12);

}  // namespace gotl
