#include "gotl/tca.hpp"

#include <algorithm>
#include <cmath>

namespace gotl {

void DomainLayout::validate() const {
  if (sizes.size() < 2) throw ConfigError("domain layout needs at least two domains");
  for (int s : sizes)
    if (s < 1) throw ConfigError("every domain needs at least one instance");
}

Eigen::MatrixXd gram_matrix(const Eigen::MatrixXd& points) {
  if (points.rows() == 0) throw ConfigError("empty point set");
  return points * points.transpose();
}

Eigen::MatrixXd build_L(const DomainLayout& layout) {
  layout.validate();
  const int D = layout.domains();
  const double N = layout.total();
  Eigen::MatrixXd L(static_cast<int>(N), static_cast<int>(N));
  int row0 = 0;
  for (int d = 0; d < D; ++d) {
    int col0 = 0;
    for (int u = 0; u < D; ++u) {
      const double nd = layout.sizes[d], nu = layout.sizes[u];
      const double v = (d == u) ? (D - 1) / (N * N * nd * nd) : -1.0 / (N * N * nd * nu);
      L.block(row0, col0, layout.sizes[d], layout.sizes[u]).setConstant(v);
      col0 += layout.sizes[u];
    }
    row0 += layout.sizes[d];
  }
  return L;
}

Eigen::MatrixXd build_H(int N) {
  if (N < 1) throw ConfigError("N must be >= 1");
  return Eigen::MatrixXd::Identity(N, N) -
         Eigen::MatrixXd::Constant(N, N, 1.0 / N);
}

Eigen::MatrixXd solve_tca(const Eigen::MatrixXd& K, const Eigen::MatrixXd& L,
                          const Eigen::MatrixXd& H, double mu, int m) {
  const int N = static_cast<int>(K.rows());
  if (mu <= 0) throw ConfigError("mu must be strictly positive");
  if (m < 1 || m > N) throw ConfigError("component count out of range");
  if (K.cols() != N || L.rows() != N || L.cols() != N || H.rows() != N || H.cols() != N)
    throw ConfigError("matrix dimensions mismatch");
  Eigen::MatrixXd A = K * H * K;
  A = 0.5 * (A + A.transpose()).eval();
  Eigen::MatrixXd B = K * L * K;
  B = 0.5 * (B + B.transpose()).eval();
  B.diagonal().array() += mu;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(A, B);
  if (solver.info() != Eigen::Success)
    throw NumericalError("generalized eigensolve failed; KLK + mu I may be ill-conditioned");
  // eigenvalues come back ascending: take the top m, largest first
  Eigen::MatrixXd W(N, m);
  for (int j = 0; j < m; ++j) W.col(j) = solver.eigenvectors().col(N - 1 - j);
  for (int j = 0; j < m; ++j) {
    const double nrm = W.col(j).dot(A * W.col(j));
    if (nrm > 1e-12) W.col(j) /= std::sqrt(nrm);
  }
  return W;
}

Eigen::VectorXd project(const TcaModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.training_points.cols())
    throw ConfigError("point dimension does not match training points");
  return model.projection.transpose() * (model.training_points * x);
}

Eigen::VectorXd project_feature(const TcaModel& model, const FeatureVector& x) {
  const int d = static_cast<int>(model.training_points.cols());
  if (x.size() != d + 1) throw ConfigError("feature dimension does not match model");
  Eigen::VectorXd z =
      (x.head(d) - model.mean).cwiseQuotient(model.sd);
  return project(model, z);
}

double mmd(const Eigen::MatrixXd& sample_a, const Eigen::MatrixXd& sample_b) {
  if (sample_a.rows() == 0 || sample_b.rows() == 0) throw ConfigError("empty sample");
  if (sample_a.cols() != sample_b.cols()) throw ConfigError("sample dimension mismatch");
  const double kaa = (sample_a * sample_a.transpose()).mean();
  const double kbb = (sample_b * sample_b.transpose()).mean();
  const double kab = (sample_a * sample_b.transpose()).mean();
  const double v = kaa - 2.0 * kab + kbb;
  return v > 0.0 ? v : 0.0;
}

namespace {

struct DomainFeatures {
  Eigen::MatrixXd X;  // raw lagged features incl. intercept column
  Eigen::VectorXd y;
};

DomainFeatures build_domain_features(const Dataset& data, int ell) {
  const int n = data.size();
  if (n <= ell) throw ConfigError("dataset too short for lag order");
  DomainFeatures f;
  f.X.resize(n - ell, feature_dim(ell, data.input_dim()));
  f.y.resize(n - ell);
  for (int t = ell; t < n; ++t) {
    f.X.row(t - ell) = build_feature_vector(data, t, ell);
    f.y[t - ell] = data.records[t].output;
  }
  return f;
}

MultiSourceModel fit_multisource_from_features(const std::vector<DomainFeatures>& doms,
                                               double mu, int m, double ridge,
                                               int landmark_cap) {
  const int raw_dim = static_cast<int>(doms.front().X.cols());
  for (const auto& d : doms)
    if (d.X.cols() != raw_dim) throw ConfigError("feature dimensions differ across domains");
  const int d_tca = raw_dim - 1;  // intercept column excluded from the kernel space

  long long total = 0;
  for (const auto& d : doms) total += d.X.rows();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d_tca), var = Eigen::VectorXd::Zero(d_tca);
  for (const auto& d : doms)
    mean += d.X.leftCols(d_tca).colwise().sum().transpose();
  mean /= static_cast<double>(total);
  for (const auto& d : doms)
    var += (d.X.leftCols(d_tca).rowwise() - mean.transpose())
               .array().square().colwise().sum().matrix().transpose();
  var /= static_cast<double>(total);
  Eigen::VectorXd sd = var.cwiseSqrt();
  for (int i = 0; i < d_tca; ++i)
    if (sd[i] == 0.0) sd[i] = 1.0;

  // strided landmark subsample per domain, on standardized rows
  DomainLayout layout;
  std::vector<Eigen::MatrixXd> lm;
  for (const auto& d : doms) {
    const int nd = static_cast<int>(d.X.rows());
    const int stride = std::max(1, nd / landmark_cap);
    const int count = std::min(landmark_cap, (nd + stride - 1) / stride);
    Eigen::MatrixXd Z(count, d_tca);
    for (int i = 0; i < count; ++i)
      Z.row(i) = (d.X.row(i * stride).head(d_tca).transpose() - mean)
                     .cwiseQuotient(sd)
                     .transpose();
    lm.push_back(std::move(Z));
    layout.sizes.push_back(count);
  }
  const int N = layout.total();
  if (m > N) throw ConfigError("component count exceeds available landmark points");
  Eigen::MatrixXd XL(N, d_tca);
  int row = 0;
  for (const auto& Z : lm) {
    XL.middleRows(row, Z.rows()) = Z;
    row += static_cast<int>(Z.rows());
  }

  MultiSourceModel model;
  model.tca.training_points = XL;
  model.tca.mean = mean;
  model.tca.sd = sd;
  model.tca.mu = mu;
  model.tca.components = m;
  const Eigen::MatrixXd K = gram_matrix(XL);
  // a single domain has no cross-domain discrepancy to minimize; its L is the
  // zero matrix and the problem reduces to (kernel) PCA directions
  const Eigen::MatrixXd L = layout.domains() > 1 ? build_L(layout)
                                                 : Eigen::MatrixXd::Zero(N, N);
  model.tca.projection = solve_tca(K, L, build_H(N), mu, m);

  // ridge head on the projected union, then collapse to the raw layout:
  // theta(x) = G zstd(x) with G = W^T XL
  const Eigen::MatrixXd G = model.tca.projection.transpose() * XL;  // m x d_tca
  Eigen::MatrixXd Z(total, m + 1);
  Eigen::VectorXd yall(total);
  row = 0;
  for (const auto& d : doms) {
    const int nd = static_cast<int>(d.X.rows());
    Eigen::MatrixXd zstd =
        (d.X.leftCols(d_tca).rowwise() - mean.transpose()) * sd.cwiseInverse().asDiagonal();
    Z.block(row, 0, nd, m) = zstd * G.transpose();
    Z.block(row, m, nd, 1).setOnes();
    yall.segment(row, nd) = d.y;
    row += nd;
  }
  model.head = fit_linear_xy(Z, yall, ridge);

  const Eigen::VectorXd a = model.head.coefficients.head(m);
  const double b = model.head.coefficients[m];
  Eigen::VectorXd w(raw_dim);
  w.head(d_tca) = (a.transpose() * G * sd.cwiseInverse().asDiagonal()).transpose();
  w[d_tca] = b - a.dot(G * mean.cwiseQuotient(sd));
  model.collapsed.coefficients = w;
  return model;
}

double rollout_rmse_chunks(const LinearModel& model, const Dataset& data, int ell, int M) {
  double acc = 0.0;
  int chunks = 0;
  const int n = data.size();
  for (int tk = M; tk + M < n; tk += M) {
    std::vector<double> lag_y(ell);
    std::vector<std::vector<double>> lag_u(ell);
    for (int j = 0; j < ell; ++j) {
      lag_y[j] = data.records[tk - j].output;
      lag_u[j] = data.records[tk - j].inputs;
    }
    double sq = 0.0;
    for (int s = 1; s <= M; ++s) {
      double yhat = model.predict(assemble_feature(lag_y, lag_u, ell));
      sq += (yhat - data.records[tk + s].output) * (yhat - data.records[tk + s].output);
      for (int j = ell - 1; j > 0; --j) {
        lag_y[j] = lag_y[j - 1];
        lag_u[j] = lag_u[j - 1];
      }
      lag_y[0] = yhat;
      lag_u[0] = data.records[tk + s].inputs;
    }
    acc += sq / M;
    chunks += 1;
  }
  if (chunks == 0) throw ConfigError("held-out piece too short for rollout scoring");
  return std::sqrt(acc / chunks);
}

}  // namespace

MultiSourceModel fit_multisource_predictor(const std::vector<Dataset>& sources,
                                           int ell, double mu, int m, double ridge,
                                           int landmark_cap) {
  if (sources.empty()) throw ConfigError("no source datasets");
  if (landmark_cap < 1) throw ConfigError("landmark cap must be >= 1");
  std::vector<DomainFeatures> doms;
  for (const auto& s : sources) doms.push_back(build_domain_features(s, ell));
  return fit_multisource_from_features(doms, mu, m, ridge, landmark_cap);
}

int select_components(const std::vector<Dataset>& sources, int ell,
                      const std::vector<int>& grid, double mu, double ridge,
                      int landmark_cap, int horizon_steps) {
  if (sources.size() < 2) throw ConfigError("cross-validation needs at least two domains");
  if (grid.empty()) throw ConfigError("empty component grid");
  std::vector<int> order = grid;
  std::sort(order.begin(), order.end());
  double best_score = 0.0;
  int best_m = -1;
  for (int m : order) {
    double score_sum = 0.0;
    int folds = 0;
    for (size_t d = 0; d < sources.size(); ++d) {
      const int n = sources[d].size();
      const int third = n / 3;
      for (int i = 0; i < 3; ++i) {
        const int lo = i * third, hi = (i < 2) ? (i + 1) * third : n;
        Dataset train, held;
        train.domain_id = sources[d].domain_id;
        held.domain_id = sources[d].domain_id;
        for (int t = 0; t < n; ++t)
          (t >= lo && t < hi ? held : train).records.push_back(sources[d].records[t]);
        std::vector<Dataset> fold_sources;
        for (size_t u = 0; u < sources.size(); ++u)
          fold_sources.push_back(u == d ? train : sources[u]);
        MultiSourceModel ms =
            fit_multisource_predictor(fold_sources, ell, mu, m, ridge, landmark_cap);
        score_sum += rollout_rmse_chunks(ms.collapsed, held, ell, horizon_steps);
        folds += 1;
      }
    }
    const double score = score_sum / folds;
    if (best_m < 0 || score < best_score) {
      best_score = score;
      best_m = m;
    }
  }
  return best_m;
}

}  // namespace gotl
