#include "gotl/core.hpp"

namespace gotl {

FeatureVector build_feature_vector(const Dataset& data, int t, int ell) {
  if (ell < 1) throw ConfigError("lag order must be >= 1");
  if (t < ell || t > data.size())
    throw ConfigError("insufficient history to build feature vector at t=" + std::to_string(t));
  const int m_in = data.input_dim();
  FeatureVector x(feature_dim(ell, m_in));
  int pos = 0;
  for (int j = 1; j <= ell; ++j) x[pos++] = data.records[t - j].output;
  for (int j = 1; j <= ell; ++j)
    for (int c = 0; c < m_in; ++c) x[pos++] = data.records[t - j].inputs[c];
  x[pos] = 1.0;
  return x;
}

FeatureVector assemble_feature(const std::vector<double>& lag_y,
                               const std::vector<std::vector<double>>& lag_u,
                               int ell) {
  if (static_cast<int>(lag_y.size()) < ell || static_cast<int>(lag_u.size()) < ell)
    throw ConfigError("lag buffers shorter than lag order");
  const int m_in = static_cast<int>(lag_u[0].size());
  FeatureVector x(feature_dim(ell, m_in));
  int pos = 0;
  for (int j = 0; j < ell; ++j) x[pos++] = lag_y[j];
  for (int j = 0; j < ell; ++j)
    for (int c = 0; c < m_in; ++c) x[pos++] = lag_u[j][c];
  x[pos] = 1.0;
  return x;
}

std::vector<double> rollout_predict(const PredictFn& predict,
                                    const Dataset& history,
                                    const std::vector<std::vector<double>>& future_inputs,
                                    const HorizonSpec& spec, int ell) {
  const int M = spec.horizon_steps;
  if (M < 1) throw ConfigError("horizon_steps must be >= 1");
  if (history.size() < ell) throw ConfigError("history shorter than lag order");
  if (static_cast<int>(future_inputs.size()) < M - 1)
    throw ConfigError("horizon exceeds provided input sequence");

  // lag_y[j] holds y_{t-1-j} for the step t about to be predicted
  std::vector<double> lag_y(ell), result;
  std::vector<std::vector<double>> lag_u(ell);
  const int tk = history.size();
  for (int j = 0; j < ell; ++j) {
    lag_y[j] = history.records[tk - 1 - j].output;
    lag_u[j] = history.records[tk - 1 - j].inputs;
  }
  result.reserve(M);
  for (int s = 0; s < M; ++s) {
    double yhat = predict(assemble_feature(lag_y, lag_u, ell));
    result.push_back(yhat);
    if (s + 1 < M) {
      for (int j = ell - 1; j > 0; --j) {
        lag_y[j] = lag_y[j - 1];
        lag_u[j] = lag_u[j - 1];
      }
      lag_y[0] = yhat;
      lag_u[0] = future_inputs[s];
    }
  }
  return result;
}

}  // namespace gotl
