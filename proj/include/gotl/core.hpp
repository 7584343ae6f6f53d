#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "gotl/common.hpp"

namespace gotl {

// One sampling period of logged data: zone temperature plus the input channels
// (water flow kg/s, inlet water temp degC, outdoor temp degC, solar gain kW,
// occupant count).
struct SampleRecord {
  long long time_index = 0;
  double output = 0.0;
  std::vector<double> inputs;
};

struct Dataset {
  std::vector<SampleRecord> records;
  std::string domain_id;

  int input_dim() const { return records.empty() ? 0 : static_cast<int>(records.front().inputs.size()); }
  int size() const { return static_cast<int>(records.size()); }
};

// Lagged regression input: [y_{t-1..t-l}, u_{t-1..t-l}, 1].
using FeatureVector = Eigen::VectorXd;

struct HorizonSpec {
  double sampling_period_h = 0.5;
  int horizon_steps = 12;
  double discount = 0.995;
};

using PredictFn = std::function<double(const FeatureVector&)>;

inline int feature_dim(int ell, int m_in) { return ell * (1 + m_in) + 1; }

// Feature vector for position t in the dataset (needs records t-1..t-ell).
FeatureVector build_feature_vector(const Dataset& data, int t, int ell);

// Same layout, assembled from raw lag buffers: lag_y[j] = y_{t-1-j},
// lag_u[j] = u_{t-1-j}. Used by rollout and MPC loops.
FeatureVector assemble_feature(const std::vector<double>& lag_y,
                               const std::vector<std::vector<double>>& lag_u,
                               int ell);

// Multi-step prediction over steps t_k+1 .. t_k+M, where t_k is the last
// record of `history`. Lagged outputs use measured values up to t_k and
// previously predicted values afterwards; lagged inputs use measured inputs
// from history and `future_inputs` (future_inputs[s] is the input applied at
// step t_k+1+s). `predict` is invoked once per step, in time order, so
// stateful single-step predictors are supported.
std::vector<double> rollout_predict(const PredictFn& predict,
                                    const Dataset& history,
                                    const std::vector<std::vector<double>>& future_inputs,
                                    const HorizonSpec& spec, int ell);

}  // namespace gotl
