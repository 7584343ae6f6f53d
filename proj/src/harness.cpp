#include "gotl/harness.hpp"

#include <cmath>
#include <utility>

namespace gotl {

void ExperimentConfig::validate() const {
  const bool multi = experiment_id == "exp4";
  if (experiment_id != "exp1" && experiment_id != "exp2" && experiment_id != "exp3" &&
      experiment_id != "exp4" && experiment_id != "mpc")
    throw ConfigError("unknown experiment_id: " + experiment_id);
  if (multi && sources.size() != 2)
    throw ConfigError("exp4 requires exactly 2 source houses");
  if (!multi && sources.size() != 1)
    throw ConfigError(experiment_id + " requires exactly 1 source house");
  for (const auto& s : sources) s.house.validate();
  target.house.validate();
  for (const auto& s : sources)
    if (s.flow_max <= 0 || s.noise_sd < 0)
      throw ConfigError("source scenario flow/noise out of range");
  if (target.flow_max <= 0 || target.noise_sd < 0)
    throw ConfigError("target scenario flow/noise out of range");
  if (source_days < 2 || target_days < 2) throw ConfigError("runs need at least 2 days");
  if (ell < 1) throw ConfigError("ell must be >= 1");
  if (interval_steps < ell)
    throw ConfigError("interval_steps must be >= ell so intervals start with full lags");
  if (rls_forgetting <= 0 || rls_forgetting > 1)
    throw ConfigError("rls_forgetting outside (0,1]");
  if (rls_p0 <= 0) throw ConfigError("rls_p0 must be positive");
  if (source_ridge < 0) throw ConfigError("source_ridge must be >= 0");
  if (ewma_smoothing < 0 || ewma_smoothing >= 1)
    throw ConfigError("ewma_smoothing outside [0,1)");
  if (gotl_retention <= 0 || gotl_retention > 1)
    throw ConfigError("gotl_retention outside (0,1]");
  if (multi) {
    if (tca_mu <= 0) throw ConfigError("tca_mu must be positive");
    if (tca_components < 0) throw ConfigError("tca_components must be >= 0");
    if (tca_components == 0 && tca_grid.empty())
      throw ConfigError("component cross-validation needs a nonempty grid");
    if (tca_landmark_cap < 2) throw ConfigError("tca_landmark_cap too small");
  }
  if (experiment_id == "mpc") {
    if (kappa_list.size() < 2) throw ConfigError("kappa_list needs at least 2 values");
    for (double k : kappa_list)
      if (k < 0) throw ConfigError("kappa values must be nonnegative");
    if (mpc_days < 1) throw ConfigError("mpc_days must be >= 1");
    if (mpc_interval_steps < ell) throw ConfigError("mpc_interval_steps must be >= ell");
    if (mpc_retention <= 0 || mpc_retention > 1)
      throw ConfigError("mpc_retention outside (0,1]");
    if (mpc_warmup_steps < ell + 1)
      throw ConfigError("mpc_warmup_steps must cover the lag window");
    if (mpc_noise_sd < 0) throw ConfigError("mpc_noise_sd must be >= 0");
  }
}

std::vector<double> ewma(const std::vector<double>& series, double smoothing) {
  if (series.empty()) throw ConfigError("ewma needs a nonempty series");
  if (smoothing < 0 || smoothing >= 1) throw ConfigError("smoothing outside [0,1)");
  std::vector<double> out(series.size());
  double s = series[0];
  out[0] = s;
  for (std::size_t i = 1; i < series.size(); ++i) {
    s = smoothing * s + (1.0 - smoothing) * series[i];
    out[i] = s;
  }
  return out;
}

Dataset simulate_scenario(const ScenarioSpec& spec, int days) {
  auto conditions = generate_weather(spec.weather, days, spec.weather_seed);
  conditions = generate_occupancy(spec.occupancy, days, spec.occupancy_seed,
                                  std::move(conditions));
  HysteresisController thermostat(21.0, 0.5, spec.flow_max);
  ControllerFn controller = [&thermostat](long long, double measured) {
    return thermostat.act(measured);
  };
  return run_scenario(spec.house, controller, conditions, days, spec.noise_sd,
                      spec.noise_seed, spec.occupancy + "@" + spec.weather);
}

LinearModel fit_source_model(const ExperimentConfig& config,
                             std::vector<LinearModel>* singles, TcaModel* tca) {
  config.validate();
  std::vector<Dataset> sources;
  sources.reserve(config.sources.size());
  for (const auto& s : config.sources)
    sources.push_back(simulate_scenario(s, config.source_days));
  if (singles) {
    singles->clear();
    for (const auto& d : sources)
      singles->push_back(fit_batch_linear(d, config.ell, config.source_ridge));
  }
  if (sources.size() == 1)
    return fit_batch_linear(sources[0], config.ell, config.source_ridge);
  int m = config.tca_components;
  if (m == 0)
    m = select_components(sources, config.ell, config.tca_grid, config.tca_mu,
                          config.source_ridge, config.tca_landmark_cap,
                          config.interval_steps);
  MultiSourceModel fused = fit_multisource_predictor(
      sources, config.ell, config.tca_mu, m, config.source_ridge,
      config.tca_landmark_cap);
  if (tca) *tca = fused.tca;
  return fused.collapsed;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  if (config.experiment_id == "mpc")
    throw ConfigError("the mpc study runs through run_mpc_study, not run_experiment");

  ExperimentResult res;
  res.source_model = fit_source_model(config, &res.single_source_models);
  res.target_data = simulate_scenario(config.target, config.target_days);
  const Dataset& data = res.target_data;

  const int M = config.interval_steps;
  const int ell = config.ell;
  const int n = data.size();
  const int K = (n - 1 - M) / M;
  if (K < 1) throw ConfigError("target run too short for one evaluation interval");

  RlsState rls = rls_init(feature_dim(ell, data.input_dim()), config.rls_forgetting,
                          config.rls_p0);
  for (int t = ell; t <= M; ++t)
    rls = rls_update(rls, build_feature_vector(data, t, ell), data.records[t].output);

  GotlState state = gotl_init(config.gotl_delta, config.gotl_discount,
                              config.initial_alpha, config.gotl_retention);

  HorizonSpec spec;
  spec.horizon_steps = M;
  spec.discount = config.gotl_discount;

  // Growing prefix of the target log; rollouts at interval k see data up to
  // t_k only. All four predictors share the same prefix and future inputs.
  Dataset hist;
  hist.domain_id = data.domain_id;
  hist.records.assign(data.records.begin(), data.records.begin() + M + 1);

  res.metrics.reserve(K);
  res.weight_log.reserve(K);
  for (int k = 1; k <= K; ++k) {
    const int tk = k * M;
    const double alpha = state.alpha();

    std::vector<std::vector<double>> future_inputs;
    future_inputs.reserve(M - 1);
    for (int s = 1; s < M; ++s) future_inputs.push_back(data.records[tk + s].inputs);

    auto roll = [&](const Eigen::VectorXd& w) {
      LinearModel m{w};
      return rollout_predict(m.as_fn(), hist, future_inputs, spec, ell);
    };
    auto rmse = [&](const std::vector<double>& pred) {
      double acc = 0.0;
      for (int s = 0; s < M; ++s) {
        const double d = pred[s] - data.records[tk + 1 + s].output;
        acc += d * d;
      }
      return std::sqrt(acc / M);
    };

    MetricsRow row;
    row.k = k;
    row.alpha = alpha;
    row.rmse_source = rmse(roll(res.source_model.coefficients));
    row.rmse_target = rmse(roll(rls.coefficients));
    const Eigen::VectorXd combined =
        (1.0 - alpha) * rls.coefficients + alpha * res.source_model.coefficients;
    row.rmse_gotl = rmse(roll(combined));
    const Eigen::VectorXd half =
        0.5 * rls.coefficients + 0.5 * res.source_model.coefficients;
    row.rmse_ensemble = rmse(roll(half));
    for (const auto& single : res.single_source_models)
      row.rmse_singles.push_back(rmse(roll(single.coefficients)));
    res.metrics.push_back(std::move(row));

    const IntervalErrors errs =
        interval_rollout_errors(rls.as_fn(), res.source_model.as_fn(), alpha, data,
                                tk + 1, M, ell, config.gotl_discount);
    state = gotl_step(state, errs);

    IntervalLogRow log_row;
    log_row.k = k;
    log_row.alpha = alpha;
    log_row.r_target = weight_account(state, 0.0);
    log_row.r_source = weight_account(state, 1.0);
    log_row.r_combined = weight_account(state, alpha);
    log_row.rmse_interval = res.metrics.back().rmse_gotl;
    res.weight_log.push_back(log_row);

    for (int t = tk + 1; t <= tk + M; ++t)
      rls = rls_update(rls, build_feature_vector(data, t, ell), data.records[t].output);
    hist.records.insert(hist.records.end(), data.records.begin() + tk + 1,
                        data.records.begin() + tk + M + 1);
  }

  auto column = [&](auto getter) {
    std::vector<double> v;
    v.reserve(res.metrics.size());
    for (const auto& r : res.metrics) v.push_back(getter(r));
    return v;
  };
  const auto es = ewma(column([](const MetricsRow& r) { return r.rmse_source; }),
                       config.ewma_smoothing);
  const auto et = ewma(column([](const MetricsRow& r) { return r.rmse_target; }),
                       config.ewma_smoothing);
  const auto eg = ewma(column([](const MetricsRow& r) { return r.rmse_gotl; }),
                       config.ewma_smoothing);
  const auto ee = ewma(column([](const MetricsRow& r) { return r.rmse_ensemble; }),
                       config.ewma_smoothing);
  for (std::size_t i = 0; i < res.metrics.size(); ++i) {
    res.metrics[i].ewma_source = es[i];
    res.metrics[i].ewma_target = et[i];
    res.metrics[i].ewma_gotl = eg[i];
    res.metrics[i].ewma_ensemble = ee[i];
  }
  const std::size_t n_singles = res.single_source_models.size();
  for (std::size_t j = 0; j < n_singles; ++j) {
    std::vector<double> v;
    v.reserve(res.metrics.size());
    for (const auto& r : res.metrics) v.push_back(r.rmse_singles[j]);
    const auto e = ewma(v, config.ewma_smoothing);
    for (std::size_t i = 0; i < res.metrics.size(); ++i)
      res.metrics[i].ewma_singles.push_back(e[i]);
  }
  res.final_state = state;
  return res;
}

CurveStudyResult run_mpc_study(const ExperimentConfig& config) {
  config.validate();
  if (config.experiment_id != "mpc")
    throw ConfigError("run_mpc_study needs experiment_id = mpc");

  LinearModel source = fit_source_model(config);
  auto conditions =
      generate_weather(config.target.weather, config.mpc_days, config.target.weather_seed);
  conditions = generate_occupancy(config.target.occupancy, config.mpc_days,
                                  config.target.occupancy_seed, std::move(conditions));

  MpcParams params = make_mpc_params(config.target.house, config.target.flow_max, 0.0);
  params.horizon_steps = config.mpc_horizon;
  params.reopt_steps = config.mpc_reopt;

  MpcRunConfig run;
  run.source_model = std::move(source);
  run.ell = config.ell;
  run.days = config.mpc_days;
  run.rls_forgetting = config.rls_forgetting;
  run.rls_p0 = config.rls_p0;
  run.gotl_delta = config.gotl_delta;
  run.gotl_discount = config.gotl_discount;
  run.gotl_retention = config.mpc_retention;
  run.gotl_interval_steps = config.mpc_interval_steps;
  run.initial_alpha = config.initial_alpha;
  run.warmup_steps = config.mpc_warmup_steps;
  run.sensor_noise_sd = config.mpc_noise_sd;
  run.noise_seed = config.mpc_noise_seed;

  CurveStudyResult out;
  run.mode = MpcPredictorMode::Gotl;
  out.gotl_curve =
      comfort_heating_curve(config.target.house, conditions, params, run, config.kappa_list);
  run.mode = MpcPredictorMode::TargetOnly;
  out.target_curve =
      comfort_heating_curve(config.target.house, conditions, params, run, config.kappa_list);
  return out;
}

}  // namespace gotl
