#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <list>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gotl/harness.hpp"
#include "gotl/io.hpp"

namespace gotl {

namespace {

struct SubOpts {
  std::string config_pos;
  std::string config_flag;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;

  std::string config() const {
    if (!config_pos.empty() && !config_flag.empty() && config_pos != config_flag)
      throw ConfigError("config file given twice (positional and --config)");
    const std::string& path = config_pos.empty() ? config_flag : config_pos;
    if (path.empty()) throw ConfigError("missing config file (positional or --config)");
    return path;
  }
  bool seed_given() const { return seed_opt != nullptr && seed_opt->count() > 0; }
};

SubOpts& add_common(CLI::App* cmd, std::list<SubOpts>& store, const char* seed_help) {
  SubOpts& o = store.emplace_back();
  cmd->add_option("CONFIG", o.config_pos, "config file path");
  cmd->add_option("--config", o.config_flag, "config file path");
  cmd->add_option("--out-dir", o.out_dir, "directory for output files")
      ->capture_default_str();
  if (seed_help) o.seed_opt = cmd->add_option("--seed", o.seed, seed_help);
  return o;
}

std::filesystem::path out_path(const std::string& out_dir, const std::string& name) {
  std::filesystem::path dir(out_dir);
  if (!dir.empty()) std::filesystem::create_directories(dir);
  return dir / name;
}

int input_channels_of(const LinearModel& model, int ell) {
  return static_cast<int>((model.coefficients.size() - 1) / ell) - 1;
}

// ---- quick invariant suite (the `validate` subcommand) ----

struct CheckReport {
  int failures = 0;
  void pass(const std::string& name) { std::cout << "[ok]   " << name << "\n"; }
  void fail(const std::string& name, const std::string& detail) {
    ++failures;
    std::cout << "[FAIL] " << name << ": " << detail << "\n";
  }
  void result(const std::string& name, bool ok, const std::string& detail) {
    ok ? pass(name) : fail(name, detail);
  }
};

void check_weight_grid_walk(CheckReport& rep) {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> mag(0.01, 5.0), corr(-1.0, 1.0);
  std::uniform_int_distribution<int> start(0, 40);
  int bad = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const double a = mag(rng), b = mag(rng);
    const double c = corr(rng) * std::sqrt(a * b);
    GotlState s = gotl_init(0.025, 0.995, start(rng) * 0.025, 1.0);
    s.stat_source_sq = a;
    s.stat_target_sq = b;
    s.stat_cross = c;
    for (int it = 0; it < 40; ++it) {
      auto move = better_reply(s);
      if (!move) break;
      s.alpha_index = static_cast<int>(std::lround(*move / s.grid.delta));
    }
    const double opt = closed_form_alpha(a, b, c, s.alpha());
    if (std::abs(s.alpha() - opt) > s.grid.delta + 1e-12 || better_reply(s)) ++bad;
  }
  rep.result("weight-grid-walk", bad == 0,
             std::to_string(bad) + "/200 walks missed the closed-form optimum");
}

void check_account_convexity(CheckReport& rep) {
  std::mt19937_64 rng(777);
  std::normal_distribution<double> err(0.0, 1.0);
  int bad = 0;
  for (int trial = 0; trial < 50; ++trial) {
    GotlState s = gotl_init(0.025, 0.995, 1.0, 0.97);
    for (int k = 0; k < 8; ++k) {
      IntervalErrors e;
      e.discount_weights = interval_discount_weights(12, s.discount);
      for (int i = 0; i < 12; ++i) {
        e.target_errors.push_back(err(rng));
        e.source_errors.push_back(err(rng));
      }
      s = interval_error_update(s, e);
      for (int i = 1; i < s.grid.steps; ++i) {
        const double second = weight_account(s, (i + 1) * s.grid.delta) -
                              2.0 * weight_account(s, i * s.grid.delta) +
                              weight_account(s, (i - 1) * s.grid.delta);
        if (second < -1e-12) ++bad;
      }
    }
  }
  rep.result("account-convexity", bad == 0,
             std::to_string(bad) + " negative second grid-differences");
}

void check_rls_batch_match(CheckReport& rep) {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g(0.0, 1.0);
  const int n = 100, dim = 19;
  Eigen::MatrixXd X(n, dim);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < dim; ++j) X(i, j) = g(rng);
    y[i] = g(rng);
  }
  const double p0 = 1e8;
  RlsState rls = rls_init(dim, 1.0, p0);
  for (int i = 0; i < n; ++i) rls = rls_update(rls, X.row(i).transpose(), y[i]);
  const LinearModel batch = fit_linear_xy(X, y, 1.0 / p0);
  const double rel = (rls.coefficients - batch.coefficients).norm() /
                     batch.coefficients.norm();
  rep.result("rls-batch-match", rel < 1e-6,
             "relative coefficient error " + format_number(rel));
}

void check_latent_map(CheckReport& rep) {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g(0.0, 1.0);
  const int n = 60, d = 8;
  Eigen::MatrixXd pts(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) pts(i, j) = g(rng) + (i < n / 2 ? 0.0 : 2.0);
  DomainLayout layout{{n / 2, n / 2}};
  const Eigen::MatrixXd K = gram_matrix(pts);
  const Eigen::MatrixXd L = build_L(layout);
  const Eigen::MatrixXd H = build_H(n);
  bool ok = (H * H - H).cwiseAbs().maxCoeff() < 1e-9;
  ok = ok && (L * Eigen::VectorXd::Ones(n)).cwiseAbs().maxCoeff() < 1e-12;
  const Eigen::MatrixXd W = solve_tca(K, L, H, 1.0, 5);
  const Eigen::VectorXd diag = (W.transpose() * K * H * K * W).diagonal();
  for (int j = 0; j < diag.size(); ++j)
    ok = ok && std::abs(diag[j] - 1.0) < 1e-6;
  rep.result("latent-map-normalization", ok,
             "centering/contrast/variance identities violated");
}

void check_horizon_search(CheckReport& rep) {
  const int ell = 2, N = 6;
  HouseConfig house;
  MpcParams params = make_mpc_params(house, 0.10, 50.0);
  params.horizon_steps = N;

  LinearModel model;
  model.coefficients = Eigen::VectorXd::Zero(feature_dim(ell, 5));
  model.coefficients[0] = 0.85;   // y lag 1
  model.coefficients[1] = 0.05;   // y lag 2
  model.coefficients[2] = 8.0;    // flow lag 1
  model.coefficients[4] = 0.004;  // outdoor lag 1
  model.coefficients[12] = 1.8;   // intercept

  const std::vector<double> lag_y = {20.5, 20.2};
  const std::vector<std::vector<double>> past_u = {{0.05, 45.0, 2.0, 0.1, 1.0}};
  std::vector<Disturbances> forecast(N + 1);
  for (int i = 0; i <= N; ++i) {
    forecast[i].outdoor_temp = 2.0 + 0.5 * i;
    forecast[i].solar_gain = 0.1 * (i % 3);
    forecast[i].occupancy = (i % 2 == 0) ? 1 : 0;
    forecast[i].presence_flag = i < 4;
  }

  const HorizonPlan generic = optimize_horizon(
      [&] { return model.as_fn(); }, lag_y, past_u, forecast, params, ell);
  const HorizonPlan fast = optimize_horizon_linear(model.coefficients, lag_y, past_u,
                                                   forecast, params, ell);
  bool ok = generic.flow_on == fast.flow_on &&
            std::abs(generic.cost.total - fast.cost.total) < 1e-9;

  // re-pricing the winning plan from its own trajectory must give its cost
  std::vector<double> temps = {lag_y[0]};
  temps.insert(temps.end(), generic.predicted_temps.begin(),
               generic.predicted_temps.end());
  std::vector<double> flows(N), outlets(N);
  std::vector<int> presence(N + 1);
  for (int s = 0; s < N; ++s) {
    flows[s] = generic.flow_on[s] ? params.flow_max : 0.0;
    outlets[s] = temps[s] + params.outlet_effectiveness * (params.inlet_temp - temps[s]);
  }
  for (int i = 0; i <= N; ++i) presence[i] = forecast[i].presence_flag ? 1 : 0;
  const CostBreakdown repriced = horizon_cost(temps, flows, outlets, presence, params);
  ok = ok && std::abs(repriced.total - generic.cost.total) < 1e-9;

  MpcParams free_comfort = params;
  free_comfort.kappa = 0.0;
  const HorizonPlan cheapest = optimize_horizon_linear(model.coefficients, lag_y,
                                                       past_u, forecast, free_comfort, ell);
  for (int s = 0; s < N; ++s) ok = ok && cheapest.flow_on[s] == 0;

  rep.result("horizon-search", ok,
             "enumeration paths disagree or plan pricing inconsistent");
}

void check_ewma_forms(CheckReport& rep) {
  std::vector<double> step(21, 0.0);
  for (int k = 10; k <= 20; ++k) step[k] = 1.0;
  const std::vector<double> sm = ewma(step, 0.9);
  bool ok = std::abs(sm[20] - (1.0 - std::pow(0.9, 11))) < 1e-12;
  const std::vector<double> constant = ewma(std::vector<double>(7, 3.25), 0.6);
  for (double v : constant) ok = ok && v == 3.25;
  const std::vector<double> identity = ewma({1.0, 4.0, 2.0}, 0.0);
  ok = ok && identity == std::vector<double>({1.0, 4.0, 2.0});
  rep.result("ewma-closed-form", ok, "smoothing recursion mismatch");
}

int run_validate() {
  CheckReport rep;
  check_weight_grid_walk(rep);
  check_account_convexity(rep);
  check_rls_batch_match(rep);
  check_latent_map(rep);
  check_horizon_search(rep);
  check_ewma_forms(rep);
  if (rep.failures > 0)
    throw NumericalError(std::to_string(rep.failures) + " invariant check(s) failed");
  std::cout << "all invariant checks passed\n";
  return 0;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"thermal transfer-learning toolkit: simulation, source fitting, "
               "online weight adaptation, receding-horizon control"};
  app.require_subcommand(1);
  std::list<SubOpts> opts;

  CLI::App* sim = app.add_subcommand(
      "simulate", "run one closed-loop thermostat scenario and write its dataset");
  SubOpts& sim_o = add_common(sim, opts, "override the sensor noise seed");
  sim->callback([&] {
    ScenarioFileConfig cfg = parse_scenario_config(read_config_file(sim_o.config()));
    if (sim_o.seed_given()) cfg.scenario.noise_seed = sim_o.seed;
    const Dataset data = simulate_scenario(cfg.scenario, cfg.days);
    const auto path = out_path(sim_o.out_dir, cfg.scenario_id + "_dataset.csv");
    write_dataset_csv(path.string(), data);
    std::cout << path.string() << ": " << data.size() << " rows\n";
  });

  CLI::App* fit = app.add_subcommand(
      "fit-source", "simulate the source house(s) and fit the offline predictor");
  SubOpts& fit_o = add_common(fit, opts, nullptr);
  fit->callback([&] {
    ExperimentConfig cfg = parse_experiment_config(read_config_file(fit_o.config()));
    std::vector<LinearModel> singles;
    TcaModel tca;
    const LinearModel model = fit_source_model(cfg, &singles, &tca);
    const auto mpath = out_path(fit_o.out_dir, cfg.experiment_id + "_source_model.csv");
    save_linear_model(mpath.string(), model, cfg.ell, input_channels_of(model, cfg.ell));
    std::cout << mpath.string() << ": " << model.coefficients.size()
              << " coefficients\n";
    if (cfg.sources.size() > 1) {
      const auto tpath = out_path(fit_o.out_dir, cfg.experiment_id + "_tca_model.csv");
      save_tca_model(tpath.string(), tca);
      std::cout << tpath.string() << ": " << tca.components << " components\n";
    }
  });

  CLI::App* exp = app.add_subcommand(
      "run-exp", "stream the target scenario and log per-interval prediction metrics");
  SubOpts& exp_o = add_common(exp, opts, "override the target sensor noise seed");
  exp->callback([&] {
    ExperimentConfig cfg = parse_experiment_config(read_config_file(exp_o.config()));
    if (exp_o.seed_given()) cfg.target.noise_seed = exp_o.seed;
    const ExperimentResult res = run_experiment(cfg);
    const auto mpath = out_path(exp_o.out_dir, cfg.experiment_id + "_metrics.csv");
    const auto apath = out_path(exp_o.out_dir, cfg.experiment_id + "_alpha.csv");
    write_metrics_csv(mpath.string(), res.metrics);
    write_weight_log_csv(apath.string(), res.weight_log);
    std::cout << cfg.experiment_id << ": " << res.metrics.size()
              << " intervals, final alpha " << format_number(res.final_state.alpha())
              << "\n"
              << mpath.string() << "\n"
              << apath.string() << "\n";
  });

  CLI::App* curve = app.add_subcommand(
      "mpc-curve", "sweep the comfort weight and write both trade-off curves");
  SubOpts& curve_o = add_common(curve, opts, "override the control-run noise seed");
  curve->callback([&] {
    ExperimentConfig cfg = parse_experiment_config(read_config_file(curve_o.config()));
    if (cfg.experiment_id != "mpc")
      throw ConfigError("mpc-curve expects a config with experiment_id = mpc");
    if (curve_o.seed_given()) cfg.mpc_noise_seed = curve_o.seed;
    const CurveStudyResult curves = run_mpc_study(cfg);
    const auto gpath = out_path(curve_o.out_dir, cfg.experiment_id + "_curve_gotl.csv");
    const auto tpath = out_path(curve_o.out_dir, cfg.experiment_id + "_curve_target.csv");
    write_curve_csv(gpath.string(), curves.gotl_curve);
    write_curve_csv(tpath.string(), curves.target_curve);
    std::cout << gpath.string() << "\n" << tpath.string() << "\n";
  });

  CLI::App* val = app.add_subcommand(
      "validate", "run the quick invariant suite over all numerical components");
  val->callback([] { run_validate(); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace gotl
