// Acceptance gate: ten hard checks over the weight adaptation, the
// regressors, the latent-subspace fusion, the horizon search, and the three
// end-to-end studies. Each check prints one [PASS]/[FAIL] line with its
// runtime; checks with a stated budget also fail when they run over it.
// Exit status is nonzero when any check fails.
//
// Usage: gotl_acceptance [config_dir]   (default: the repo's configs/)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gotl/gotl.hpp"
#include "gotl/harness.hpp"
#include "gotl/io.hpp"
#include "gotl/mpc.hpp"
#include "gotl/regressors.hpp"
#include "gotl/simulator.hpp"
#include "gotl/tca.hpp"

namespace {

using namespace gotl;

#ifndef GOTL_ACCEPTANCE_CONFIG_DIR
#define GOTL_ACCEPTANCE_CONFIG_DIR "configs"
#endif

std::string g_config_dir = GOTL_ACCEPTANCE_CONFIG_DIR;

struct CheckResult {
  bool pass = true;
  std::string detail;
};

// Records the first failure; later ones would only repeat the story.
void fail(CheckResult& r, const std::string& msg) {
  if (r.pass) {
    r.pass = false;
    r.detail = msg;
  }
}

ExperimentConfig load_experiment(const std::string& file) {
  return parse_experiment_config(read_config_file(g_config_dir + "/" + file));
}

// ---------------------------------------------------------------------------
// 1. From any starting weight and any quadratic account, the better-reply
//    walk settles, in at most one sweep of the grid, within one grid step of
//    the continuous minimizer, and no improving neighbor remains.

CheckResult check_weight_walk() {
  CheckResult r;
  Rng rng(9001);
  const double delta = 0.025;
  for (int trial = 0; trial < 1000 && r.pass; ++trial) {
    const double A = rng.uniform(0.01, 5.0);
    const double B = rng.uniform(0.01, 5.0);
    const double corr = rng.uniform(-0.95, 0.95);
    const double C = corr * std::sqrt(A * B);

    GotlState st = gotl_init(delta, 0.995, 1.0, 1.0);
    st.alpha_index = static_cast<int>(rng.uniform(0.0, st.grid.steps + 1.0));
    st.stat_source_sq = A;
    st.stat_target_sq = B;
    st.stat_cross = C;

    int moves = 0;
    while (auto next = better_reply(st)) {
      st.alpha_index = static_cast<int>(std::lround(*next / delta));
      if (++moves > st.grid.steps) {
        fail(r, "walk did not settle within one sweep of the grid (trial " +
                    std::to_string(trial) + ")");
        break;
      }
    }
    if (!r.pass) break;

    const double opt = closed_form_alpha(A, B, C, st.alpha());
    if (std::abs(st.alpha() - opt) > delta + 1e-12)
      fail(r, "rest point " + std::to_string(st.alpha()) +
                  " further than one grid step from minimizer " +
                  std::to_string(opt) + " (trial " + std::to_string(trial) + ")");
    if (better_reply(st).has_value())
      fail(r, "rest point still has an improving neighbor (trial " +
                  std::to_string(trial) + ")");
  }
  return r;
}

// ---------------------------------------------------------------------------
// 2. The discounted error account stays convex over the weight grid after
//    every interval update: second grid differences never dip below zero.

CheckResult check_account_convexity() {
  CheckResult r;
  Rng rng(1207);
  const int M = 12;
  for (int seq = 0; seq < 100 && r.pass; ++seq) {
    GotlState st = gotl_init(0.025, 0.995, 1.0, 0.97);
    for (int k = 0; k < 8 && r.pass; ++k) {
      IntervalErrors errs;
      errs.discount_weights = interval_discount_weights(M, st.discount);
      for (int i = 0; i < M; ++i) {
        errs.target_errors.push_back(rng.uniform(-2.0, 2.0));
        errs.source_errors.push_back(rng.uniform(-2.0, 2.0));
      }
      st = gotl_step(st, errs);
      for (int i = 1; i < st.grid.steps; ++i) {
        const double lo = weight_account(st, st.grid.value(i - 1));
        const double mid = weight_account(st, st.grid.value(i));
        const double hi = weight_account(st, st.grid.value(i + 1));
        if (lo - 2.0 * mid + hi < -1e-12) {
          fail(r, "account second difference " +
                      std::to_string(lo - 2.0 * mid + hi) + " at grid point " +
                      std::to_string(i) + " (sequence " + std::to_string(seq) + ")");
          break;
        }
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// 3. With no forgetting, the recursive estimator reproduces the batch ridge
//    solution whose penalty equals the inverse prior scale.

CheckResult check_rls_matches_batch() {
  CheckResult r;
  Rng rng(33);
  const int dim = feature_dim(3, 5);
  const int n = 200;
  const double p0 = 1e8;

  Eigen::VectorXd truth(dim);
  for (int j = 0; j < dim; ++j) truth[j] = rng.uniform(-1.0, 1.0);

  Eigen::MatrixXd X(n, dim);
  Eigen::VectorXd y(n);
  RlsState st = rls_init(dim, 1.0, p0);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd x(dim);
    for (int j = 0; j + 1 < dim; ++j) x[j] = rng.uniform(-1.0, 1.0);
    x[dim - 1] = 1.0;
    const double yi = truth.dot(x) + 0.01 * rng.gauss();
    X.row(i) = x.transpose();
    y[i] = yi;
    st = rls_update(st, x, yi);
  }

  const LinearModel batch = fit_linear_xy(X, y, 1.0 / p0);
  const double rel =
      (st.coefficients - batch.coefficients).norm() / batch.coefficients.norm();
  if (!(rel < 1e-6))
    fail(r, "recursive vs batch relative coefficient gap " + std::to_string(rel));
  return r;
}

// ---------------------------------------------------------------------------
// 4. The latent projection is unit-normalized in the centered kernel metric
//    and shrinks the domain-mean discrepancy of mean-shifted clouds to under
//    a fifth of the raw value.

CheckResult check_projection_normalization() {
  CheckResult r;
  Rng rng(404);
  const int n = 100, d = 12;
  Eigen::MatrixXd A(n, d), B(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) {
      A(i, j) = rng.gauss();
      B(i, j) = rng.gauss() + (j < 3 ? 2.0 : 0.0);
    }
  Eigen::MatrixXd P(2 * n, d);
  P.topRows(n) = A;
  P.bottomRows(n) = B;

  const Eigen::MatrixXd K = gram_matrix(P);
  DomainLayout layout;
  layout.sizes = {n, n};
  const Eigen::MatrixXd L = build_L(layout);
  const Eigen::MatrixXd H = build_H(2 * n);
  const Eigen::MatrixXd G = K * H * K;
  const double raw = mmd(A, B);

  for (int m : {5, 10}) {
    const Eigen::MatrixXd W = solve_tca(K, L, H, 1.0, m);
    if (W.cols() != m) {
      fail(r, "expected " + std::to_string(m) + " components, got " +
                  std::to_string(W.cols()));
      break;
    }
    for (int j = 0; j < m; ++j) {
      const double q = W.col(j).dot(G * W.col(j));
      if (std::abs(q - 1.0) > 1e-6) {
        fail(r, "column " + std::to_string(j) + " quadratic form " +
                    std::to_string(q) + " at m=" + std::to_string(m));
        break;
      }
    }
    const Eigen::MatrixXd Z = K * W;
    const double proj = mmd(Z.topRows(n), Z.bottomRows(n));
    if (!(proj <= 0.2 * raw))
      fail(r, "projected mean gap " + std::to_string(proj) + " vs raw " +
                  std::to_string(raw) + " at m=" + std::to_string(m));
  }
  return r;
}

// ---------------------------------------------------------------------------
// 5. The latent solver agrees with an independent dense eigensolver on the
//    top eigenspace: all principal angles below 1e-6.

Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& M) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(M);
  return qr.householderQ() * Eigen::MatrixXd::Identity(M.rows(), M.cols());
}

CheckResult check_dense_oracle() {
  CheckResult r;
  Rng rng(515);
  const int na = 20, nb = 20, d = 8, m = 3;
  const double mu = 0.5;
  const int N = na + nb;

  Eigen::MatrixXd P(N, d);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < d; ++j) P(i, j) = rng.gauss();
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < d; ++j) P(na + i, j) = rng.gauss() + (j < 2 ? 1.5 : 0.0);

  const Eigen::MatrixXd K = gram_matrix(P);
  DomainLayout layout;
  layout.sizes = {na, nb};
  const Eigen::MatrixXd L = build_L(layout);
  const Eigen::MatrixXd H = build_H(N);

  const Eigen::MatrixXd W = solve_tca(K, L, H, mu, m);

  Eigen::MatrixXd khk = K * H * K;
  khk = 0.5 * (khk + khk.transpose()).eval();
  Eigen::MatrixXd klk = K * L * K + mu * Eigen::MatrixXd::Identity(N, N);
  klk = 0.5 * (klk + klk.transpose()).eval();

  const Eigen::MatrixXd Mo = klk.ldlt().solve(khk);
  Eigen::EigenSolver<Eigen::MatrixXd> es(Mo);
  if (es.info() != Eigen::Success) {
    fail(r, "dense eigensolver did not converge");
    return r;
  }

  std::vector<int> order(N);
  for (int i = 0; i < N; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return es.eigenvalues()[a].real() > es.eigenvalues()[b].real();
  });

  for (int j = 0; j < m; ++j) {
    const auto ev = es.eigenvalues()[order[j]];
    if (std::abs(ev.imag()) > 1e-8 * std::max(1.0, std::abs(ev.real()))) {
      fail(r, "top eigenvalue " + std::to_string(j) + " is not real");
      return r;
    }
  }
  const double gap =
      es.eigenvalues()[order[m - 1]].real() - es.eigenvalues()[order[m]].real();
  if (gap < 1e-6) {
    fail(r, "eigenvalue gap " + std::to_string(gap) + " too small to compare spaces");
    return r;
  }

  Eigen::MatrixXd Vtop(N, m);
  for (int j = 0; j < m; ++j) Vtop.col(j) = es.eigenvectors().col(order[j]).real();

  const Eigen::MatrixXd Q1 = orthonormal_basis(W);
  const Eigen::MatrixXd Q2 = orthonormal_basis(Vtop);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Q1.transpose() * Q2);
  const double cos_min =
      std::clamp(svd.singularValues().minCoeff(), -1.0, 1.0);
  const double angle = std::acos(cos_min);
  if (!(angle < 1e-6))
    fail(r, "largest principal angle " + std::to_string(angle));
  return r;
}

// ---------------------------------------------------------------------------
// 6. The horizon search returns exactly the plan a from-scratch exhaustive
//    enumerator finds, on random plants, lags, and forecasts.

struct ReferencePlan {
  std::vector<int> flow_on;
  std::vector<double> temps;
  CostBreakdown cost;
};

// Written against the documented contract only: feature layout
// [y lags, input-row lags (current decision first), 1]; outlet mixes the
// start-of-step room temperature toward the inlet; comfort covers the current
// temperature plus the horizon, scaled by kappa/N; ties resolve to the
// lexicographically smaller on/off sequence via ascending mask order.
ReferencePlan exhaustive_reference(const Eigen::VectorXd& coefs,
                                   const std::vector<double>& lag_y,
                                   const std::vector<std::vector<double>>& past_u,
                                   const std::vector<Disturbances>& forecast,
                                   const MpcParams& p, int ell) {
  const int N = p.horizon_steps;
  const int dim = feature_dim(ell, 5);
  ReferencePlan best;
  double best_total = std::numeric_limits<double>::infinity();

  for (long long mask = 0; mask < (1LL << N); ++mask) {
    std::vector<double> ys = lag_y;
    std::vector<std::vector<double>> us = past_u;
    std::vector<double> temps(N + 1);
    temps[0] = lag_y[0];
    std::vector<int> on(N);
    double comfort = 0.0, heating = 0.0, pump = 0.0;

    for (int s = 0; s < N; ++s) {
      on[s] = static_cast<int>((mask >> (N - 1 - s)) & 1);
      const double flow = on[s] ? p.flow_max : 0.0;
      const std::vector<double> u_now = {flow, p.inlet_temp,
                                         forecast[s].outdoor_temp,
                                         forecast[s].solar_gain,
                                         static_cast<double>(forecast[s].occupancy)};
      Eigen::VectorXd x(dim);
      int pos = 0;
      for (int j = 0; j < ell; ++j) x[pos++] = ys[j];
      for (int c = 0; c < 5; ++c) x[pos++] = u_now[c];
      for (int j = 0; j + 1 < ell; ++j)
        for (int c = 0; c < 5; ++c) x[pos++] = us[j][c];
      x[pos] = 1.0;

      if (on[s]) {
        const double outlet =
            temps[s] + p.outlet_effectiveness * (p.inlet_temp - temps[s]);
        heating += p.beta * p.sampling_period_h * (p.inlet_temp - outlet);
        pump += p.gamma * p.sampling_period_h * (flow * 3.6) / 3600.0;
      }

      const double yhat = coefs.dot(x);
      temps[s + 1] = yhat;
      ys.insert(ys.begin(), yhat);
      ys.pop_back();
      us.insert(us.begin(), u_now);
      if (static_cast<int>(us.size()) > ell - 1) us.pop_back();
    }

    for (int i = 0; i <= N; ++i) {
      const double dev = temps[i] - p.setpoint;
      comfort += (forecast[i].presence_flag ? 1.0 : 0.0) * dev * dev;
    }
    comfort *= p.kappa / N;

    const double total = comfort + heating + pump;
    if (total < best_total) {
      best_total = total;
      best.flow_on = on;
      best.temps.assign(temps.begin() + 1, temps.end());
      best.cost = {total, comfort, heating, pump};
    }
  }
  return best;
}

CheckResult check_horizon_search() {
  CheckResult r;
  Rng rng(606);
  for (int inst = 0; inst < 50 && r.pass; ++inst) {
    const int ell = 1 + inst % 3;
    const int N = 4 + static_cast<int>(rng.uniform(0.0, 5.0));

    MpcParams p;
    p.kappa = rng.uniform(5.0, 80.0);
    p.beta = rng.uniform(0.3, 2.0);
    p.gamma = rng.uniform(100.0, 700.0);
    p.setpoint = rng.uniform(20.0, 22.0);
    p.horizon_steps = N;
    p.reopt_steps = 1;
    p.flow_max = rng.uniform(0.05, 0.3);
    p.inlet_temp = rng.uniform(40.0, 50.0);
    p.outlet_effectiveness = rng.uniform(0.2, 0.6);
    p.sampling_period_h = 0.5;

    // stable-ish plant: output lags with bounded total mass, a clearly
    // positive flow gain, small coefficients elsewhere
    const int dim = feature_dim(ell, 5);
    Eigen::VectorXd coefs = Eigen::VectorXd::Zero(dim);
    double mass = 0.0;
    for (int j = 0; j < ell; ++j) {
      coefs[j] = rng.uniform(-1.0, 1.0);
      mass += std::abs(coefs[j]);
    }
    const double target_mass = rng.uniform(0.4, 0.9);
    for (int j = 0; j < ell; ++j) coefs[j] *= target_mass / mass;
    for (int j = 0; j < ell; ++j) {
      const double fade = (j == 0) ? 1.0 : 0.3;
      double* row = coefs.data() + ell + 5 * j;
      row[0] = ((j == 0) ? rng.uniform(3.0, 8.0) : rng.uniform(-0.5, 0.5)) * fade;
      row[1] = rng.uniform(0.0, 0.02) * fade;
      row[2] = rng.uniform(0.0, 0.05) * fade;
      row[3] = rng.uniform(0.0, 0.4) * fade;
      row[4] = rng.uniform(0.0, 0.25) * fade;
    }
    coefs[dim - 1] = rng.uniform(0.0, 2.0);

    std::vector<double> lag_y(ell);
    for (double& v : lag_y) v = rng.uniform(18.0, 24.0);
    std::vector<std::vector<double>> past_u;
    for (int j = 0; j + 1 < ell; ++j)
      past_u.push_back({rng.uniform() < 0.5 ? p.flow_max : 0.0, p.inlet_temp,
                        rng.uniform(-5.0, 10.0), rng.uniform(0.0, 0.8),
                        std::floor(rng.uniform(0.0, 3.0))});
    std::vector<Disturbances> forecast(N + 1);
    for (auto& f : forecast) {
      f.outdoor_temp = rng.uniform(-5.0, 10.0);
      f.solar_gain = rng.uniform(0.0, 0.8);
      f.occupancy = static_cast<int>(rng.uniform(0.0, 3.0));
      f.presence_flag = f.occupancy > 0;
    }

    const HorizonPlan fast =
        optimize_horizon_linear(coefs, lag_y, past_u, forecast, p, ell);
    const ReferencePlan ref =
        exhaustive_reference(coefs, lag_y, past_u, forecast, p, ell);

    if (fast.flow_on != ref.flow_on) {
      fail(r, "plan mismatch on instance " + std::to_string(inst));
      break;
    }
    const double tol = 1e-9;
    if (std::abs(fast.cost.total - ref.cost.total) > tol ||
        std::abs(fast.cost.comfort - ref.cost.comfort) > tol ||
        std::abs(fast.cost.heating - ref.cost.heating) > tol ||
        std::abs(fast.cost.pump - ref.cost.pump) > tol) {
      fail(r, "cost mismatch on instance " + std::to_string(inst));
      break;
    }
    for (int s = 0; s < N; ++s)
      if (std::abs(fast.predicted_temps[s] - ref.temps[s]) > tol) {
        fail(r, "trajectory mismatch on instance " + std::to_string(inst));
        break;
      }

    // the generic entry point must match its linear fast path
    if (inst % 10 == 0) {
      const LinearModel lm{coefs};
      const PredictorFactory factory = [&lm]() { return lm.as_fn(); };
      const HorizonPlan generic =
          optimize_horizon(factory, lag_y, past_u, forecast, p, ell);
      if (generic.flow_on != fast.flow_on ||
          std::abs(generic.cost.total - fast.cost.total) > 1e-12) {
        fail(r, "generic search diverged from the linear path on instance " +
                    std::to_string(inst));
        break;
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// 7. Single-source studies: the weight starts fully on the offline predictor
//    and moves off it; after the four-week transient the combined predictor's
//    smoothed rollout error tracks the better base on at least 90% of
//    intervals and never falls visibly behind the fixed ensemble.

constexpr long long kLateStart = 112;  // intervals in the first four weeks

CheckResult check_single_source_transfer() {
  CheckResult r;
  for (const char* name : {"exp1.cfg", "exp2.cfg", "exp3.cfg"}) {
    const ExperimentConfig cfg = load_experiment(name);
    const ExperimentResult res = run_experiment(cfg);
    const std::string tag(name);

    std::vector<double> alpha_series;
    alpha_series.reserve(res.metrics.size());
    for (const auto& row : res.metrics) alpha_series.push_back(row.alpha);
    const std::vector<double> alpha_trend = ewma(alpha_series, cfg.ewma_smoothing);
    if (alpha_trend.front() != 1.0)
      fail(r, tag + ": run did not start fully on the offline predictor");
    if (!(alpha_trend.back() < 0.5))
      fail(r, tag + ": smoothed weight ended at " +
                  std::to_string(alpha_trend.back()) + ", expected below 0.5");

    long long late = 0, tracks = 0;
    for (const auto& row : res.metrics) {
      if (row.k <= kLateStart) continue;
      ++late;
      if (row.ewma_gotl <= std::min(row.ewma_source, row.ewma_target) + 0.05)
        ++tracks;
      if (!(row.ewma_gotl <= row.ewma_ensemble + 0.05))
        fail(r, tag + ": interval " + std::to_string(row.k) +
                    " fell behind the fixed ensemble");
    }
    if (late == 0) {
      fail(r, tag + ": no intervals past the transient window");
    } else if (tracks < 0.9 * static_cast<double>(late)) {
      fail(r, tag + ": tracked the better base on only " + std::to_string(tracks) +
                  " of " + std::to_string(late) + " late intervals");
    }
    if (!r.pass) break;
  }
  return r;
}

// ---------------------------------------------------------------------------
// 8. The two-source fused predictor out-forecasts both per-source fits early
//    on, and the adaptive combination beats every fixed predictor on at
//    least 80% of late intervals.

CheckResult check_two_source_fusion() {
  CheckResult r;
  const ExperimentConfig cfg = load_experiment("exp4.cfg");
  const ExperimentResult res = run_experiment(cfg);
  if (res.metrics.empty() || res.metrics.front().rmse_singles.size() != 2) {
    fail(r, "expected per-source error columns for a two-source run");
    return r;
  }

  const long long split = 140;
  double fused = 0.0, single1 = 0.0, single2 = 0.0;
  long long early = 0, late = 0, wins = 0;
  for (const auto& row : res.metrics) {
    if (row.k <= split) {
      fused += row.rmse_source;
      single1 += row.rmse_singles[0];
      single2 += row.rmse_singles[1];
      ++early;
    } else {
      ++late;
      const double best_fixed =
          std::min(std::min(row.ewma_source, row.ewma_target),
                   std::min(row.ewma_singles[0], row.ewma_singles[1]));
      if (row.ewma_gotl < best_fixed) ++wins;
    }
  }
  if (early == 0 || late == 0) {
    fail(r, "run too short to split into early and late intervals");
    return r;
  }
  fused /= early;
  single1 /= early;
  single2 /= early;
  if (!(fused < single1 && fused < single2))
    fail(r, "fused early rollout error " + std::to_string(fused) +
                " does not beat both single fits (" + std::to_string(single1) +
                ", " + std::to_string(single2) + ")");
  if (wins < 0.8 * static_cast<double>(late))
    fail(r, "adaptive combination won only " + std::to_string(wins) + " of " +
                std::to_string(late) + " late intervals");
  return r;
}

// ---------------------------------------------------------------------------
// 9. Control study: at the tightest-comfort operating point the adaptive
//    predictor heats no more than the online-only one while giving up at
//    most 5% comfort, and both trade-off curves are clean Pareto fronts.

bool dominated(const CurvePoint& p, const std::vector<CurvePoint>& all) {
  for (const auto& q : all) {
    if (&q == &p) continue;
    if (q.comfort <= p.comfort && q.heating_kwh <= p.heating_kwh &&
        (q.comfort < p.comfort || q.heating_kwh < p.heating_kwh))
      return true;
  }
  return false;
}

bool clean_front(const std::vector<CurvePoint>& curve, std::string& why) {
  std::vector<CurvePoint> front;
  for (const auto& p : curve)
    if (!dominated(p, curve)) front.push_back(p);
  if (front.size() < 2) {
    why = "front collapsed to fewer than two points";
    return false;
  }
  std::sort(front.begin(), front.end(),
            [](const CurvePoint& a, const CurvePoint& b) { return a.comfort < b.comfort; });
  for (std::size_t i = 1; i < front.size(); ++i) {
    if (!(front[i].comfort > front[i - 1].comfort) ||
        !(front[i].heating_kwh < front[i - 1].heating_kwh)) {
      why = "front is not strictly monotone";
      return false;
    }
  }
  return true;
}

CheckResult check_control_study() {
  CheckResult r;
  const ExperimentConfig cfg = load_experiment("mpc.cfg");
  const CurveStudyResult res = run_mpc_study(cfg);
  if (res.gotl_curve.size() < 2 || res.target_curve.size() < 2) {
    fail(r, "curves need at least two comfort weights");
    return r;
  }

  const CurvePoint& g = res.gotl_curve.front();
  const CurvePoint& t = res.target_curve.front();
  if (!(g.heating_kwh <= t.heating_kwh))
    fail(r, "adaptive heating " + std::to_string(g.heating_kwh) +
                " kWh above online-only " + std::to_string(t.heating_kwh) + " kWh");
  if (!(g.comfort <= 1.05 * t.comfort))
    fail(r, "adaptive comfort " + std::to_string(g.comfort) + " above 1.05 x " +
                std::to_string(t.comfort));

  std::string why;
  if (!clean_front(res.gotl_curve, why)) fail(r, "adaptive curve: " + why);
  if (!clean_front(res.target_curve, why)) fail(r, "online-only curve: " + why);
  return r;
}

// ---------------------------------------------------------------------------
// 10. With the plant itself as predictor and no sensor noise, every
//     re-optimization segment's planned cost matches the realized cost.

CheckResult check_exact_model_consistency() {
  CheckResult r;
  HouseConfig house;
  const int days = 5;
  const auto conditions =
      generate_occupancy("workweek", days, 7, generate_weather("mild-site", days, 3));

  MpcParams params = make_mpc_params(house, 0.10, 50.0);
  params.horizon_steps = 12;
  params.reopt_steps = 2;

  MpcRunConfig run;
  run.mode = MpcPredictorMode::ExactSim;
  run.ell = 3;
  run.days = days;
  run.warmup_steps = 13;
  run.sensor_noise_sd = 0.0;

  const MpcRunResult res = receding_horizon_run(house, conditions, params, run);
  if (res.segments.empty()) {
    fail(r, "run produced no re-optimization segments");
    return r;
  }
  for (std::size_t i = 0; i < res.segments.size(); ++i) {
    const auto& seg = res.segments[i];
    const double dt = std::abs(seg.planned.total - seg.realized.total);
    const double dc = std::abs(seg.planned.comfort - seg.realized.comfort);
    const double dh = std::abs(seg.planned.heating - seg.realized.heating);
    const double dp = std::abs(seg.planned.pump - seg.realized.pump);
    if (dt > 1e-9 || dc > 1e-9 || dh > 1e-9 || dp > 1e-9) {
      fail(r, "segment " + std::to_string(i) + " planned vs realized gap " +
                  std::to_string(std::max(std::max(dt, dc), std::max(dh, dp))));
      break;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------

struct Check {
  const char* name;
  double budget_s;  // 0 = report runtime only
  CheckResult (*fn)();
};

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_config_dir = argv[1];

  const Check checks[] = {
      {"weight walk settles within one grid step of the quadratic minimizer", 5.0,
       check_weight_walk},
      {"discounted error accounts stay convex over the weight grid", 1.0,
       check_account_convexity},
      {"recursive and batch least squares agree without forgetting", 1.0,
       check_rls_matches_batch},
      {"latent projection is unit-normalized and aligns domain means", 10.0,
       check_projection_normalization},
      {"latent solver matches a dense generalized eigensolver", 5.0,
       check_dense_oracle},
      {"horizon search agrees with exhaustive enumeration", 30.0,
       check_horizon_search},
      {"single-source transfer improves late multi-step forecasts", 0.0,
       check_single_source_transfer},
      {"two-source fusion beats either source alone", 0.0,
       check_two_source_fusion},
      {"adaptive control heats less at comparable comfort", 0.0,
       check_control_study},
      {"planned and realized costs match under an exact model", 60.0,
       check_exact_model_consistency},
  };

  int failures = 0;
  int idx = 0;
  for (const auto& c : checks) {
    ++idx;
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult res;
    try {
      res = c.fn();
    } catch (const std::exception& e) {
      res.pass = false;
      res.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (res.pass && c.budget_s > 0.0 && secs > c.budget_s) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "runtime %.2f s over the %.0f s budget", secs,
                    c.budget_s);
      res.pass = false;
      res.detail = buf;
    }
    std::printf("[%s] %2d/10 %s (%.2f s)%s%s\n", res.pass ? "PASS" : "FAIL", idx,
                c.name, secs, res.detail.empty() ? "" : ": ", res.detail.c_str());
    std::fflush(stdout);
    if (!res.pass) ++failures;
  }

  if (failures == 0)
    std::printf("acceptance: all 10 checks passed\n");
  else
    std::printf("acceptance: %d of 10 checks failed\n", failures);
  return failures == 0 ? 0 : 1;
}
