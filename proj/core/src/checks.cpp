#include "pg/checks.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "pg/aggregate.hpp"
#include "pg/config.hpp"
#include "pg/constants.hpp"
#include "pg/driver.hpp"
#include "pg/envs.hpp"
#include "pg/estimators.hpp"
#include "pg/optimizers.hpp"
#include "pg/oracle.hpp"
#include "pg/policies.hpp"
#include "pg/runio.hpp"
#include "pg/schedule.hpp"
#include "pg/synth.hpp"

namespace pg::checks {
namespace {

using Clock = std::chrono::steady_clock;

CheckResult timed(const std::string& id, const std::string& name,
                  const std::function<std::pair<bool, std::string>()>& body) {
  CheckResult r;
  r.id = id;
  r.name = name;
  const auto start = Clock::now();
  try {
    auto [pass, detail] = body();
    r.pass = pass;
    r.detail = detail;
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(4);
  ss << v;
  return ss.str();
}

ParamVector random_theta(int dim, double scale, RngStream& rng) {
  ParamVector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = scale * rng.normal();
  return v;
}

double rel_err(const ParamVector& got, const ParamVector& want, double floor = 1e-12) {
  return (got - want).norm() / std::max(want.norm(), floor);
}

void parallel_run(unsigned workers, std::vector<std::function<void()>> jobs) {
  std::atomic<std::size_t> next{0};
  auto loop = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      jobs[i]();
    }
  };
  const unsigned n = std::max<std::size_t>(1, std::min<std::size_t>(workers, jobs.size()));
  std::vector<std::thread> pool;
  for (unsigned i = 0; i + 1 < n; ++i) pool.emplace_back(loop);
  loop();
  for (auto& t : pool) t.join();
}

// ---------------------------------------------------------------------------
// A1: exact unbiasedness of g on the bundled 2-state MDP.

CheckResult check_grad_unbiased() {
  return timed("A1", "estimator g matches DP gradient in exact expectation", [] {
    const FiniteMdp mdp = FiniteMdp::two_state_chain(0.9);
    const SoftmaxTabularPolicy policy(mdp.n_states(), mdp.n_actions());
    const int H = 3;
    RngStream rng(20240901);
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const ParamVector theta = random_theta(policy.dim(), 0.8, rng);
      const ParamVector expected = oracle::enumerate_expectation(
          mdp, policy, theta, H, [&](const oracle::FiniteTrajectory& traj, double) {
            return grad_estimate(traj, policy, theta, mdp.discount());
          });
      const ParamVector dp = oracle::exact_grad_jh_dp(mdp, policy, theta, H);
      worst = std::max(worst, rel_err(expected, dp));
    }
    return std::make_pair(worst < 1e-9, "max rel err " + fmt(worst) + " (tol 1e-9)");
  });
}

// ---------------------------------------------------------------------------
// A2: single-trajectory HVP identity against finite differences of g.

template <class Env, class Policy>
double hvp_identity_worst(const Env& env, const Policy& policy, double discount, int H,
                          int n_trials, double theta_scale, RngStream& rng) {
  double worst = 0.0;
  const double h = 1e-6;
  for (int i = 0; i < n_trials; ++i) {
    const ParamVector theta = random_theta(policy.dim(), theta_scale, rng);
    const auto traj = sample_trajectory(env, policy, theta, H, rng);
    ParamVector u = random_theta(policy.dim(), 1.0, rng);
    u /= u.norm();
    const ParamVector hvp = hvp_estimate(traj, policy, theta, discount, u);
    const ParamVector density_term =
        traj_log_density_grad(traj, policy, theta).dot(u) *
        grad_estimate(traj, policy, theta, discount);
    const ParamVector analytic = hvp - density_term;  // grad <g(tau, .), u>
    const ParamVector fd = (grad_estimate(traj, policy, theta + h * u, discount) -
                            grad_estimate(traj, policy, theta - h * u, discount)) /
                           (2.0 * h);
    worst = std::max(worst, (analytic - fd).norm() / std::max(fd.norm(), 1e-8));
  }
  return worst;
}

CheckResult check_hvp_identity() {
  return timed("A2", "hvp_estimate matches same-trajectory finite difference of g", [] {
    RngStream rng(777001);
    const FiniteMdp mdp = FiniteMdp::two_state_chain(0.9);
    const SoftmaxTabularPolicy softmax(mdp.n_states(), mdp.n_actions());
    const PointMassEnv pm = PointMassEnv::standard(2);
    const GaussianLinearPolicy gauss(FeatureMap::bounded_tanh(2), 0.5, 2, pm.action_clip());
    const CauchyLinearPolicy cauchy(FeatureMap::bounded_tanh(2), 0.5, 2);
    double worst = 0.0;
    worst = std::max(worst, hvp_identity_worst(mdp, softmax, 0.9, 5, 34, 0.8, rng));
    worst = std::max(worst, hvp_identity_worst(pm, gauss, 0.99, 20, 33, 0.3, rng));
    worst = std::max(worst, hvp_identity_worst(pm, cauchy, 0.99, 20, 33, 0.3, rng));
    return std::make_pair(worst < 1e-5, "max rel err " + fmt(worst) + " over 100 trajectories (tol 1e-5)");
  });
}

// ---------------------------------------------------------------------------
// A3: HARPG correction is unbiased for grad J_H(theta_t) - grad J_H(theta_prev).

CheckResult check_harpg_correction() {
  return timed("A3", "HARPG correction quadrature reproduces the gradient difference", [] {
    const FiniteMdp mdp = FiniteMdp::two_state_chain(0.9);
    const SoftmaxTabularPolicy policy(mdp.n_states(), mdp.n_actions());
    const int H = 3;
    RngStream rng(424242);
    const ParamVector theta_prev = random_theta(policy.dim(), 0.6, rng);
    ParamVector delta = random_theta(policy.dim(), 1.0, rng);
    delta *= 0.5 / delta.norm();
    const ParamVector theta_t = theta_prev + delta;

    ParamVector quad = ParamVector::Zero(policy.dim());
    const int n_q = 64;
    for (int i = 0; i < n_q; ++i) {
      const double q = (i + 0.5) / n_q;  // midpoint rule over [0,1]
      const ParamVector theta_hat = q * theta_t + (1.0 - q) * theta_prev;
      quad += oracle::enumerate_expectation(
          mdp, policy, theta_hat, H, [&](const oracle::FiniteTrajectory& traj, double) {
            return hvp_estimate(traj, policy, theta_hat, mdp.discount(), delta);
          });
    }
    quad /= n_q;
    const ParamVector want = oracle::exact_grad_jh_dp(mdp, policy, theta_t, H) -
                             oracle::exact_grad_jh_dp(mdp, policy, theta_prev, H);
    const double err = rel_err(quad, want);
    return std::make_pair(err < 1e-4, "rel err " + fmt(err) + " over 64 q-values (tol 1e-4)");
  });
}

// ---------------------------------------------------------------------------
// A4: Lemma-style truncation bounds for the oracle gradient and Hessian.

CheckResult check_truncation_bounds() {
  return timed("A4", "oracle truncation errors respect D_g g^H and D_h g^H", [] {
    const FiniteMdp mdp = FiniteMdp::two_state_chain(0.9);
    const SoftmaxTabularPolicy policy(mdp.n_states(), mdp.n_actions());
    const PolicyBounds pb = policy_bounds(policy);
    RngStream rng(90210);
    const ParamVector theta = random_theta(policy.dim(), 0.7, rng);
    const int h_ref = 60;
    const ParamVector grad_ref = oracle::exact_grad_jh_dp(mdp, policy, theta, h_ref);
    const Matrix hess_ref = oracle::exact_hessian_jh(mdp, policy, theta, h_ref);
    double worst_margin = std::numeric_limits<double>::infinity();
    for (int H = 1; H <= 55; ++H) {
      const EstimatorConstants c =
          estimator_constants(*pb.M_g, pb.M_h, pb.l_2, mdp.r_max(), mdp.discount(), H);
      const double decay = std::pow(mdp.discount(), H);
      const double grad_gap =
          (oracle::exact_grad_jh_dp(mdp, policy, theta, H) - grad_ref).norm();
      if (grad_gap > c.D_g * decay) {
        return std::make_pair(false, "gradient bound violated at H=" + std::to_string(H));
      }
      const Matrix hess_gap = oracle::exact_hessian_jh(mdp, policy, theta, H) - hess_ref;
      const double hess_norm = hess_gap.operatorNorm();
      if (hess_norm > c.D_h * decay) {
        return std::make_pair(false, "hessian bound violated at H=" + std::to_string(H));
      }
      worst_margin = std::min(worst_margin,
                              std::min(c.D_g * decay - grad_gap, c.D_h * decay - hess_norm));
    }
    return std::make_pair(true, "bounds hold for H in [1,55], min margin " + fmt(worst_margin));
  });
}

// ---------------------------------------------------------------------------
// A5: normalized-step exactness and the lookahead identity over full runs.

CheckResult check_normalized_steps() {
  return timed("A5", "normalized steps have length gamma_t; lookahead identity holds", [] {
    const SynthProblem problem = SynthProblem::quadratic(1.0, 6, 1.0, 1.0);
    SynthModel model(problem);
    double worst_step = 0.0, worst_look = 0.0;
    for (Algorithm alg : {Algorithm::kNMpg, Algorithm::kNPgIgt, Algorithm::kNHarpg}) {
      ScheduleSpec spec;
      spec.kind = alg;
      spec.T = 1000;
      spec.discount = 0.9;
      spec.M_g = 1.0;
      spec.mu_F = std::sqrt(2.0);
      ParamVector theta0 = ParamVector::Zero(6);
      theta0(0) = 1.0;
      const RunResult res = run_optimizer(alg, model, spec, theta0, 1, 31, 0);
      if (res.aborted) return std::make_pair(false, "run aborted: " + res.abort_reason);
      for (const IterationRecord& r : res.records) {
        if (r.t == 0) continue;
        if (r.dir_norm > 0.0)
          worst_step = std::max(worst_step, std::abs(r.step_len / r.gamma_t - 1.0));
        if (alg == Algorithm::kNPgIgt && std::isfinite(r.lookahead_rel_err))
          worst_look = std::max(worst_look, r.lookahead_rel_err);
      }
    }
    const bool pass = worst_step <= 1e-12 && worst_look <= 1e-12;
    return std::make_pair(pass, "max |step/gamma - 1| " + fmt(worst_step) +
                                    ", max lookahead residual " + fmt(worst_look) +
                                    " (tol 1e-12)");
  });
}

// ---------------------------------------------------------------------------
// A6: with noiseless oracles HARPG's direction equals the exact gradient.

CheckResult check_exact_oracle_degeneracy() {
  return timed("A6", "noiseless HARPG direction equals grad J(theta_t)", [] {
    const SynthProblem problem = SynthProblem::quadratic(1.3, 8, 0.0, 0.0);
    SynthModel model(problem);
    ScheduleSpec spec;
    spec.kind = Algorithm::kHarpg;
    spec.T = 101;
    spec.discount = 0.9;
    spec.gamma0 = 0.05;
    ParamVector theta0(8);
    for (int i = 0; i < 8; ++i) theta0(i) = (i % 2 == 0) ? 0.5 : -0.3;
    double worst = 0.0;
    const RunResult res = run_optimizer(
        Algorithm::kHarpg, model, spec, theta0, 1, 5, 0,
        [&](const ParamVector& theta, const ParamVector& d, const IterationRecord&) {
          worst = std::max(worst, rel_err(d, problem.grad(theta)));
        });
    if (res.aborted) return std::make_pair(false, "run aborted: " + res.abort_reason);
    return std::make_pair(worst < 1e-10,
                          "max rel err " + fmt(worst) + " over 101 iterations (tol 1e-10)");
  });
}

// ---------------------------------------------------------------------------
// A7: convergence-rate slopes and final ordering on the quadratic testbed.

struct RateRun {
  std::vector<double> subopt;
};

CheckResult check_rate_slopes(unsigned workers) {
  return timed("A7", "log-log rate slopes and final ordering on Quadratic(mu=1)", [workers] {
    const SynthProblem problem = SynthProblem::quadratic(1.0, 10, 1.0, 1.0);
    const int T = 100000;
    const std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
    const std::vector<Algorithm> algs = {Algorithm::kNHarpg, Algorithm::kNPgIgt,
                                         Algorithm::kNMpg};
    std::map<Algorithm, std::vector<RateRun>> runs;
    for (Algorithm a : algs) runs[a].resize(seeds.size());

    std::vector<std::function<void()>> jobs;
    for (Algorithm alg : algs) {
      for (std::size_t si = 0; si < seeds.size(); ++si) {
        jobs.push_back([&, alg, si] {
          SynthModel model(problem);
          ScheduleSpec spec;
          spec.kind = alg;
          spec.T = T;
          spec.discount = 0.9;
          spec.M_g = 1.0;
          spec.mu_F = std::sqrt(2.0);  // mu = mu_F^2 / (2 M_g^2) = 1
          ParamVector theta0 = ParamVector::Zero(10);
          theta0(0) = 1.0;
          const RunResult res = run_optimizer(alg, model, spec, theta0, 1, seeds[si], 0);
          auto& run = runs[alg][si];
          run.subopt.reserve(res.records.size());
          for (const IterationRecord& r : res.records)
            run.subopt.push_back(problem.j_star() - r.mean_return);
        });
      }
    }
    parallel_run(resolve_workers(workers), std::move(jobs));

    const std::map<Algorithm, double> required = {{Algorithm::kNHarpg, -0.40},
                                                  {Algorithm::kNPgIgt, -0.30},
                                                  {Algorithm::kNMpg, -0.25}};
    std::map<Algorithm, double> slope, final_med;
    std::string detail;
    for (Algorithm alg : algs) {
      std::vector<std::vector<double>> per_seed;
      std::vector<double> finals;
      for (const RateRun& r : runs[alg]) {
        per_seed.push_back(r.subopt);
        finals.push_back(r.subopt.back());
      }
      slope[alg] = fit_rate(per_seed, 1000, T);
      std::sort(finals.begin(), finals.end());
      final_med[alg] = finals[finals.size() / 2];
      detail += std::string(algorithm_name(alg)) + ": slope " + fmt(slope[alg]) + " (need <= " +
                fmt(required.at(alg)) + "), final " + fmt(final_med[alg]) + "; ";
    }
    bool pass = true;
    for (Algorithm alg : algs) pass = pass && slope[alg] <= required.at(alg);
    const bool order =
        final_med[Algorithm::kNHarpg] <= 1.5 * final_med[Algorithm::kNPgIgt] &&
        final_med[Algorithm::kNPgIgt] <= 1.5 * final_med[Algorithm::kNMpg];
    pass = pass && order;
    detail += order ? "ordering holds (1.5x slack)" : "ordering violated";
    return std::make_pair(pass, detail);
  });
}

// ---------------------------------------------------------------------------
// A8: learning smoke test on the point-mass task.

CheckResult check_rl_smoke(unsigned workers) {
  return timed("A8", "every algorithm improves on the point-mass task", [workers] {
    const PointMassEnv env = PointMassEnv::standard(2);
    const GaussianLinearPolicy policy(FeatureMap::bounded_tanh(2), 0.5, 2, env.action_clip());
    const double discount = 0.9;
    const int T = 500, H = 100, batch = 20;
    const std::vector<std::uint64_t> seeds = {11, 12, 13, 14, 15};
    const std::vector<Algorithm> algs = {Algorithm::kVanillaPg, Algorithm::kNMpg,
                                         Algorithm::kNPgIgt, Algorithm::kHarpg,
                                         Algorithm::kNHarpg};
    // gamma_0 pinned per algorithm from the pilot sweep (see configs/point_mass.json).
    const std::map<Algorithm, double> gamma0 = {{Algorithm::kVanillaPg, 1e-4},
                                                {Algorithm::kNMpg, 0.03},
                                                {Algorithm::kNPgIgt, 0.03},
                                                {Algorithm::kHarpg, 1e-4},
                                                {Algorithm::kNHarpg, 0.03}};
    std::map<Algorithm, std::vector<std::vector<double>>> returns;
    for (Algorithm a : algs) returns[a].resize(seeds.size());

    std::vector<std::function<void()>> jobs;
    for (Algorithm alg : algs) {
      for (std::size_t si = 0; si < seeds.size(); ++si) {
        jobs.push_back([&, alg, si] {
          TrajectoryModel<PointMassEnv, GaussianLinearPolicy> model(env, policy, discount, H);
          ScheduleSpec spec;
          spec.kind = alg;
          spec.T = T;
          spec.discount = discount;
          spec.gamma0 = gamma0.at(alg);
          const RunResult res = run_optimizer(alg, model, spec,
                                              ParamVector::Zero(policy.dim()), batch,
                                              seeds[si], 0);
          auto& trace = returns[alg][si];
          for (const IterationRecord& r : res.records) trace.push_back(r.mean_return);
        });
      }
    }
    parallel_run(resolve_workers(workers), std::move(jobs));

    const int k = T / 10;
    auto pooled_median = [&](Algorithm alg, bool tail) {
      std::vector<double> pool;
      for (const auto& trace : returns.at(alg)) {
        if (static_cast<int>(trace.size()) < T) continue;  // aborted run: treated as empty
        for (int i = 0; i < k; ++i) pool.push_back(tail ? trace[T - k + i] : trace[i]);
      }
      if (pool.empty()) return std::numeric_limits<double>::quiet_NaN();
      return nearest_rank_quantile(pool, 0.5);
    };

    const double van_improve = pooled_median(Algorithm::kVanillaPg, true) -
                               pooled_median(Algorithm::kVanillaPg, false);
    if (!(van_improve > 0.0))
      return std::make_pair(false, "Vanilla-PG did not improve (range " + fmt(van_improve) + ")");
    bool pass = true;
    std::string detail = "vanilla range " + fmt(van_improve) + "; ";
    for (Algorithm alg : algs) {
      const double improve = pooled_median(alg, true) - pooled_median(alg, false);
      const bool ok = improve >= 0.2 * van_improve;
      pass = pass && ok;
      detail += std::string(algorithm_name(alg)) + " +" + fmt(improve) + (ok ? " ok; " : " FAIL; ");
    }
    return std::make_pair(pass, detail);
  });
}

// ---------------------------------------------------------------------------
// A9: byte-identical CSVs across invocations and worker counts.

CheckResult check_determinism() {
  return timed("A9", "identical configs give byte-identical CSVs under parallel workers", [] {
    nlohmann::json j;
    j["env"] = {{"type", "point_mass"}, {"dim", 2}, {"discount", 0.99}};
    j["policy"] = {{"type", "gaussian_linear"}, {"features", "tanh"}, {"sigma", 0.5}};
    j["algorithms"] = {"n_pg_igt", "n_harpg"};
    j["schedule"] = {{"M_g", 1.0}, {"mu_F", 1.0}};
    j["sweep"] = {{"gamma0", {0.05, 0.2}}};
    j["run"] = {{"T", 30}, {"batch_size", 2}, {"seeds", {7, 8}}, {"horizon", 25}};

    const auto base = std::filesystem::temp_directory_path() / "pg_determinism_check";
    std::filesystem::remove_all(base);
    auto run_into = [&](const std::string& sub, unsigned workers) {
      nlohmann::json jj = j;
      jj["run"]["out_dir"] = (base / sub).string();
      ExperimentConfig cfg = parse_config_json(jj);
      return run_experiment(cfg, /*sweep=*/true, workers);
    };
    const ExperimentOutcome a = run_into("a", 4);
    const ExperimentOutcome b = run_into("b", 1);
    if (a.n_failed || b.n_failed) return std::make_pair(false, std::string("runs failed"));

    auto slurp = [](const std::filesystem::path& p) {
      std::ifstream in(p, std::ios::binary);
      std::ostringstream ss;
      ss << in.rdbuf();
      return ss.str();
    };
    int compared = 0;
    for (const RunOutcome& ro : a.runs) {
      const std::string fa = slurp(base / "a" / ro.file);
      const std::string fb = slurp(base / "b" / ro.file);
      if (fa.empty() || fa != fb)
        return std::make_pair(false, "CSV bytes differ for " + ro.file);
      ++compared;
    }
    std::filesystem::remove_all(base);
    return std::make_pair(true, std::to_string(compared) + " CSVs byte-identical across " +
                                    "workers=4 and workers=1 invocations");
  });
}

// ---------------------------------------------------------------------------
// A10: empirical gradient-noise second moment within the sigma_g^2 bound.

CheckResult check_variance_bound() {
  return timed("A10", "empirical E|g - grad J_H|^2 within sigma_g^2", [] {
    RngStream rng(1234321);
    std::string detail;
    bool pass = true;
    for (const FiniteMdp& mdp :
         {FiniteMdp::two_state_chain(0.9), FiniteMdp::five_state_walk(0.9)}) {
      const SoftmaxTabularPolicy policy(mdp.n_states(), mdp.n_actions());
      const PolicyBounds pb = policy_bounds(policy);
      const int H = 30;
      const ParamVector theta = random_theta(policy.dim(), 0.5, rng);
      const ParamVector grad = oracle::exact_grad_jh_dp(mdp, policy, theta, H);
      const int n = 10000;
      double sum = 0.0, sum_sq = 0.0;
      for (int i = 0; i < n; ++i) {
        const auto traj = sample_trajectory(mdp, policy, theta, H, rng);
        const double dev =
            (grad_estimate(traj, policy, theta, mdp.discount()) - grad).squaredNorm();
        sum += dev;
        sum_sq += dev * dev;
      }
      const double mean = sum / n;
      const double se = std::sqrt(std::max(0.0, sum_sq / n - mean * mean) / n);
      const double c = *pb.M_g * mdp.r_max();
      const double bound = c * c / std::pow(1.0 - mdp.discount(), 3);
      const bool ok = mean <= bound + 3.0 * se;
      pass = pass && ok;
      detail += "mean " + fmt(mean) + " vs bound " + fmt(bound) + (ok ? " ok; " : " FAIL; ");
    }
    return std::make_pair(pass, detail);
  });
}

// ---------------------------------------------------------------------------
// Schedule suite: positivity, monotone momentum, recursion inequality, purity.

CheckResult check_schedule_invariants() {
  return timed("S1", "gamma_t > 0, eta_t in (0,1], eta non-increasing for all kinds", [] {
    const int T = 5000;
    for (Algorithm alg : {Algorithm::kVanillaPg, Algorithm::kNMpg, Algorithm::kNPgIgt,
                          Algorithm::kNPgIgtFosp, Algorithm::kHarpg, Algorithm::kNHarpg}) {
      for (ScheduleVariant variant : {ScheduleVariant::kMain, ScheduleVariant::kDetailed}) {
        ScheduleSpec spec;
        spec.kind = alg;
        spec.variant = variant;
        spec.T = T;
        spec.discount = 0.9;
        spec.M_g = 1.5;
        spec.mu_F = 0.7;
        if (alg == Algorithm::kVanillaPg || alg == Algorithm::kHarpg) spec.gamma0 = 0.3;
        double prev_eta = 1.0;
        for (int t = 0; t < T; ++t) {
          const double g = step_size(spec, t);
          const double e = momentum(spec, t);
          if (!(g > 0.0)) return std::make_pair(false, std::string("nonpositive step size"));
          if (!(e > 0.0 && e <= 1.0)) return std::make_pair(false, std::string("eta outside (0,1]"));
          if (t == 0 && e != 1.0) return std::make_pair(false, std::string("eta_0 != 1"));
          if (e > prev_eta + 1e-15) return std::make_pair(false, std::string("eta increased"));
          if (g != step_size(spec, t) || e != momentum(spec, t))
            return std::make_pair(false, std::string("schedule not pure"));
          prev_eta = e;
        }
        if (horizon(spec) < 1) return std::make_pair(false, std::string("horizon < 1"));
      }
    }
    return std::make_pair(true, std::string("all kinds and variants for T=5000"));
  });
}

CheckResult check_schedule_recursion_relation() {
  return timed("S2", "eta_t (1 - eta_{t+1}) <= eta_{t+1} for q in {2/3, 4/5, 1}", [] {
    for (double q : {2.0 / 3.0, 4.0 / 5.0, 1.0}) {
      double eta_t = 1.0;  // t = 0
      for (int t = 0; t < 1000000; ++t) {
        const double eta_next = std::pow(2.0 / (t + 3.0), q);
        if (eta_t * (1.0 - eta_next) > eta_next)
          return std::make_pair(false, "violated at t=" + std::to_string(t) + ", q=" + fmt(q));
        eta_t = eta_next;
      }
    }
    return std::make_pair(true, std::string("holds up to t = 10^6 for all three exponents"));
  });
}

// ---------------------------------------------------------------------------
// Oracle suite extra: DP and enumeration agree.

CheckResult check_dp_vs_enumeration() {
  return timed("O1", "DP and enumeration gradients agree on bundled MDPs", [] {
    RngStream rng(5150);
    double worst = 0.0;
    for (const FiniteMdp& mdp :
         {FiniteMdp::two_state_chain(0.9), FiniteMdp::five_state_walk(0.9)}) {
      const SoftmaxTabularPolicy policy(mdp.n_states(), mdp.n_actions());
      for (int trial = 0; trial < 5; ++trial) {
        const ParamVector theta = random_theta(policy.dim(), 0.6, rng);
        const ParamVector a = oracle::exact_grad_jh_dp(mdp, policy, theta, 3);
        const ParamVector b = oracle::exact_grad_jh_enum(mdp, policy, theta, 3);
        worst = std::max(worst, rel_err(a, b));
        const double ja = oracle::exact_jh(mdp, policy, theta, 3);
        const double jb = oracle::enumerate_expectation(
            mdp, policy, theta, 3, [&](const oracle::FiniteTrajectory& traj, double) {
              double j = 0.0, scale = 1.0;
              for (int t = 0; t < traj.horizon(); ++t) {
                j += scale * traj.rewards(t);
                scale *= mdp.discount();
              }
              return j;
            });
        worst = std::max(worst, std::abs(ja - jb) / std::max(std::abs(jb), 1e-12));
      }
    }
    return std::make_pair(worst < 1e-11, "max rel err " + fmt(worst) + " (tol 1e-11)");
  });
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"estimators", "schedules", "optimizers", "oracle", "rates", "determinism",
          "acceptance"};
}

std::vector<CheckResult> run_suite(const std::string& suite, unsigned workers) {
  std::vector<CheckResult> out;
  if (suite == "estimators") {
    out.push_back(check_grad_unbiased());
    out.push_back(check_hvp_identity());
    out.push_back(check_harpg_correction());
    out.push_back(check_variance_bound());
  } else if (suite == "schedules") {
    out.push_back(check_schedule_invariants());
    out.push_back(check_schedule_recursion_relation());
  } else if (suite == "optimizers") {
    out.push_back(check_normalized_steps());
    out.push_back(check_exact_oracle_degeneracy());
  } else if (suite == "oracle") {
    out.push_back(check_truncation_bounds());
    out.push_back(check_dp_vs_enumeration());
  } else if (suite == "rates") {
    out.push_back(check_rate_slopes(workers));
    out.push_back(check_rl_smoke(workers));
  } else if (suite == "determinism") {
    out.push_back(check_determinism());
  } else if (suite == "acceptance") {
    out.push_back(check_grad_unbiased());
    out.push_back(check_hvp_identity());
    out.push_back(check_harpg_correction());
    out.push_back(check_truncation_bounds());
    out.push_back(check_normalized_steps());
    out.push_back(check_exact_oracle_degeneracy());
    out.push_back(check_rate_slopes(workers));
    out.push_back(check_rl_smoke(workers));
    out.push_back(check_determinism());
    out.push_back(check_variance_bound());
  } else {
    throw std::invalid_argument("unknown suite '" + suite + "'");
  }
  return out;
}

bool all_passed(const std::vector<CheckResult>& results) {
  for (const CheckResult& r : results)
    if (!r.pass) return false;
  return true;
}

void print_report(std::ostream& os, const std::vector<CheckResult>& results) {
  for (const CheckResult& r : results) {
    os << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << " " << r.name << " — " << r.detail << " ("
       << fmt(r.seconds) << "s)\n";
  }
}

std::string report_json(const std::vector<CheckResult>& results) {
  nlohmann::json j = nlohmann::json::array();
  for (const CheckResult& r : results) {
    j.push_back({{"id", r.id},
                 {"name", r.name},
                 {"pass", r.pass},
                 {"detail", r.detail},
                 {"seconds", r.seconds}});
  }
  return j.dump(2);
}

}  // namespace pg::checks
