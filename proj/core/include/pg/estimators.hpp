#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pg/rng.hpp"
#include "pg/types.hpp"

namespace pg {

/// Length-H rollout. states[t], actions[t], rewards[t] describe step t;
/// all three sequences share one horizon H >= 1.
template <class S, class A>
struct Trajectory {
  std::vector<S> states;
  std::vector<A> actions;
  Eigen::VectorXd rewards;

  int horizon() const { return static_cast<int>(states.size()); }
};

template <class Env, class Policy>
using TrajectoryOf = Trajectory<typename Env::State, typename Env::Action>;

/// Roll out H steps of env under pi_theta.
template <class Env, class Policy>
TrajectoryOf<Env, Policy> sample_trajectory(const Env& env, const Policy& policy,
                                            const ParamVector& theta, int H, RngStream& rng) {
  if (H < 1) throw std::invalid_argument("sample_trajectory: H must be >= 1");
  TrajectoryOf<Env, Policy> traj;
  traj.states.reserve(H);
  traj.actions.reserve(H);
  traj.rewards.resize(H);
  auto s = env.reset(rng);
  for (int t = 0; t < H; ++t) {
    auto a = policy.sample_action(theta, s, rng);
    auto [next, r] = env.step(s, a, rng);
    traj.states.push_back(s);
    traj.actions.push_back(std::move(a));
    traj.rewards(t) = r;
    s = std::move(next);
  }
  return traj;
}

/// Discounted rewards-to-go c_t = sum_{h>=t} gamma^h r_h (absolute
/// discounting, i.e. gamma^h not gamma^{h-t}), one forward pass for the
/// discount powers and one backward accumulation.
inline Eigen::VectorXd rewards_to_go(const Eigen::VectorXd& rewards, double discount) {
  const int H = static_cast<int>(rewards.size());
  Eigen::VectorXd c(H);
  double scale = 1.0;
  for (int t = 0; t < H; ++t) {
    c(t) = scale * rewards(t);
    scale *= discount;
  }
  double acc = 0.0;
  for (int t = H - 1; t >= 0; --t) {
    acc += c(t);
    c(t) = acc;
  }
  return c;
}

/// Single-trajectory policy-gradient estimate
///   g(tau, theta) = sum_t (sum_{h>=t} gamma^h r_h) score(theta, s_t, a_t),
/// an unbiased estimate of grad J_H(theta) when tau ~ p(.|pi_theta).
template <class Policy, class Traj>
ParamVector grad_estimate(const Traj& traj, const Policy& policy, const ParamVector& theta,
                          double discount) {
  const Eigen::VectorXd c = rewards_to_go(traj.rewards, discount);
  ParamVector g = ParamVector::Zero(theta.size());
  for (int t = 0; t < traj.horizon(); ++t) {
    if (c(t) != 0.0) g += c(t) * policy.score(theta, traj.states[t], traj.actions[t]);
  }
  return g;
}

/// Batched gradient estimate: mean of g over n freshly sampled trajectories.
struct GradEstimate {
  ParamVector value;
  int horizon = 0;
  int n_trajectories = 0;
};

template <class Env, class Policy>
GradEstimate batch_grad_estimate(const Env& env, const Policy& policy, const ParamVector& theta,
                                 double discount, int H, int n_trajectories, RngStream& rng) {
  if (n_trajectories < 1)
    throw std::invalid_argument("batch_grad_estimate: n_trajectories must be >= 1");
  GradEstimate out;
  out.horizon = H;
  out.n_trajectories = n_trajectories;
  out.value = ParamVector::Zero(theta.size());
  for (int i = 0; i < n_trajectories; ++i) {
    const auto traj = sample_trajectory(env, policy, theta, H, rng);
    out.value += grad_estimate(traj, policy, theta, discount);
  }
  out.value /= n_trajectories;
  if (!all_finite(out.value)) throw std::runtime_error("batch_grad_estimate: non-finite value");
  return out;
}

/// grad log p(tau | pi_theta) = sum_t score(theta, s_t, a_t); the dynamics
/// factors carry no theta dependence.
template <class Policy, class Traj>
ParamVector traj_log_density_grad(const Traj& traj, const Policy& policy,
                                  const ParamVector& theta) {
  ParamVector g = ParamVector::Zero(theta.size());
  for (int t = 0; t < traj.horizon(); ++t)
    g += policy.score(theta, traj.states[t], traj.actions[t]);
  return g;
}

/// Analytic grad_theta <g(tau, theta), u>. Since g depends on theta only
/// through the per-step scores, this is sum_t c_t hess(log pi)_t u.
template <class Policy, class Traj>
ParamVector grad_inner_grad(const Traj& traj, const Policy& policy, const ParamVector& theta,
                            double discount, const ParamVector& u) {
  if (u.size() != theta.size()) throw std::invalid_argument("grad_inner_grad: u dim");
  const Eigen::VectorXd c = rewards_to_go(traj.rewards, discount);
  ParamVector out = ParamVector::Zero(theta.size());
  for (int t = 0; t < traj.horizon(); ++t) {
    if (c(t) != 0.0)
      out += c(t) * policy.score_hessian_vec(theta, traj.states[t], traj.actions[t], u);
  }
  return out;
}

/// Single-trajectory Hessian-vector product
///   B(tau, theta) u = <grad log p(tau|pi_theta), u> g(tau, theta)
///                     + grad <g(tau, theta), u>,
/// an unbiased estimate of hess J_H(theta) u, in O(H d) time.
template <class Policy, class Traj>
ParamVector hvp_estimate(const Traj& traj, const Policy& policy, const ParamVector& theta,
                         double discount, const ParamVector& u) {
  if (u.size() != theta.size()) throw std::invalid_argument("hvp_estimate: u dim");
  const Eigen::VectorXd c = rewards_to_go(traj.rewards, discount);
  ParamVector g = ParamVector::Zero(theta.size());
  ParamVector slog = ParamVector::Zero(theta.size());
  ParamVector second = ParamVector::Zero(theta.size());
  for (int t = 0; t < traj.horizon(); ++t) {
    const ParamVector sc = policy.score(theta, traj.states[t], traj.actions[t]);
    slog += sc;
    if (c(t) != 0.0) {
      g += c(t) * sc;
      second += c(t) * policy.score_hessian_vec(theta, traj.states[t], traj.actions[t], u);
    }
  }
  return slog.dot(u) * g + second;
}

/// One draw of the Hessian-aided correction v = B(tau_hat, theta_hat) *
/// (theta_t - theta_prev) with theta_hat = q theta_t + (1-q) theta_prev,
/// q ~ U[0,1] and tau_hat ~ p(.|pi_theta_hat). Unbiased for
/// grad J_H(theta_t) - grad J_H(theta_prev). q_fix pins q for tests;
/// q_out reports the drawn value.
template <class Env, class Policy>
ParamVector harpg_correction(const Env& env, const Policy& policy, const ParamVector& theta_t,
                             const ParamVector& theta_prev, double discount, int H,
                             RngStream& rng, std::optional<double> q_fix = std::nullopt,
                             double* q_out = nullptr) {
  if (theta_t.size() != theta_prev.size())
    throw std::invalid_argument("harpg_correction: theta dim mismatch");
  const double q = q_fix ? *q_fix : rng.uniform();
  if (q_out) *q_out = q;
  const ParamVector theta_hat = q * theta_t + (1.0 - q) * theta_prev;
  const ParamVector delta = theta_t - theta_prev;
  const auto traj = sample_trajectory(env, policy, theta_hat, H, rng);
  return hvp_estimate(traj, policy, theta_hat, discount, delta);
}

struct FisherEstimate {
  Matrix F;
  double mu_F = 0.0;
};

/// Monte Carlo Fisher matrix: states drawn from the discounted visitation
/// measure via a geometric(1-gamma) time index into a fresh trajectory
/// (index redrawn while it falls beyond the truncation horizon, which
/// leaves an O(gamma^H) bias), actions from pi_theta, score outer products
/// averaged. Returns the symmetric estimate and its smallest eigenvalue.
template <class Env, class Policy>
FisherEstimate fisher_estimate(const Env& env, const Policy& policy, const ParamVector& theta,
                               double discount, int H, int n_samples, RngStream& rng) {
  if (n_samples < 1) throw std::invalid_argument("fisher_estimate: n_samples must be >= 1");
  const int d = static_cast<int>(theta.size());
  Matrix f = Matrix::Zero(d, d);
  for (int i = 0; i < n_samples; ++i) {
    const auto traj = sample_trajectory(env, policy, theta, H, rng);
    std::int64_t k = rng.geometric(1.0 - discount);
    while (k >= H) k = rng.geometric(1.0 - discount);
    const auto& s = traj.states[static_cast<std::size_t>(k)];
    const auto a = policy.sample_action(theta, s, rng);
    const ParamVector sc = policy.score(theta, s, a);
    f.selfadjointView<Eigen::Lower>().rankUpdate(sc, 1.0);
  }
  f = Matrix(f.selfadjointView<Eigen::Lower>());
  f /= static_cast<double>(n_samples);
  Eigen::SelfAdjointEigenSolver<Matrix> es(f);
  return {std::move(f), es.eigenvalues().minCoeff()};
}

}  // namespace pg
