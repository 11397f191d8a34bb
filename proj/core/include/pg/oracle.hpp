#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "pg/constants.hpp"
#include "pg/envs.hpp"
#include "pg/estimators.hpp"
#include "pg/types.hpp"

namespace pg::oracle {

using FiniteTrajectory = Trajectory<int, int>;

/// Per-state action probabilities pi(a|s) as an (S x A) matrix.
template <class Policy>
Matrix policy_matrix(const FiniteMdp& mdp, const Policy& policy, const ParamVector& theta) {
  Matrix pi(mdp.n_states(), mdp.n_actions());
  for (int s = 0; s < mdp.n_states(); ++s) pi.row(s) = policy.action_probs(theta, s).transpose();
  return pi;
}

/// State-to-state kernel P^pi(s' | s) under the given action probabilities.
inline Matrix state_kernel(const FiniteMdp& mdp, const Matrix& pi) {
  Matrix k = Matrix::Zero(mdp.n_states(), mdp.n_states());
  for (int s = 0; s < mdp.n_states(); ++s)
    for (int a = 0; a < mdp.n_actions(); ++a)
      k.row(s) += pi(s, a) * mdp.transition_row(s, a).transpose();
  return k;
}

/// Forward state distributions d_t for t = 0..H-1 (d_0 = rho).
inline std::vector<Eigen::VectorXd> state_distributions(const FiniteMdp& mdp, const Matrix& pi,
                                                        int H) {
  std::vector<Eigen::VectorXd> d(H);
  d[0] = mdp.init_dist();
  const Matrix k = state_kernel(mdp, pi);
  for (int t = 1; t < H; ++t) d[t] = k.transpose() * d[t - 1];
  return d;
}

/// k-step truncated action values Q_k for k = 1..H; q[k-1] is (S x A).
inline std::vector<Matrix> truncated_q(const FiniteMdp& mdp, const Matrix& pi, int H) {
  std::vector<Matrix> q(H);
  q[0] = mdp.reward_table();
  for (int k = 1; k < H; ++k) {
    Eigen::VectorXd v(mdp.n_states());
    for (int s = 0; s < mdp.n_states(); ++s) v(s) = pi.row(s).dot(q[k - 1].row(s));
    q[k] = mdp.reward_table();
    for (int s = 0; s < mdp.n_states(); ++s)
      for (int a = 0; a < mdp.n_actions(); ++a)
        q[k](s, a) += mdp.discount() * mdp.transition_row(s, a).dot(v);
  }
  return q;
}

/// Exact truncated return J_H(theta) by dynamic programming, O(H S^2 A).
template <class Policy>
double exact_jh(const FiniteMdp& mdp, const Policy& policy, const ParamVector& theta, int H) {
  if (H < 1) throw std::invalid_argument("exact_jh: H must be >= 1");
  if (!all_finite(theta)) throw std::invalid_argument("exact_jh: theta must be finite");
  const Matrix pi = policy_matrix(mdp, policy, theta);
  const auto d = state_distributions(mdp, pi, H);
  double j = 0.0;
  double scale = 1.0;
  for (int t = 0; t < H; ++t) {
    double step = 0.0;
    for (int s = 0; s < mdp.n_states(); ++s)
      step += d[t](s) * pi.row(s).dot(mdp.reward_table().row(s));
    j += scale * step;
    scale *= mdp.discount();
  }
  return j;
}

/// Exact grad J_H(theta) by the likelihood-ratio recursion
///   grad J_H = sum_t gamma^t sum_{s,a} d_t(s) pi(a|s) Q_{H-t}(s,a) score(s,a).
template <class Policy>
ParamVector exact_grad_jh_dp(const FiniteMdp& mdp, const Policy& policy,
                             const ParamVector& theta, int H) {
  if (H < 1) throw std::invalid_argument("exact_grad_jh: H must be >= 1");
  if (!all_finite(theta)) throw std::invalid_argument("exact_grad_jh: theta must be finite");
  const Matrix pi = policy_matrix(mdp, policy, theta);
  const auto d = state_distributions(mdp, pi, H);
  const auto q = truncated_q(mdp, pi, H);
  ParamVector g = ParamVector::Zero(theta.size());
  double scale = 1.0;
  for (int t = 0; t < H; ++t) {
    const Matrix& qk = q[H - 1 - t];  // H - t steps to go
    for (int s = 0; s < mdp.n_states(); ++s) {
      if (d[t](s) == 0.0) continue;
      for (int a = 0; a < mdp.n_actions(); ++a) {
        const double w = scale * d[t](s) * pi(s, a) * qk(s, a);
        if (w != 0.0) g += w * policy.score(theta, s, a);
      }
    }
    scale *= mdp.discount();
  }
  return g;
}

/// Probability-weighted expectation of fn(trajectory) over every H-step
/// trajectory of the MDP under pi_theta (zero-probability branches pruned).
/// fn must return double or an Eigen vector. Throws when the worst-case
/// enumeration count (S A)^H exceeds 10^7.
template <class Policy, class Fn>
auto enumerate_expectation(const FiniteMdp& mdp, const Policy& policy, const ParamVector& theta,
                           int H, Fn&& fn) {
  using R = std::invoke_result_t<Fn&, const FiniteTrajectory&, double>;
  const double worst = std::pow(static_cast<double>(mdp.n_states()) * mdp.n_actions(), H);
  if (worst > 1e7) throw std::invalid_argument("enumerate_expectation: state-action space too large");
  const Matrix pi = policy_matrix(mdp, policy, theta);

  FiniteTrajectory traj;
  traj.states.assign(H, 0);
  traj.actions.assign(H, 0);
  traj.rewards.resize(H);

  R acc{};
  bool first = true;
  auto add = [&](const R& value, double w) {
    if constexpr (std::is_same_v<R, double>) {
      acc += w * value;
      (void)first;
    } else {
      if (first) {
        acc = w * value;
        first = false;
      } else {
        acc += w * value;
      }
    }
  };

  auto recurse = [&](auto&& self, int t, int s, double prob) -> void {
    if (t == H) {
      add(fn(traj, prob), prob);
      return;
    }
    for (int a = 0; a < mdp.n_actions(); ++a) {
      const double pa = pi(s, a);
      if (pa == 0.0) continue;
      traj.states[t] = s;
      traj.actions[t] = a;
      traj.rewards(t) = mdp.reward(s, a);
      if (t + 1 == H) {
        self(self, t + 1, s, prob * pa);
      } else {
        const Eigen::VectorXd row = mdp.transition_row(s, a);
        for (int sp = 0; sp < mdp.n_states(); ++sp) {
          if (row(sp) == 0.0) continue;
          self(self, t + 1, sp, prob * pa * row(sp));
        }
      }
    }
  };
  for (int s0 = 0; s0 < mdp.n_states(); ++s0) {
    const double p0 = mdp.init_dist()(s0);
    if (p0 == 0.0) continue;
    recurse(recurse, 0, s0, p0);
  }
  if constexpr (!std::is_same_v<R, double>) {
    if (first) throw std::logic_error("enumerate_expectation: empty support");
  }
  return acc;
}

/// Exact grad J_H by exhaustive enumeration: E[g(tau, theta)].
template <class Policy>
ParamVector exact_grad_jh_enum(const FiniteMdp& mdp, const Policy& policy,
                               const ParamVector& theta, int H) {
  return enumerate_expectation(mdp, policy, theta, H,
                               [&](const FiniteTrajectory& traj, double) {
                                 return grad_estimate(traj, policy, theta, mdp.discount());
                               });
}

/// Exact grad J_H: enumeration for small problems (H <= 4 and (SA)^H <= 1e7),
/// DP recursion otherwise. The two paths agree wherever both run.
template <class Policy>
ParamVector exact_grad_jh(const FiniteMdp& mdp, const Policy& policy, const ParamVector& theta,
                          int H) {
  const double worst = std::pow(static_cast<double>(mdp.n_states()) * mdp.n_actions(), H);
  if (H <= 4 && worst <= 1e7) return exact_grad_jh_enum(mdp, policy, theta, H);
  return exact_grad_jh_dp(mdp, policy, theta, H);
}

/// hess J_H(theta) u by central differencing of the exact DP gradient with
/// step 1e-5 (1 + |theta|); truncation error O(h^2).
template <class Policy>
ParamVector exact_hvp_jh(const FiniteMdp& mdp, const Policy& policy, const ParamVector& theta,
                         int H, const ParamVector& u) {
  if (u.size() != theta.size()) throw std::invalid_argument("exact_hvp_jh: u dim");
  const double un = u.norm();
  if (un == 0.0) return ParamVector::Zero(theta.size());
  const double h = 1e-5 * (1.0 + theta.norm());
  const ParamVector dir = u / un;
  const ParamVector gp = exact_grad_jh_dp(mdp, policy, theta + h * dir, H);
  const ParamVector gm = exact_grad_jh_dp(mdp, policy, theta - h * dir, H);
  return (gp - gm) * (un / (2.0 * h));
}

/// Full hess J_H(theta) by column-wise central differences, symmetrized.
template <class Policy>
Matrix exact_hessian_jh(const FiniteMdp& mdp, const Policy& policy, const ParamVector& theta,
                        int H) {
  const int d = static_cast<int>(theta.size());
  Matrix hess(d, d);
  for (int i = 0; i < d; ++i)
    hess.col(i) = exact_hvp_jh(mdp, policy, theta, H, ParamVector::Unit(d, i));
  return 0.5 * (hess + hess.transpose());
}

struct QvaTables {
  Matrix Q;          // (S x A)
  Eigen::VectorXd V; // (S)
  Matrix A;          // (S x A)
};

/// Infinite-horizon policy evaluation by direct linear solve of
/// (I - gamma P^pi) V = r^pi; Q and the advantage follow.
template <class Policy>
QvaTables exact_qva(const FiniteMdp& mdp, const Policy& policy, const ParamVector& theta) {
  const Matrix pi = policy_matrix(mdp, policy, theta);
  const Matrix k = state_kernel(mdp, pi);
  Eigen::VectorXd r_pi(mdp.n_states());
  for (int s = 0; s < mdp.n_states(); ++s) r_pi(s) = pi.row(s).dot(mdp.reward_table().row(s));
  const Matrix lhs = Matrix::Identity(mdp.n_states(), mdp.n_states()) - mdp.discount() * k;
  QvaTables out;
  out.V = lhs.partialPivLu().solve(r_pi);
  out.Q = mdp.reward_table();
  for (int s = 0; s < mdp.n_states(); ++s)
    for (int a = 0; a < mdp.n_actions(); ++a)
      out.Q(s, a) += mdp.discount() * mdp.transition_row(s, a).dot(out.V);
  out.A = out.Q;
  out.A.colwise() -= out.V;
  return out;
}

/// Infinite-horizon state values of the policy given by probability matrix
/// pi, by direct solve of (I - gamma P^pi) V = r^pi.
inline Eigen::VectorXd policy_value(const FiniteMdp& mdp, const Matrix& pi) {
  const Matrix k = state_kernel(mdp, pi);
  Eigen::VectorXd r_pi(mdp.n_states());
  for (int s = 0; s < mdp.n_states(); ++s) r_pi(s) = pi.row(s).dot(mdp.reward_table().row(s));
  const Matrix lhs = Matrix::Identity(mdp.n_states(), mdp.n_states()) - mdp.discount() * k;
  return lhs.partialPivLu().solve(r_pi);
}

/// Discounted state visitation d_rho^pi = (1-gamma) (I - gamma P^pi^T)^{-1} rho.
inline Eigen::VectorXd discounted_visitation(const FiniteMdp& mdp, const Matrix& pi) {
  const Matrix k = state_kernel(mdp, pi);
  const Matrix lhs =
      Matrix::Identity(mdp.n_states(), mdp.n_states()) - mdp.discount() * k.transpose();
  return (1.0 - mdp.discount()) * lhs.partialPivLu().solve(mdp.init_dist());
}

struct ExactFisher {
  Matrix F;
  double mu_F = 0.0;
};

/// Exact Fisher matrix: visitation-weighted expectation of score outer
/// products. mu_F is the smallest eigenvalue, reported but never asserted
/// positive (softmax degenerates toward deterministic policies).
template <class Policy>
ExactFisher exact_fisher(const FiniteMdp& mdp, const Policy& policy, const ParamVector& theta) {
  const Matrix pi = policy_matrix(mdp, policy, theta);
  const Eigen::VectorXd d = discounted_visitation(mdp, pi);
  const int dim = static_cast<int>(theta.size());
  Matrix f = Matrix::Zero(dim, dim);
  for (int s = 0; s < mdp.n_states(); ++s) {
    if (d(s) == 0.0) continue;
    for (int a = 0; a < mdp.n_actions(); ++a) {
      const double w = d(s) * pi(s, a);
      if (w == 0.0) continue;
      const ParamVector sc = policy.score(theta, s, a);
      f.selfadjointView<Eigen::Lower>().rankUpdate(sc, w);
    }
  }
  f = Matrix(f.selfadjointView<Eigen::Lower>());
  Eigen::SelfAdjointEigenSolver<Matrix> es(f);
  return {std::move(f), es.eigenvalues().minCoeff()};
}

/// Greedy optimal policy from value iteration; ties break toward the lowest
/// action index.
std::vector<int> optimal_policy(const FiniteMdp& mdp);

inline Matrix deterministic_policy_matrix(const FiniteMdp& mdp, const std::vector<int>& actions) {
  Matrix pi = Matrix::Zero(mdp.n_states(), mdp.n_actions());
  for (int s = 0; s < mdp.n_states(); ++s) pi(s, actions[s]) = 1.0;
  return pi;
}

/// Horizon H_ref with D_g gamma^{H_ref} < tol, for the given score bound.
int reference_horizon(const FiniteMdp& mdp, double M_g, double tol = 1e-8);

/// Empirical transfer error of Assumption-4 form:
///   E_{s ~ d*, a ~ pi*}[(A^{pi_theta}(s,a) - (1-gamma) w*^T score_theta(s,a))^2]
/// with w* = pinv(F_rho(theta)) grad J(theta). grad J uses the H_ref proxy
/// grad J_{H_ref} (documented O(gamma^{H_ref}) bias); the pseudo-inverse
/// drops singular values below 1e-10 sigma_max.
template <class Policy>
double transfer_error(const FiniteMdp& mdp, const Policy& policy, const ParamVector& theta,
                      double score_bound = std::numbers::sqrt2, int h_ref = -1) {
  if (h_ref < 1) h_ref = reference_horizon(mdp, score_bound);
  const std::vector<int> astar = optimal_policy(mdp);
  const Matrix pistar = deterministic_policy_matrix(mdp, astar);
  const Eigen::VectorXd dstar = discounted_visitation(mdp, pistar);
  const QvaTables qva = exact_qva(mdp, policy, theta);
  const ExactFisher fisher = exact_fisher(mdp, policy, theta);
  const ParamVector grad = exact_grad_jh_dp(mdp, policy, theta, h_ref);

  Eigen::BDCSVD<Matrix> svd(fisher.F, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-10);
  const ParamVector w_star = svd.solve(grad);

  double err = 0.0;
  const double om = 1.0 - mdp.discount();
  for (int s = 0; s < mdp.n_states(); ++s) {
    if (dstar(s) == 0.0) continue;
    const int a = astar[s];
    const double resid = qva.A(s, a) - om * w_star.dot(policy.score(theta, s, a));
    err += dstar(s) * resid * resid;
  }
  return err;
}

/// Everything the exact oracle knows about one (mdp, policy, theta, H).
struct ExactEval {
  double J_H = 0.0;
  ParamVector grad;
  Matrix Q;
  Eigen::VectorXd V;
  Matrix A;
  Eigen::VectorXd visitation;
};

template <class Policy>
ExactEval exact_eval(const FiniteMdp& mdp, const Policy& policy, const ParamVector& theta,
                     int H) {
  ExactEval e;
  e.J_H = exact_jh(mdp, policy, theta, H);
  e.grad = exact_grad_jh(mdp, policy, theta, H);
  const QvaTables qva = exact_qva(mdp, policy, theta);
  e.Q = qva.Q;
  e.V = qva.V;
  e.A = qva.A;
  e.visitation = discounted_visitation(mdp, policy_matrix(mdp, policy, theta));
  return e;
}

}  // namespace pg::oracle
