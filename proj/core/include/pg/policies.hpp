#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "pg/features.hpp"
#include "pg/rng.hpp"
#include "pg/types.hpp"

namespace pg {

/// Bounds certifying Assumption-style regularity of a policy class:
/// |score| <= M_g, |hessian of log pi| <= M_h, Lipschitz constant l_2 of
/// that hessian. M_g is empty when no uniform bound exists (unclipped
/// Gaussian); clip_dependent marks bounds that hold only under action
/// clipping and a declared parameter-norm radius.
struct PolicyBounds {
  std::optional<double> M_g;
  double M_h = 0.0;
  double l_2 = 0.0;
  bool clip_dependent = false;
};

/// Tabular softmax over finite states and actions: pi(a|s) ~ exp(theta[s,a]).
/// theta is laid out state-major: coordinate (s, a) at index s * n_actions + a.
class SoftmaxTabularPolicy {
 public:
  using State = int;
  using Action = int;

  SoftmaxTabularPolicy(int n_states, int n_actions);

  int dim() const { return n_states_ * n_actions_; }
  int n_states() const { return n_states_; }
  int n_actions() const { return n_actions_; }
  int index(int s, int a) const { return s * n_actions_ + a; }

  Eigen::VectorXd action_probs(const ParamVector& theta, int s) const;
  int sample_action(const ParamVector& theta, int s, RngStream& rng) const;
  double log_prob(const ParamVector& theta, int s, int a) const;
  ParamVector score(const ParamVector& theta, int s, int a) const;
  ParamVector score_hessian_vec(const ParamVector& theta, int s, int a,
                                const ParamVector& u) const;

 private:
  void check(const ParamVector& theta, int s, int a) const;
  int n_states_;
  int n_actions_;
};

/// Log-linear softmax over finite states and actions with an explicit
/// feature table psi(s,a) in R^k: pi(a|s) ~ exp(theta^T psi(s,a)). With
/// one-hot features this reduces to the tabular policy; a rank-deficient
/// feature table gives a policy class with nonzero transfer error.
class SoftmaxFeaturePolicy {
 public:
  using State = int;
  using Action = int;

  /// features[s] is a (n_actions x k) matrix of per-action feature rows.
  SoftmaxFeaturePolicy(std::vector<Matrix> features);

  int dim() const { return k_; }
  int n_states() const { return static_cast<int>(features_.size()); }
  int n_actions() const { return n_actions_; }

  Eigen::VectorXd action_probs(const ParamVector& theta, int s) const;
  int sample_action(const ParamVector& theta, int s, RngStream& rng) const;
  double log_prob(const ParamVector& theta, int s, int a) const;
  ParamVector score(const ParamVector& theta, int s, int a) const;
  ParamVector score_hessian_vec(const ParamVector& theta, int s, int a,
                                const ParamVector& u) const;

 private:
  std::vector<Matrix> features_;
  int n_actions_;
  int k_;
};

/// Gaussian policy with linear mean and fixed standard deviation. Actions
/// have action_dim independent heads sharing one feature map; head j owns
/// the theta block [j*m, (j+1)*m) with m = feature dim. Sampled actions are
/// clipped to [-action_clip, action_clip] (when set) before they are
/// returned, so downstream score evaluation sees the executed action.
class GaussianLinearPolicy {
 public:
  using State = Eigen::VectorXd;
  using Action = Eigen::VectorXd;

  GaussianLinearPolicy(FeatureMap features, double sigma, int action_dim,
                       std::optional<double> action_clip = std::nullopt,
                       std::optional<double> theta_norm_bound = std::nullopt);

  int dim() const { return action_dim_ * features_.dim(); }
  int action_dim() const { return action_dim_; }
  double sigma() const { return sigma_; }
  const FeatureMap& features() const { return features_; }
  std::optional<double> action_clip() const { return action_clip_; }

  Eigen::VectorXd mean(const ParamVector& theta, const State& s) const;
  Action sample_action(const ParamVector& theta, const State& s, RngStream& rng) const;
  double log_prob(const ParamVector& theta, const State& s, const Action& a) const;
  ParamVector score(const ParamVector& theta, const State& s, const Action& a) const;
  ParamVector score_hessian_vec(const ParamVector& theta, const State& s, const Action& a,
                                const ParamVector& u) const;

  /// Exact per-state Fisher block (1/sigma^2) phi phi^T replicated over heads.
  Matrix state_fisher(const State& s) const;

  PolicyBounds bounds() const;

 private:
  FeatureMap features_;
  double sigma_;
  int action_dim_;
  std::optional<double> action_clip_;
  std::optional<double> theta_norm_bound_;
};

/// Cauchy policy with linear mean parameterization and fixed scale sigma;
/// heavy-tailed analogue of the Gaussian policy with uniformly bounded
/// score. Same head/block layout as GaussianLinearPolicy.
class CauchyLinearPolicy {
 public:
  using State = Eigen::VectorXd;
  using Action = Eigen::VectorXd;

  CauchyLinearPolicy(FeatureMap features, double sigma, int action_dim);

  int dim() const { return action_dim_ * features_.dim(); }
  int action_dim() const { return action_dim_; }
  double sigma() const { return sigma_; }
  const FeatureMap& features() const { return features_; }

  Eigen::VectorXd mean(const ParamVector& theta, const State& s) const;
  Action sample_action(const ParamVector& theta, const State& s, RngStream& rng) const;
  double log_prob(const ParamVector& theta, const State& s, const Action& a) const;
  ParamVector score(const ParamVector& theta, const State& s, const Action& a) const;
  ParamVector score_hessian_vec(const ParamVector& theta, const State& s, const Action& a,
                                const ParamVector& u) const;

  PolicyBounds bounds() const;

 private:
  FeatureMap features_;
  double sigma_;
  int action_dim_;
};

PolicyBounds policy_bounds(const SoftmaxTabularPolicy& p);
PolicyBounds policy_bounds(const GaussianLinearPolicy& p);
PolicyBounds policy_bounds(const CauchyLinearPolicy& p);

}  // namespace pg
