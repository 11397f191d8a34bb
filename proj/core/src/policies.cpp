#include "pg/policies.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pg {
namespace {

Eigen::VectorXd stable_softmax(const Eigen::VectorXd& logits) {
  const double m = logits.maxCoeff();
  Eigen::VectorXd p = (logits.array() - m).exp();
  p /= p.sum();
  return p;
}

// View the state-major head blocks of theta as columns of an (m x q) matrix.
Eigen::Map<const Matrix> head_view(const ParamVector& theta, int m, int q) {
  return Eigen::Map<const Matrix>(theta.data(), m, q);
}

}  // namespace

// ---------------------------------------------------------------------------
// SoftmaxTabularPolicy

SoftmaxTabularPolicy::SoftmaxTabularPolicy(int n_states, int n_actions)
    : n_states_(n_states), n_actions_(n_actions) {
  if (n_states < 1 || n_actions < 1)
    throw std::invalid_argument("SoftmaxTabularPolicy: need >= 1 state and action");
}

void SoftmaxTabularPolicy::check(const ParamVector& theta, int s, int a) const {
  if (theta.size() != dim()) throw std::invalid_argument("SoftmaxTabularPolicy: theta dim");
  if (s < 0 || s >= n_states_) throw std::out_of_range("SoftmaxTabularPolicy: state");
  if (a < -1 || a >= n_actions_) throw std::out_of_range("SoftmaxTabularPolicy: action");
}

Eigen::VectorXd SoftmaxTabularPolicy::action_probs(const ParamVector& theta, int s) const {
  check(theta, s, -1);
  return stable_softmax(theta.segment(s * n_actions_, n_actions_));
}

int SoftmaxTabularPolicy::sample_action(const ParamVector& theta, int s, RngStream& rng) const {
  const Eigen::VectorXd p = action_probs(theta, s);
  return rng.categorical({p.data(), static_cast<std::size_t>(p.size())});
}

double SoftmaxTabularPolicy::log_prob(const ParamVector& theta, int s, int a) const {
  check(theta, s, a);
  const Eigen::VectorXd logits = theta.segment(s * n_actions_, n_actions_);
  const double m = logits.maxCoeff();
  const double lse = m + std::log((logits.array() - m).exp().sum());
  return logits(a) - lse;
}

ParamVector SoftmaxTabularPolicy::score(const ParamVector& theta, int s, int a) const {
  check(theta, s, a);
  ParamVector g = ParamVector::Zero(dim());
  g.segment(s * n_actions_, n_actions_) = -action_probs(theta, s);
  g(index(s, a)) += 1.0;
  return g;
}

ParamVector SoftmaxTabularPolicy::score_hessian_vec(const ParamVector& theta, int s, int /*a*/,
                                                    const ParamVector& u) const {
  if (u.size() != dim()) throw std::invalid_argument("SoftmaxTabularPolicy: u dim");
  const Eigen::VectorXd p = action_probs(theta, s);
  const Eigen::VectorXd us = u.segment(s * n_actions_, n_actions_);
  ParamVector out = ParamVector::Zero(dim());
  // -(diag(p) - p p^T) u on the state block; other blocks are zero.
  out.segment(s * n_actions_, n_actions_) =
      -(p.cwiseProduct(us) - p * p.dot(us));
  return out;
}

// ---------------------------------------------------------------------------
// SoftmaxFeaturePolicy

SoftmaxFeaturePolicy::SoftmaxFeaturePolicy(std::vector<Matrix> features)
    : features_(std::move(features)) {
  if (features_.empty()) throw std::invalid_argument("SoftmaxFeaturePolicy: no states");
  n_actions_ = static_cast<int>(features_[0].rows());
  k_ = static_cast<int>(features_[0].cols());
  if (n_actions_ < 1 || k_ < 1)
    throw std::invalid_argument("SoftmaxFeaturePolicy: empty feature table");
  for (const Matrix& f : features_) {
    if (f.rows() != n_actions_ || f.cols() != k_)
      throw std::invalid_argument("SoftmaxFeaturePolicy: ragged feature table");
  }
}

Eigen::VectorXd SoftmaxFeaturePolicy::action_probs(const ParamVector& theta, int s) const {
  if (theta.size() != k_) throw std::invalid_argument("SoftmaxFeaturePolicy: theta dim");
  if (s < 0 || s >= n_states()) throw std::out_of_range("SoftmaxFeaturePolicy: state");
  return stable_softmax(features_[s] * theta);
}

int SoftmaxFeaturePolicy::sample_action(const ParamVector& theta, int s, RngStream& rng) const {
  const Eigen::VectorXd p = action_probs(theta, s);
  return rng.categorical({p.data(), static_cast<std::size_t>(p.size())});
}

double SoftmaxFeaturePolicy::log_prob(const ParamVector& theta, int s, int a) const {
  if (a < 0 || a >= n_actions_) throw std::out_of_range("SoftmaxFeaturePolicy: action");
  const Eigen::VectorXd logits = features_[s] * theta;
  const double m = logits.maxCoeff();
  const double lse = m + std::log((logits.array() - m).exp().sum());
  return logits(a) - lse;
}

ParamVector SoftmaxFeaturePolicy::score(const ParamVector& theta, int s, int a) const {
  if (a < 0 || a >= n_actions_) throw std::out_of_range("SoftmaxFeaturePolicy: action");
  const Eigen::VectorXd p = action_probs(theta, s);
  return features_[s].row(a).transpose() - features_[s].transpose() * p;
}

ParamVector SoftmaxFeaturePolicy::score_hessian_vec(const ParamVector& theta, int s, int /*a*/,
                                                    const ParamVector& u) const {
  if (u.size() != k_) throw std::invalid_argument("SoftmaxFeaturePolicy: u dim");
  const Eigen::VectorXd p = action_probs(theta, s);
  const Eigen::VectorXd fu = features_[s] * u;             // psi_a^T u per action
  const Eigen::VectorXd mean_f = features_[s].transpose() * p;
  // -Cov_p(psi) u = -(sum_a p_a psi_a (psi_a^T u) - mean_f (mean_f^T u))
  return -(features_[s].transpose() * p.cwiseProduct(fu) - mean_f * mean_f.dot(u));
}

// ---------------------------------------------------------------------------
// GaussianLinearPolicy

GaussianLinearPolicy::GaussianLinearPolicy(FeatureMap features, double sigma, int action_dim,
                                           std::optional<double> action_clip,
                                           std::optional<double> theta_norm_bound)
    : features_(std::move(features)),
      sigma_(sigma),
      action_dim_(action_dim),
      action_clip_(action_clip),
      theta_norm_bound_(theta_norm_bound) {
  if (!(sigma_ > 0.0)) throw std::invalid_argument("GaussianLinearPolicy: sigma must be positive");
  if (action_dim_ < 1) throw std::invalid_argument("GaussianLinearPolicy: action_dim must be >= 1");
  if (action_clip_ && !(*action_clip_ > 0.0))
    throw std::invalid_argument("GaussianLinearPolicy: action_clip must be positive");
}

Eigen::VectorXd GaussianLinearPolicy::mean(const ParamVector& theta, const State& s) const {
  if (theta.size() != dim()) throw std::invalid_argument("GaussianLinearPolicy: theta dim");
  return head_view(theta, features_.dim(), action_dim_).transpose() * features_(s);
}

GaussianLinearPolicy::Action GaussianLinearPolicy::sample_action(const ParamVector& theta,
                                                                 const State& s,
                                                                 RngStream& rng) const {
  Eigen::VectorXd a = mean(theta, s);
  for (int j = 0; j < action_dim_; ++j) a(j) += sigma_ * rng.normal();
  if (action_clip_) a = a.cwiseMax(-*action_clip_).cwiseMin(*action_clip_);
  return a;
}

double GaussianLinearPolicy::log_prob(const ParamVector& theta, const State& s,
                                      const Action& a) const {
  if (a.size() != action_dim_) throw std::invalid_argument("GaussianLinearPolicy: action dim");
  const Eigen::VectorXd mu = mean(theta, s);
  const double norm_const = -0.5 * std::log(2.0 * std::numbers::pi * sigma_ * sigma_);
  return action_dim_ * norm_const - (a - mu).squaredNorm() / (2.0 * sigma_ * sigma_);
}

ParamVector GaussianLinearPolicy::score(const ParamVector& theta, const State& s,
                                        const Action& a) const {
  if (a.size() != action_dim_) throw std::invalid_argument("GaussianLinearPolicy: action dim");
  const Eigen::VectorXd phi = features_(s);
  const Eigen::VectorXd resid = (a - mean(theta, s)) / (sigma_ * sigma_);
  ParamVector g(dim());
  for (int j = 0; j < action_dim_; ++j) g.segment(j * features_.dim(), features_.dim()) = resid(j) * phi;
  return g;
}

ParamVector GaussianLinearPolicy::score_hessian_vec(const ParamVector& theta, const State& s,
                                                    const Action& /*a*/,
                                                    const ParamVector& u) const {
  if (u.size() != dim()) throw std::invalid_argument("GaussianLinearPolicy: u dim");
  (void)theta;
  const Eigen::VectorXd phi = features_(s);
  const int m = features_.dim();
  ParamVector out(dim());
  for (int j = 0; j < action_dim_; ++j) {
    const double proj = phi.dot(u.segment(j * m, m));
    out.segment(j * m, m) = -(proj / (sigma_ * sigma_)) * phi;
  }
  return out;
}

Matrix GaussianLinearPolicy::state_fisher(const State& s) const {
  const Eigen::VectorXd phi = features_(s);
  const Matrix block = phi * phi.transpose() / (sigma_ * sigma_);
  Matrix f = Matrix::Zero(dim(), dim());
  const int m = features_.dim();
  for (int j = 0; j < action_dim_; ++j) f.block(j * m, j * m, m, m) = block;
  return f;
}

PolicyBounds GaussianLinearPolicy::bounds() const {
  const auto d_feat = features_.norm_bound();
  if (!d_feat)
    throw std::invalid_argument("policy_bounds: feature map has no certified norm bound");
  PolicyBounds b;
  b.M_h = (*d_feat) * (*d_feat) / (sigma_ * sigma_);
  b.l_2 = 0.0;  // log-density hessian is theta-free
  b.clip_dependent = true;
  if (action_clip_ && theta_norm_bound_) {
    const double per_head =
        (*action_clip_ + *d_feat * *theta_norm_bound_) * *d_feat / (sigma_ * sigma_);
    b.M_g = per_head * std::sqrt(static_cast<double>(action_dim_));
  }
  return b;
}

// ---------------------------------------------------------------------------
// CauchyLinearPolicy

CauchyLinearPolicy::CauchyLinearPolicy(FeatureMap features, double sigma, int action_dim)
    : features_(std::move(features)), sigma_(sigma), action_dim_(action_dim) {
  if (!(sigma_ > 0.0)) throw std::invalid_argument("CauchyLinearPolicy: sigma must be positive");
  if (action_dim_ < 1) throw std::invalid_argument("CauchyLinearPolicy: action_dim must be >= 1");
}

Eigen::VectorXd CauchyLinearPolicy::mean(const ParamVector& theta, const State& s) const {
  if (theta.size() != dim()) throw std::invalid_argument("CauchyLinearPolicy: theta dim");
  return head_view(theta, features_.dim(), action_dim_).transpose() * features_(s);
}

CauchyLinearPolicy::Action CauchyLinearPolicy::sample_action(const ParamVector& theta,
                                                             const State& s,
                                                             RngStream& rng) const {
  Eigen::VectorXd a = mean(theta, s);
  for (int j = 0; j < action_dim_; ++j) a(j) += sigma_ * rng.cauchy();
  return a;
}

double CauchyLinearPolicy::log_prob(const ParamVector& theta, const State& s,
                                    const Action& a) const {
  if (a.size() != action_dim_) throw std::invalid_argument("CauchyLinearPolicy: action dim");
  const Eigen::VectorXd mu = mean(theta, s);
  double lp = 0.0;
  for (int j = 0; j < action_dim_; ++j) {
    const double x = (a(j) - mu(j)) / sigma_;
    lp += -std::log(std::numbers::pi * sigma_) - std::log1p(x * x);
  }
  return lp;
}

ParamVector CauchyLinearPolicy::score(const ParamVector& theta, const State& s,
                                      const Action& a) const {
  if (a.size() != action_dim_) throw std::invalid_argument("CauchyLinearPolicy: action dim");
  const Eigen::VectorXd phi = features_(s);
  const Eigen::VectorXd mu = mean(theta, s);
  const int m = features_.dim();
  ParamVector g(dim());
  for (int j = 0; j < action_dim_; ++j) {
    const double x = (a(j) - mu(j)) / sigma_;
    g.segment(j * m, m) = (2.0 * x / (1.0 + x * x)) / sigma_ * phi;
  }
  return g;
}

ParamVector CauchyLinearPolicy::score_hessian_vec(const ParamVector& theta, const State& s,
                                                  const Action& a, const ParamVector& u) const {
  if (u.size() != dim()) throw std::invalid_argument("CauchyLinearPolicy: u dim");
  const Eigen::VectorXd phi = features_(s);
  const Eigen::VectorXd mu = mean(theta, s);
  const int m = features_.dim();
  ParamVector out(dim());
  for (int j = 0; j < action_dim_; ++j) {
    const double x = (a(j) - mu(j)) / sigma_;
    const double denom = (1.0 + x * x) * (1.0 + x * x);
    const double factor = 2.0 * (x * x - 1.0) / denom / (sigma_ * sigma_);
    out.segment(j * m, m) = factor * phi.dot(u.segment(j * m, m)) * phi;
  }
  return out;
}

PolicyBounds CauchyLinearPolicy::bounds() const {
  const auto d_feat = features_.norm_bound();
  if (!d_feat)
    throw std::invalid_argument("policy_bounds: feature map has no certified norm bound");
  const double d = *d_feat;
  PolicyBounds b;
  b.M_g = d / sigma_ * std::sqrt(static_cast<double>(action_dim_));
  b.M_h = 3.0 * d * d / (2.0 * sigma_ * sigma_);
  b.l_2 = 4.0 * d * d * d / (sigma_ * sigma_ * sigma_);
  return b;
}

// ---------------------------------------------------------------------------

PolicyBounds policy_bounds(const SoftmaxTabularPolicy&) {
  PolicyBounds b;
  // Score per state block is (1{a}-p): |.|^2 = (1-p_a)^2 + sum p_a'^2 <= 2.
  b.M_g = std::numbers::sqrt2;
  // |diag(p)-pp^T| = max Var_p(x) over unit x; the range bound gives 1/2.
  b.M_h = 0.5;
  // |H(th)-H(th')| <= 3 |p-p'| <= 3 * (1/2) |th-th'|.
  b.l_2 = 1.5;
  return b;
}

PolicyBounds policy_bounds(const GaussianLinearPolicy& p) { return p.bounds(); }
PolicyBounds policy_bounds(const CauchyLinearPolicy& p) { return p.bounds(); }

}  // namespace pg
