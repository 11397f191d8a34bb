#include "pg/envs.hpp"

#include <cmath>
#include <stdexcept>

namespace pg {

FiniteMdp::FiniteMdp(std::vector<Matrix> transition, Matrix reward,
                     Eigen::VectorXd init_dist, double discount, double r_max)
    : n_states_(static_cast<int>(transition.size())),
      n_actions_(transition.empty() ? 0 : static_cast<int>(transition[0].rows())),
      transition_(std::move(transition)),
      reward_(std::move(reward)),
      init_dist_(std::move(init_dist)),
      discount_(discount),
      r_max_(r_max) {
  if (n_states_ < 1 || n_actions_ < 1)
    throw std::invalid_argument("FiniteMdp: need at least one state and action");
  if (!(discount_ > 0.0) || !(discount_ < 1.0))
    throw std::invalid_argument("FiniteMdp: discount must lie in (0,1)");
  if (!(r_max_ > 0.0)) throw std::invalid_argument("FiniteMdp: r_max must be positive");
  if (reward_.rows() != n_states_ || reward_.cols() != n_actions_)
    throw std::invalid_argument("FiniteMdp: reward table shape mismatch");
  if (init_dist_.size() != n_states_)
    throw std::invalid_argument("FiniteMdp: init_dist size mismatch");
  constexpr double kTol = 1e-12;
  if (std::abs(init_dist_.sum() - 1.0) > kTol || init_dist_.minCoeff() < 0.0)
    throw std::invalid_argument("FiniteMdp: init_dist is not a distribution");
  for (int s = 0; s < n_states_; ++s) {
    const Matrix& rows = transition_[s];
    if (rows.rows() != n_actions_ || rows.cols() != n_states_)
      throw std::invalid_argument("FiniteMdp: transition tensor shape mismatch");
    for (int a = 0; a < n_actions_; ++a) {
      if (std::abs(rows.row(a).sum() - 1.0) > kTol || rows.row(a).minCoeff() < 0.0)
        throw std::invalid_argument("FiniteMdp: P[s,a,.] is not a distribution");
      if (std::abs(reward_(s, a)) > r_max_)
        throw std::invalid_argument("FiniteMdp: reward exceeds r_max");
    }
  }
}

void FiniteMdp::check_state(int s) const {
  if (s < 0 || s >= n_states_) throw std::out_of_range("FiniteMdp: state index");
}

void FiniteMdp::check_action(int a) const {
  if (a < 0 || a >= n_actions_) throw std::out_of_range("FiniteMdp: action index");
}

int FiniteMdp::reset(RngStream& rng) const {
  return rng.categorical({init_dist_.data(), static_cast<std::size_t>(init_dist_.size())});
}

std::pair<int, double> FiniteMdp::step(int s, int a, RngStream& rng) const {
  check_state(s);
  check_action(a);
  const Matrix& rows = transition_[s];
  const Eigen::VectorXd row = rows.row(a);
  const int next = rng.categorical({row.data(), static_cast<std::size_t>(row.size())});
  return {next, reward_(s, a)};
}

FiniteMdp FiniteMdp::two_state_chain(double discount) {
  std::vector<Matrix> P(2, Matrix(2, 2));
  P[0] << 1.0, 0.0,   // action 0 -> state 0
          0.0, 1.0;   // action 1 -> state 1
  P[1] << 1.0, 0.0,
          0.0, 1.0;
  Matrix r(2, 2);
  r << 0.2, 1.0,
       0.5, -0.5;
  Eigen::VectorXd rho(2);
  rho << 1.0, 0.0;
  return FiniteMdp(std::move(P), std::move(r), std::move(rho), discount, 1.0);
}

FiniteMdp FiniteMdp::five_state_walk(double discount) {
  const int S = 5;
  std::vector<Matrix> P(S, Matrix::Zero(2, S));
  auto put = [&](int s, int a, int sp, double p) { P[s](a, sp) += p; };
  for (int s = 0; s < S; ++s) {
    const int left = std::max(0, s - 1);
    const int right = std::min(S - 1, s + 1);
    put(s, 0, left, 0.7);   // action 0: drift left
    put(s, 0, right, 0.3);
    put(s, 1, right, 0.7);  // action 1: drift right
    put(s, 1, left, 0.3);
  }
  Matrix r = Matrix::Zero(S, 2);
  r(S - 1, 0) = 1.0;
  r(S - 1, 1) = 1.0;
  r(0, 0) = -0.5;
  r(0, 1) = -0.5;
  Eigen::VectorXd rho = Eigen::VectorXd::Zero(S);
  rho(2) = 1.0;
  return FiniteMdp(std::move(P), std::move(r), std::move(rho), discount, 1.0);
}

PointMassEnv::PointMassEnv(Config cfg) : cfg_(std::move(cfg)) {
  const auto p = cfg_.A.rows();
  const auto q = cfg_.B.cols();
  if (cfg_.A.cols() != p || cfg_.B.rows() != p)
    throw std::invalid_argument("PointMassEnv: dynamics matrix shape mismatch");
  if (cfg_.goal.size() != p || cfg_.start.size() != p)
    throw std::invalid_argument("PointMassEnv: goal/start dimension mismatch");
  if (!(cfg_.r_max > 0.0) || !(cfg_.action_clip > 0.0) || cfg_.noise_scale < 0.0 ||
      cfg_.init_noise < 0.0 || cfg_.action_cost < 0.0)
    throw std::invalid_argument("PointMassEnv: invalid scalar parameter");
  (void)q;
}

Eigen::VectorXd PointMassEnv::reset(RngStream& rng) const {
  Eigen::VectorXd s = cfg_.start;
  if (cfg_.init_noise > 0.0) {
    for (int i = 0; i < s.size(); ++i) s(i) += cfg_.init_noise * rng.normal();
  }
  return s;
}

std::pair<Eigen::VectorXd, double> PointMassEnv::step(const Eigen::VectorXd& s,
                                                      const Eigen::VectorXd& a,
                                                      RngStream& rng) const {
  if (s.size() != cfg_.A.rows() || a.size() != cfg_.B.cols())
    throw std::invalid_argument("PointMassEnv: state/action dimension mismatch");
  const Eigen::VectorXd a_clipped =
      a.cwiseMax(-cfg_.action_clip).cwiseMin(cfg_.action_clip);
  const double raw = -(s - cfg_.goal).squaredNorm() - cfg_.action_cost * a_clipped.squaredNorm();
  const double r = std::clamp(raw, -cfg_.r_max, cfg_.r_max);
  Eigen::VectorXd next = cfg_.A * s + cfg_.B * a_clipped;
  if (cfg_.noise_scale > 0.0) {
    for (int i = 0; i < next.size(); ++i) next(i) += cfg_.noise_scale * rng.normal();
  }
  return {std::move(next), r};
}

PointMassEnv PointMassEnv::standard(int dim) {
  Config cfg;
  cfg.A = Matrix::Identity(dim, dim);
  cfg.B = Matrix::Identity(dim, dim);
  cfg.goal = Eigen::VectorXd::Zero(dim);
  cfg.start = Eigen::VectorXd::Zero(dim);
  cfg.start(0) = 1.5;
  if (dim > 1) cfg.start(1) = -1.0;
  cfg.action_cost = 0.01;
  cfg.r_max = 10.0;
  cfg.action_clip = 1.0;
  cfg.noise_scale = 0.05;
  cfg.init_noise = 0.0;
  return PointMassEnv(std::move(cfg));
}

}  // namespace pg
