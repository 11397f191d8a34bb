#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "pg/rng.hpp"
#include "pg/types.hpp"

namespace pg {

/// Finite MDP with dense transition tensor P[s][a] (row over next states),
/// reward table r(s,a) bounded by r_max, initial distribution rho and
/// discount in (0,1). Immutable after construction; validated on entry.
class FiniteMdp {
 public:
  using State = int;
  using Action = int;

  FiniteMdp(std::vector<Matrix> transition,  // transition[s](a, s')
            Matrix reward,                   // reward(s, a)
            Eigen::VectorXd init_dist, double discount, double r_max);

  int n_states() const { return n_states_; }
  int n_actions() const { return n_actions_; }
  double discount() const { return discount_; }
  double r_max() const { return r_max_; }
  const Eigen::VectorXd& init_dist() const { return init_dist_; }
  double reward(int s, int a) const { return reward_(s, a); }
  const Matrix& reward_table() const { return reward_; }
  /// P(. | s, a) as a row vector over next states.
  Eigen::VectorXd transition_row(int s, int a) const { return transition_[s].row(a); }

  int reset(RngStream& rng) const;
  std::pair<int, double> step(int s, int a, RngStream& rng) const;

  /// Two states, two actions; action j moves deterministically to state j.
  static FiniteMdp two_state_chain(double discount = 0.9);
  /// Five-state random walk with a rewarding right edge and noisy moves.
  static FiniteMdp five_state_walk(double discount = 0.9);

 private:
  void check_state(int s) const;
  void check_action(int a) const;

  int n_states_;
  int n_actions_;
  std::vector<Matrix> transition_;
  Matrix reward_;
  Eigen::VectorXd init_dist_;
  double discount_;
  double r_max_;
};

/// Linear point-mass navigation task: s' = A s + B a + noise with the
/// action clipped to [-action_clip, action_clip]^q before dynamics and
/// reward. Reward is clip(-|s-goal|^2 - action_cost |a|^2, -r_max, r_max),
/// so it stays inside [-r_max, r_max] by construction.
class PointMassEnv {
 public:
  using State = Eigen::VectorXd;
  using Action = Eigen::VectorXd;

  struct Config {
    Matrix A;
    Matrix B;
    Eigen::VectorXd goal;
    Eigen::VectorXd start;
    double action_cost = 0.01;
    double r_max = 10.0;
    double action_clip = 1.0;
    double noise_scale = 0.0;
    double init_noise = 0.0;
  };

  explicit PointMassEnv(Config cfg);

  int state_dim() const { return static_cast<int>(cfg_.A.rows()); }
  int action_dim() const { return static_cast<int>(cfg_.B.cols()); }
  double r_max() const { return cfg_.r_max; }
  double action_clip() const { return cfg_.action_clip; }
  const Config& config() const { return cfg_; }

  Eigen::VectorXd reset(RngStream& rng) const;
  std::pair<Eigen::VectorXd, double> step(const Eigen::VectorXd& s,
                                          const Eigen::VectorXd& a,
                                          RngStream& rng) const;

  /// Identity dynamics in dim dimensions, goal at the origin, start offset.
  static PointMassEnv standard(int dim = 2);

 private:
  Config cfg_;
};

}  // namespace pg
