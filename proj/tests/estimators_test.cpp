#include "pg/estimators.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "pg/envs.hpp"
#include "pg/oracle.hpp"
#include "pg/policies.hpp"
#include "testutil.hpp"

namespace pg {
namespace {

using test::fd_directional;
using test::random_unit;
using test::random_vec;
using test::rel_err;

FiniteMdp one_state_two_action(double r0, double r1, double discount) {
  std::vector<Matrix> P(1, Matrix::Ones(2, 1));
  Matrix r(1, 2);
  r << r0, r1;
  Eigen::VectorXd rho(1);
  rho << 1.0;
  return FiniteMdp(std::move(P), std::move(r), std::move(rho), discount, 1.0);
}

// Single fixed continuous state: identity dynamics, scalar zero input, zero noise.
PointMassEnv frozen_state_env(const Eigen::VectorXd& s) {
  PointMassEnv::Config cfg;
  const int p = static_cast<int>(s.size());
  cfg.A = Matrix::Identity(p, p);
  cfg.B = Matrix::Zero(p, 1);
  cfg.goal = Eigen::VectorXd::Zero(p);
  cfg.start = s;
  cfg.noise_scale = 0.0;
  cfg.r_max = 100.0;
  cfg.action_clip = 1e9;
  return PointMassEnv(cfg);
}

TEST(SampleTrajectory, DegenerateChainIsConstant) {
  const FiniteMdp mdp = one_state_two_action(1.0, 0.0, 0.9);
  const SoftmaxTabularPolicy policy(1, 2);
  ParamVector theta(2);
  theta << 50.0, 0.0;
  RngStream rng(1, 0);
  const auto traj = sample_trajectory(mdp, policy, theta, 3, rng);
  ASSERT_EQ(traj.horizon(), 3);
  for (int t = 0; t < 3; ++t) {
    EXPECT_EQ(traj.states[t], 0);
    EXPECT_EQ(traj.actions[t], 0);
    EXPECT_DOUBLE_EQ(traj.rewards(t), 1.0);
  }
}

TEST(SampleTrajectory, MinimalHorizon) {
  const FiniteMdp mdp = FiniteMdp::two_state_chain();
  const SoftmaxTabularPolicy policy(2, 2);
  RngStream rng(2, 0);
  const auto traj = sample_trajectory(mdp, policy, ParamVector::Zero(4), 1, rng);
  EXPECT_EQ(traj.horizon(), 1);
  EXPECT_THROW(sample_trajectory(mdp, policy, ParamVector::Zero(4), 0, rng),
               std::invalid_argument);
}

TEST(SampleTrajectory, TypeFrequenciesMatchEnumeration) {
  const FiniteMdp mdp = FiniteMdp::two_state_chain();
  const SoftmaxTabularPolicy policy(2, 2);
  const ParamVector theta = ParamVector::Zero(4);
  const int H = 2;

  // Exact type probabilities from the enumeration oracle.
  std::map<std::array<int, 4>, double> want;
  oracle::enumerate_expectation(
      mdp, policy, theta, H, [&](const oracle::FiniteTrajectory& traj, double prob) {
        want[{traj.states[0], traj.actions[0], traj.states[1], traj.actions[1]}] += prob;
        return 0.0;
      });

  RngStream rng(33, 0);
  const int n = 100000;
  std::map<std::array<int, 4>, int> counts;
  for (int i = 0; i < n; ++i) {
    const auto traj = sample_trajectory(mdp, policy, theta, H, rng);
    ++counts[{traj.states[0], traj.actions[0], traj.states[1], traj.actions[1]}];
  }
  for (const auto& [type, p] : want) {
    const double freq = counts[type] / double(n);
    const double se = std::sqrt(p * (1 - p) / n);
    EXPECT_NEAR(freq, p, 3.0 * se);
  }
}

TEST(GradEstimate, ZeroRewardsGiveZero) {
  const FiniteMdp mdp = one_state_two_action(0.0, 0.0, 0.9);
  const SoftmaxTabularPolicy policy(1, 2);
  RngStream rng(3, 0);
  const auto traj = sample_trajectory(mdp, policy, ParamVector::Zero(2), 4, rng);
  EXPECT_DOUBLE_EQ(grad_estimate(traj, policy, ParamVector::Zero(2), 0.9).norm(), 0.0);
}

TEST(GradEstimate, SingleStepIsRewardTimesScore) {
  const FiniteMdp mdp = one_state_two_action(0.7, -0.2, 0.9);
  const SoftmaxTabularPolicy policy(1, 2);
  RngStream rng(4, 0);
  const ParamVector theta = random_vec(2, 1.0, rng);
  const auto traj = sample_trajectory(mdp, policy, theta, 1, rng);
  const ParamVector want =
      traj.rewards(0) * policy.score(theta, traj.states[0], traj.actions[0]);
  EXPECT_LT((grad_estimate(traj, policy, theta, 0.9) - want).norm(), 1e-15);
}

TEST(GradEstimate, ExactExpectationMatchesOracle) {
  const FiniteMdp mdp = FiniteMdp::two_state_chain(0.9);
  const SoftmaxTabularPolicy policy(2, 2);
  const ParamVector theta = ParamVector::Zero(4);
  const ParamVector expected = oracle::enumerate_expectation(
      mdp, policy, theta, 3, [&](const oracle::FiniteTrajectory& traj, double) {
        return grad_estimate(traj, policy, theta, mdp.discount());
      });
  EXPECT_LT(rel_err(expected, oracle::exact_grad_jh_dp(mdp, policy, theta, 3)), 1e-10);
}

TEST(TrajLogDensityGrad, SingleStepEqualsScore) {
  const FiniteMdp mdp = FiniteMdp::two_state_chain();
  const SoftmaxTabularPolicy policy(2, 2);
  RngStream rng(5, 0);
  const ParamVector theta = random_vec(4, 0.5, rng);
  const auto traj = sample_trajectory(mdp, policy, theta, 1, rng);
  EXPECT_LT((traj_log_density_grad(traj, policy, theta) -
             policy.score(theta, traj.states[0], traj.actions[0]))
                .norm(),
            1e-15);
}

TEST(TrajLogDensityGrad, ClosedFormAtUniformSoftmax) {
  const SoftmaxTabularPolicy policy(2, 2);
  const ParamVector theta = ParamVector::Zero(4);
  Trajectory<int, int> traj;
  traj.states = {0, 0, 1, 1};
  traj.actions = {0, 1, 0, 1};
  traj.rewards = Eigen::VectorXd::Zero(4);
  // Sum over each (s,a) once: the one-hot-minus-uniform vectors cancel.
  EXPECT_LT(traj_log_density_grad(traj, policy, theta).norm(), 1e-15);
}

TEST(TrajLogDensityGrad, MatchesFiniteDifferenceOfLogDensity) {
  const PointMassEnv env = PointMassEnv::standard(2);
  const CauchyLinearPolicy policy(FeatureMap::bounded_tanh(2), 0.6, 2);
  RngStream rng(6, 0);
  const ParamVector theta = random_vec(policy.dim(), 0.5, rng);
  const auto traj = sample_trajectory(env, policy, theta, 10, rng);
  auto log_density = [&](const ParamVector& th) {
    double lp = 0.0;
    for (int t = 0; t < traj.horizon(); ++t)
      lp += policy.log_prob(th, traj.states[t], traj.actions[t]);
    return lp;
  };
  const ParamVector u = random_unit(policy.dim(), rng);
  const double fd = (log_density(theta + 1e-6 * u) - log_density(theta - 1e-6 * u)) / 2e-6;
  EXPECT_NEAR(traj_log_density_grad(traj, policy, theta).dot(u), fd,
              1e-6 * (1.0 + std::abs(fd)));
}

TEST(HvpEstimate, ZeroCases) {
  const FiniteMdp mdp = FiniteMdp::two_state_chain();
  const SoftmaxTabularPolicy policy(2, 2);
  RngStream rng(7, 0);
  const ParamVector theta = random_vec(4, 0.5, rng);
  const auto traj = sample_trajectory(mdp, policy, theta, 3, rng);
  EXPECT_DOUBLE_EQ(
      hvp_estimate(traj, policy, theta, 0.9, ParamVector::Zero(4)).norm(), 0.0);

  Trajectory<int, int> zero_traj = traj;
  zero_traj.rewards.setZero();
  const ParamVector u = random_unit(4, rng);
  EXPECT_DOUBLE_EQ(hvp_estimate(zero_traj, policy, theta, 0.9, u).norm(), 0.0);
}

TEST(HvpEstimate, ExactExpectationMatchesOracleHvp) {
  const FiniteMdp mdp = FiniteMdp::two_state_chain(0.9);
  const SoftmaxTabularPolicy policy(2, 2);
  RngStream rng(8, 0);
  for (int trial = 0; trial < 3; ++trial) {
    const ParamVector theta = random_vec(4, 0.6, rng);
    const ParamVector u = random_unit(4, rng);
    const ParamVector expected = oracle::enumerate_expectation(
        mdp, policy, theta, 3, [&](const oracle::FiniteTrajectory& traj, double) {
          return hvp_estimate(traj, policy, theta, mdp.discount(), u);
        });
    const ParamVector want = oracle::exact_hvp_jh(mdp, policy, theta, 3, u);
    EXPECT_LT(rel_err(expected, want, 1e-8), 1e-6);
  }
}

TEST(HarpgCorrection, ZeroDisplacementGivesZero) {
  const FiniteMdp mdp = FiniteMdp::two_state_chain();
  const SoftmaxTabularPolicy policy(2, 2);
  RngStream rng(9, 0);
  const ParamVector theta = random_vec(4, 0.5, rng);
  const ParamVector v = harpg_correction(mdp, policy, theta, theta, 0.9, 3, rng);
  EXPECT_DOUBLE_EQ(v.norm(), 0.0);
}

TEST(HarpgCorrection, FixedQOneEvaluatesAtThetaT) {
  const FiniteMdp mdp = FiniteMdp::two_state_chain();
  const SoftmaxTabularPolicy policy(2, 2);
  RngStream rng(10, 0);
  const ParamVector theta_prev = random_vec(4, 0.5, rng);
  const ParamVector theta_t = theta_prev + random_vec(4, 0.3, rng);

  double q = -1.0;
  RngStream rng_a(77, 1);
  const ParamVector v =
      harpg_correction(mdp, policy, theta_t, theta_prev, 0.9, 3, rng_a, 1.0, &q);
  EXPECT_DOUBLE_EQ(q, 1.0);

  RngStream rng_b(77, 1);  // same stream: same trajectory
  const auto traj = sample_trajectory(mdp, policy, theta_t, 3, rng_b);
  const ParamVector want = hvp_estimate(traj, policy, theta_t, 0.9, theta_t - theta_prev);
  EXPECT_DOUBLE_EQ((v - want).norm(), 0.0);
}

TEST(HarpgCorrection, DrawnQIsRecordedAndInRange) {
  const FiniteMdp mdp = FiniteMdp::two_state_chain();
  const SoftmaxTabularPolicy policy(2, 2);
  RngStream rng(11, 0);
  const ParamVector theta_prev = random_vec(4, 0.5, rng);
  const ParamVector theta_t = theta_prev + random_vec(4, 0.3, rng);
  for (int i = 0; i < 100; ++i) {
    double q = -1.0;
    harpg_correction(mdp, policy, theta_t, theta_prev, 0.9, 3, rng, std::nullopt, &q);
    EXPECT_GE(q, 0.0);
    EXPECT_LE(q, 1.0);
  }
}

TEST(FisherEstimate, UniformSoftmaxClosedForm) {
  const FiniteMdp mdp = one_state_two_action(0.3, -0.3, 0.9);
  const SoftmaxTabularPolicy policy(1, 2);
  const ParamVector theta = ParamVector::Zero(2);
  RngStream rng(12, 0);
  const int n = 20000;
  const FisherEstimate fe = fisher_estimate(mdp, policy, theta, 0.9, 20, n, rng);
  Matrix want(2, 2);
  want << 0.25, -0.25, -0.25, 0.25;
  // Each sampled outer product has entries in {-1/4, 1/4}... bounded by 1; 3-sigma envelope.
  const double tol = 3.0 * 0.5 / std::sqrt(double(n));
  EXPECT_LT((fe.F - want).cwiseAbs().maxCoeff(), tol);
}

TEST(FisherEstimate, GaussianSingleStateMatchesClosedForm) {
  Eigen::VectorXd s(2);
  s << 0.8, -0.5;
  const PointMassEnv env = frozen_state_env(s);
  const double sigma = 0.7;
  const GaussianLinearPolicy policy(FeatureMap::bounded_tanh(2), sigma, 1);
  const ParamVector theta = ParamVector::Zero(2);
  RngStream rng(13, 0);
  const int n = 100000;
  const FisherEstimate fe = fisher_estimate(env, policy, theta, 0.9, 10, n, rng);
  const Matrix want = policy.state_fisher(s);
  // Entries average (z^2/sigma^2) phi_i phi_j with Var(z^2) = 2.
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double se = std::sqrt(2.0) * std::abs(want(i, j)) / std::sqrt(double(n));
      EXPECT_NEAR(fe.F(i, j), want(i, j), 3.0 * se + 1e-12);
    }
}

TEST(FisherEstimate, AlwaysSymmetricPsd) {
  const FiniteMdp mdp = FiniteMdp::five_state_walk();
  const SoftmaxTabularPolicy policy(5, 2);
  RngStream rng(14, 0);
  const ParamVector theta = random_vec(policy.dim(), 1.0, rng);
  const FisherEstimate fe = fisher_estimate(mdp, policy, theta, 0.9, 15, 500, rng);
  EXPECT_LT((fe.F - fe.F.transpose()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_GE(fe.mu_F, -1e-10);
}

TEST(BatchGradEstimate, AveragesTowardTheOracle) {
  const FiniteMdp mdp = FiniteMdp::two_state_chain(0.9);
  const SoftmaxTabularPolicy policy(2, 2);
  RngStream rng(15, 0);
  const ParamVector theta = random_vec(4, 0.4, rng);
  const GradEstimate est = batch_grad_estimate(mdp, policy, theta, 0.9, 3, 20000, rng);
  EXPECT_EQ(est.horizon, 3);
  EXPECT_EQ(est.n_trajectories, 20000);
  const ParamVector want = oracle::exact_grad_jh_dp(mdp, policy, theta, 3);
  // Per-coordinate scores are bounded by sqrt 2 and rewards-to-go by ~3.
  EXPECT_LT((est.value - want).norm(), 3.0 * 5.0 / std::sqrt(20000.0));
  EXPECT_THROW(batch_grad_estimate(mdp, policy, theta, 0.9, 3, 0, rng), std::invalid_argument);
}

TEST(RewardsToGo, BackwardCumulativeSum) {
  Eigen::VectorXd r(3);
  r << 1.0, 2.0, 4.0;
  const Eigen::VectorXd c = rewards_to_go(r, 0.5);
  EXPECT_DOUBLE_EQ(c(2), 1.0);        // 0.25 * 4
  EXPECT_DOUBLE_EQ(c(1), 2.0);        // 0.5 * 2 + 1.0
  EXPECT_DOUBLE_EQ(c(0), 3.0);        // 1 + 1 + 1
}

}  // namespace
}  // namespace pg
