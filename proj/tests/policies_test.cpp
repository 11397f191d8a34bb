#include "pg/policies.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "testutil.hpp"

namespace pg {
namespace {

using test::fd_directional;
using test::fd_grad;
using test::random_unit;
using test::random_vec;
using test::rel_err;

Eigen::VectorXd state2(double a, double b) {
  Eigen::VectorXd s(2);
  s << a, b;
  return s;
}

TEST(Softmax, LogProbUniform) {
  const SoftmaxTabularPolicy p(1, 4);
  const ParamVector theta = ParamVector::Zero(4);
  EXPECT_NEAR(p.log_prob(theta, 0, 2), std::log(0.25), 1e-15);
}

TEST(Softmax, ProbsSumToOneAndPositive) {
  const SoftmaxTabularPolicy p(3, 5);
  RngStream rng(1, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const ParamVector theta = random_vec(p.dim(), 3.0, rng);
    for (int s = 0; s < 3; ++s) {
      const Eigen::VectorXd probs = p.action_probs(theta, s);
      EXPECT_NEAR(probs.sum(), 1.0, 1e-12);
      EXPECT_GT(probs.minCoeff(), 0.0);
    }
  }
}

TEST(Softmax, ScoreAtUniform) {
  const SoftmaxTabularPolicy p(2, 2);
  const ParamVector theta = ParamVector::Zero(4);
  const ParamVector g = p.score(theta, 1, 0);
  EXPECT_DOUBLE_EQ(g(0), 0.0);
  EXPECT_DOUBLE_EQ(g(1), 0.0);
  EXPECT_DOUBLE_EQ(g(2), 0.5);   // 1 - 1/2 on (s=1, a=0)
  EXPECT_DOUBLE_EQ(g(3), -0.5);  // -1/2 on (s=1, a=1)
}

TEST(Softmax, NearDeterministicSampling) {
  const SoftmaxTabularPolicy p(1, 2);
  ParamVector theta(2);
  theta << 10.0, -10.0;
  RngStream rng(7, 0);
  int zeros = 0;
  for (int i = 0; i < 10000; ++i) zeros += p.sample_action(theta, 0, rng) == 0;
  EXPECT_GE(zeros / 10000.0, 0.999);
}

TEST(Gaussian, LogProbAtMean) {
  const GaussianLinearPolicy p(FeatureMap::raw(2), 1.0, 1);
  RngStream rng(3, 0);
  const ParamVector theta = random_vec(2, 1.0, rng);
  const Eigen::VectorXd s = state2(0.4, -1.2);
  const Eigen::VectorXd a = p.mean(theta, s);
  EXPECT_NEAR(p.log_prob(theta, s, a), -0.5 * std::log(2.0 * std::numbers::pi), 1e-14);
}

TEST(Gaussian, ScoreVanishesAtMean) {
  const GaussianLinearPolicy p(FeatureMap::raw(2), 0.7, 2);
  RngStream rng(4, 0);
  const ParamVector theta = random_vec(p.dim(), 1.0, rng);
  const Eigen::VectorXd s = state2(1.0, 2.0);
  EXPECT_NEAR(p.score(theta, s, p.mean(theta, s)).norm(), 0.0, 1e-14);
}

TEST(Gaussian, NearDeterministicSamplingAtTinySigma) {
  const GaussianLinearPolicy p(FeatureMap::raw(2), 1e-12, 1);
  RngStream rng(5, 0);
  const ParamVector theta = random_vec(2, 1.0, rng);
  const Eigen::VectorXd s = state2(0.3, 0.9);
  EXPECT_NEAR(p.sample_action(theta, s, rng)(0), p.mean(theta, s)(0), 1e-10);
}

TEST(Gaussian, SampleMeanMatchesCltBound) {
  const double sigma = 0.8;
  const GaussianLinearPolicy p(FeatureMap::raw(2), sigma, 1);
  const ParamVector theta = ParamVector::Zero(2);
  const Eigen::VectorXd s = state2(0.6, -0.2);
  RngStream rng(6, 0);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += p.sample_action(theta, s, rng)(0);
  EXPECT_NEAR(sum / n, 0.0, 3.0 * sigma / std::sqrt(double(n)));
}

TEST(Gaussian, SamplesClippedToBox) {
  const GaussianLinearPolicy p(FeatureMap::raw(1), 5.0, 1, /*action_clip=*/0.5);
  const ParamVector theta = ParamVector::Zero(1);
  Eigen::VectorXd s(1);
  s << 0.0;
  RngStream rng(8, 0);
  for (int i = 0; i < 1000; ++i) {
    const double a = p.sample_action(theta, s, rng)(0);
    EXPECT_LE(std::abs(a), 0.5);
  }
}

TEST(Cauchy, LogProbAtMode) {
  const CauchyLinearPolicy p(FeatureMap::raw(2), 1.0, 1);
  RngStream rng(9, 0);
  const ParamVector theta = random_vec(2, 1.0, rng);
  const Eigen::VectorXd s = state2(0.1, 0.2);
  EXPECT_NEAR(p.log_prob(theta, s, p.mean(theta, s)), -std::log(std::numbers::pi), 1e-14);
}

// Score equals the finite difference of log_prob for all three classes.
TEST(AllPolicies, ScoreMatchesFiniteDifference) {
  RngStream rng(100, 0);
  const double tol = 1e-6;

  const SoftmaxTabularPolicy sm(2, 3);
  for (int trial = 0; trial < 20; ++trial) {
    const ParamVector theta = random_vec(sm.dim(), 1.0, rng);
    const int s = trial % 2, a = trial % 3;
    const double h = 1e-6 * (1.0 + theta.norm());
    const ParamVector fd =
        fd_grad([&](const ParamVector& th) { return sm.log_prob(th, s, a); }, theta, h);
    EXPECT_LT(rel_err(sm.score(theta, s, a), fd), tol);
  }

  const GaussianLinearPolicy gp(FeatureMap::bounded_tanh(2), 0.6, 2);
  const CauchyLinearPolicy cp(FeatureMap::bounded_tanh(2), 0.6, 2);
  for (int trial = 0; trial < 20; ++trial) {
    const ParamVector theta_g = random_vec(gp.dim(), 0.8, rng);
    const Eigen::VectorXd s = random_vec(2, 1.0, rng);
    const Eigen::VectorXd a = random_vec(2, 1.0, rng);
    const double h = 1e-6 * (1.0 + theta_g.norm());
    const ParamVector fd_g =
        fd_grad([&](const ParamVector& th) { return gp.log_prob(th, s, a); }, theta_g, h);
    EXPECT_LT(rel_err(gp.score(theta_g, s, a), fd_g), tol);
    const ParamVector fd_c =
        fd_grad([&](const ParamVector& th) { return cp.log_prob(th, s, a); }, theta_g, h);
    EXPECT_LT(rel_err(cp.score(theta_g, s, a), fd_c), tol);
  }
}

// score_hessian_vec equals the finite difference of score along u.
TEST(AllPolicies, HessianVecMatchesFiniteDifferenceOfScore) {
  RngStream rng(200, 0);
  const double tol = 1e-5;

  const SoftmaxTabularPolicy sm(2, 3);
  const GaussianLinearPolicy gp(FeatureMap::bounded_tanh(2), 0.6, 2);
  const CauchyLinearPolicy cp(FeatureMap::bounded_tanh(2), 0.6, 2);

  for (int trial = 0; trial < 20; ++trial) {
    {
      const ParamVector theta = random_vec(sm.dim(), 1.0, rng);
      const ParamVector u = random_unit(sm.dim(), rng);
      const int s = trial % 2, a = trial % 3;
      const ParamVector fd = fd_directional(
          [&](const ParamVector& th) { return sm.score(th, s, a); }, theta, u, 1e-6);
      EXPECT_LT(rel_err(sm.score_hessian_vec(theta, s, a, u), fd, 1e-8), tol);
    }
    {
      const ParamVector theta = random_vec(gp.dim(), 0.8, rng);
      const ParamVector u = random_unit(gp.dim(), rng);
      const Eigen::VectorXd s = random_vec(2,  1.0, rng);
      const Eigen::VectorXd a = random_vec(2, 1.0, rng);
      const ParamVector fd_g = fd_directional(
          [&](const ParamVector& th) { return gp.score(th, s, a); }, theta, u, 1e-6);
      EXPECT_LT(rel_err(gp.score_hessian_vec(theta, s, a, u), fd_g, 1e-8), tol);
      const ParamVector fd_c = fd_directional(
          [&](const ParamVector& th) { return cp.score(th, s, a); }, theta, u, 1e-6);
      EXPECT_LT(rel_err(cp.score_hessian_vec(theta, s, a, u), fd_c, 1e-8), tol);
    }
  }
}

TEST(AllPolicies, HessianVecLinearInU) {
  const CauchyLinearPolicy cp(FeatureMap::bounded_tanh(2), 0.6, 1);
  RngStream rng(300, 0);
  const ParamVector theta = random_vec(cp.dim(), 1.0, rng);
  const Eigen::VectorXd s = random_vec(2, 1.0, rng);
  const Eigen::VectorXd a = random_vec(1, 1.0, rng);
  EXPECT_DOUBLE_EQ(cp.score_hessian_vec(theta, s, a, ParamVector::Zero(cp.dim())).norm(), 0.0);
}

TEST(Gaussian, HessianVecAlongFeatureDirection) {
  const double sigma = 0.9;
  const GaussianLinearPolicy gp(FeatureMap::raw(2), sigma, 1);
  RngStream rng(301, 0);
  const ParamVector theta = random_vec(2, 1.0, rng);
  const Eigen::VectorXd s = state2(0.7, -0.4);
  const Eigen::VectorXd a = random_vec(1, 1.0, rng);
  const ParamVector got = gp.score_hessian_vec(theta, s, a, s);  // u = phi(s) (raw features)
  const ParamVector want = -(s.squaredNorm() / (sigma * sigma)) * s;
  EXPECT_LT(rel_err(got, want), 1e-12);
}

TEST(Cauchy, ScoreNormWithinBound) {
  const double sigma = 0.5;
  const CauchyLinearPolicy cp(FeatureMap::bounded_tanh(3), sigma, 1);
  const double bound = *policy_bounds(cp).M_g;
  EXPECT_DOUBLE_EQ(bound, std::sqrt(3.0) / sigma);
  RngStream rng(400, 0);
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const ParamVector theta = random_vec(cp.dim(), 2.0, rng);
    const Eigen::VectorXd s = random_vec(3, 2.0, rng);
    const Eigen::VectorXd a = random_vec(1, 5.0, rng);
    worst = std::max(worst, cp.score(theta, s, a).norm());
  }
  EXPECT_LE(worst, bound);
}

TEST(Cauchy, HessianNormWithinTwoDSquared) {
  // The attained supremum of |hess log pi| is 2 D^2 / sigma^2 (at the mode).
  const double sigma = 0.5;
  const CauchyLinearPolicy cp(FeatureMap::bounded_tanh(2), sigma, 1);
  const double bound = 2.0 * 2.0 / (sigma * sigma);
  RngStream rng(401, 0);
  double worst = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const ParamVector theta = random_vec(cp.dim(), 1.0, rng);
    const Eigen::VectorXd s = random_vec(2, 2.0, rng);
    Eigen::VectorXd a(1);
    a << (i % 5 == 0 ? cp.mean(theta, s)(0) : rng.normal());  // include the mode
    const Eigen::VectorXd phi = s.array().tanh().matrix();
    if (phi.norm() == 0.0) continue;
    const ParamVector u = phi / phi.norm();
    worst = std::max(worst, cp.score_hessian_vec(theta, s, a, u).norm());
  }
  EXPECT_LE(worst, bound + 1e-12);
  EXPECT_GT(worst, 1.5 * 2.0 / (sigma * sigma));  // the paper-style 3/2 factor is exceeded
}

TEST(PolicyBounds, CauchyClosedForms) {
  {
    FeatureMap f = FeatureMap::bounded_tanh(1);  // D = 1
    const CauchyLinearPolicy cp(f, 1.0, 1);
    const PolicyBounds b = policy_bounds(cp);
    EXPECT_DOUBLE_EQ(*b.M_g, 1.0);
    EXPECT_DOUBLE_EQ(b.M_h, 1.5);
    EXPECT_DOUBLE_EQ(b.l_2, 4.0);
  }
  {
    FeatureMap f = FeatureMap::bounded_tanh(4);  // D = 2
    const CauchyLinearPolicy cp(f, 1.0, 1);
    const PolicyBounds b = policy_bounds(cp);
    EXPECT_DOUBLE_EQ(*b.M_g, 2.0);
    EXPECT_DOUBLE_EQ(b.M_h, 6.0);
    EXPECT_DOUBLE_EQ(b.l_2, 32.0);
  }
}

TEST(PolicyBounds, SoftmaxScoreBoundHoldsNumerically) {
  const SoftmaxTabularPolicy p(2, 4);
  const PolicyBounds b = policy_bounds(p);
  EXPECT_DOUBLE_EQ(*b.M_g, std::numbers::sqrt2);
  RngStream rng(500, 0);
  double worst_score = 0.0, worst_hess = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const ParamVector theta = random_vec(p.dim(), 4.0, rng);
    const int s = i % 2;
    const Eigen::VectorXd probs = p.action_probs(theta, s);
    for (int a = 0; a < 4; ++a)
      worst_score = std::max(worst_score, p.score(theta, s, a).norm());
    const Matrix h = probs.asDiagonal().toDenseMatrix() - probs * probs.transpose();
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    worst_hess = std::max(worst_hess, es.eigenvalues().cwiseAbs().maxCoeff());
  }
  EXPECT_LE(worst_score * worst_score, 2.0);
  EXPECT_LE(worst_hess, b.M_h);
}

TEST(PolicyBounds, GaussianUnboundedWithoutClip) {
  const GaussianLinearPolicy p(FeatureMap::bounded_tanh(2), 0.5, 1);
  const PolicyBounds b = policy_bounds(p);
  EXPECT_FALSE(b.M_g.has_value());
  EXPECT_TRUE(b.clip_dependent);
  EXPECT_DOUBLE_EQ(b.M_h, 2.0 / 0.25);  // D^2 / sigma^2
  EXPECT_DOUBLE_EQ(b.l_2, 0.0);
}

TEST(PolicyBounds, GaussianClipDependentValue) {
  const double sigma = 0.5, a_max = 1.0, theta_max = 2.0;
  const GaussianLinearPolicy p(FeatureMap::bounded_tanh(2), sigma, 1, a_max, theta_max);
  const PolicyBounds b = policy_bounds(p);
  const double d = std::sqrt(2.0);
  ASSERT_TRUE(b.M_g.has_value());
  EXPECT_DOUBLE_EQ(*b.M_g, (a_max + d * theta_max) * d / (sigma * sigma));
}

TEST(PolicyBounds, RawFeaturesRejected) {
  const GaussianLinearPolicy p(FeatureMap::raw(2), 0.5, 1);
  EXPECT_THROW(policy_bounds(p), std::invalid_argument);
}

TEST(SoftmaxFeaturePolicy, ReducesToTabularWithOneHotFeatures) {
  // psi(s,a) = e_{(s,a)} reproduces the tabular policy exactly.
  const int S = 2, A = 2;
  std::vector<Matrix> feats(S, Matrix::Zero(A, S * A));
  for (int s = 0; s < S; ++s)
    for (int a = 0; a < A; ++a) feats[s](a, s * A + a) = 1.0;
  const SoftmaxFeaturePolicy fp(feats);
  const SoftmaxTabularPolicy tp(S, A);
  RngStream rng(600, 0);
  const ParamVector theta = random_vec(S * A, 1.0, rng);
  for (int s = 0; s < S; ++s) {
    EXPECT_LT((fp.action_probs(theta, s) - tp.action_probs(theta, s)).norm(), 1e-14);
    for (int a = 0; a < A; ++a) {
      EXPECT_NEAR(fp.log_prob(theta, s, a), tp.log_prob(theta, s, a), 1e-14);
      EXPECT_LT((fp.score(theta, s, a) - tp.score(theta, s, a)).norm(), 1e-14);
    }
  }
}

TEST(FeatureMap, BoundsHold) {
  RngStream rng(700, 0);
  const FeatureMap tanh_map = FeatureMap::bounded_tanh(3);
  const FeatureMap fourier = FeatureMap::random_fourier(3, 12, 1.0, 5);
  EXPECT_DOUBLE_EQ(*tanh_map.norm_bound(), std::sqrt(3.0));
  EXPECT_DOUBLE_EQ(*fourier.norm_bound(), std::sqrt(2.0));
  EXPECT_FALSE(FeatureMap::raw(3).norm_bound().has_value());
  for (int i = 0; i < 1000; ++i) {
    const Eigen::VectorXd s = random_vec(3, 10.0, rng);
    EXPECT_LE(tanh_map(s).norm(), *tanh_map.norm_bound() + 1e-12);
    EXPECT_LE(fourier(s).norm(), *fourier.norm_bound() + 1e-12);
  }
}

}  // namespace
}  // namespace pg
