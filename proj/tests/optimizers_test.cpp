#include "pg/optimizers.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "pg/envs.hpp"
#include "pg/policies.hpp"
#include "pg/runio.hpp"
#include "testutil.hpp"

namespace pg {
namespace {

using test::rel_err;

// Deterministic model handing out fixed gradient/hvp values and logging the
// points it was queried at.
class MockModel final : public SampleModel {
 public:
  MockModel(int dim, ParamVector grad_value, ParamVector hvp_value)
      : dim_(dim), grad_(std::move(grad_value)), hvp_(std::move(hvp_value)) {}

  int dim() const override { return dim_; }
  std::int64_t probes_per_sample() const override { return 1; }

  ParamVector grad_sample(const ParamVector& theta, RngStream&, SampleStats* stats) override {
    grad_points.push_back(theta);
    if (stats) {
      stats->undiscounted_return = 1.0;
      stats->discounted_return = 0.5;
    }
    return grad_;
  }

  ParamVector hvp_sample(const ParamVector& theta, const ParamVector& u, RngStream&) override {
    hvp_points.push_back(theta);
    hvp_dirs.push_back(u);
    return hvp_;
  }

  std::vector<ParamVector> grad_points, hvp_points, hvp_dirs;

 private:
  int dim_;
  ParamVector grad_, hvp_;
};

ScheduleSpec make_spec(Algorithm alg, int T, std::optional<double> gamma0 = std::nullopt) {
  ScheduleSpec s;
  s.kind = alg;
  s.T = T;
  s.discount = 0.9;
  s.M_g = 1.0;
  s.mu_F = 1.0;
  s.gamma0 = gamma0;
  return s;
}

TEST(RunOptimizer, VanillaSingleStepArithmetic) {
  // gamma_1 = gamma_0 (2/3)^{2/3}; pick gamma_0 so gamma_1 = 0.5, g = 2: step to 1.
  const double gamma0 = 0.5 * std::pow(1.5, 2.0 / 3.0);
  ParamVector g(1);
  g << 2.0;
  MockModel model(1, g, ParamVector::Zero(1));
  const RunResult res = run_optimizer(Algorithm::kVanillaPg, model,
                                      make_spec(Algorithm::kVanillaPg, 2, gamma0),
                                      ParamVector::Zero(1), 1, 0, 0);
  EXPECT_NEAR(res.theta_final(0), 1.0, 1e-15);
}

TEST(RunOptimizer, VanillaZeroGradientHoldsPosition) {
  MockModel model(3, ParamVector::Zero(3), ParamVector::Zero(3));
  ParamVector theta0(3);
  theta0 << 1.0, -2.0, 3.0;
  const RunResult res = run_optimizer(Algorithm::kVanillaPg, model,
                                      make_spec(Algorithm::kVanillaPg, 5, 0.1), theta0, 1, 0, 0);
  EXPECT_DOUBLE_EQ((res.theta_final - theta0).norm(), 0.0);
}

TEST(RunOptimizer, VanillaContractsOnQuadratic) {
  // Noiseless J = -(mu/2)|theta|^2: theta_{t+1} = (1 - gamma_t mu) theta_t.
  const double mu = 1.0;
  const SynthProblem problem = SynthProblem::quadratic(mu, 1, 0.0, 0.0);
  SynthModel model(problem);
  const ScheduleSpec spec = make_spec(Algorithm::kVanillaPg, 50, 0.3);
  ParamVector theta0(1);
  theta0 << 1.0;
  const RunResult res =
      run_optimizer(Algorithm::kVanillaPg, model, spec, theta0, 1, 0, 0);
  double want = 1.0;
  for (int t = 1; t < 50; ++t) want *= 1.0 - step_size(spec, t) * mu;
  EXPECT_NEAR(res.theta_final(0), want, 1e-12);
}

TEST(RunOptimizer, NMpgMomentumOfConstantGradientIsConstant) {
  ParamVector g(2);
  g << 3.0, -4.0;
  MockModel model(2, g, ParamVector::Zero(2));
  const RunResult res = run_optimizer(Algorithm::kNMpg, model,
                                      make_spec(Algorithm::kNMpg, 10), ParamVector::Zero(2), 1,
                                      0, 0,
                                      [&](const ParamVector&, const ParamVector& d,
                                          const IterationRecord& rec) {
                                        // Convex combinations of a constant stay constant.
                                        EXPECT_LT((d - g).norm(), 1e-12);
                                        if (rec.t >= 1) {
                                          EXPECT_NEAR(rec.step_len, rec.gamma_t, 1e-14);
                                          EXPECT_NEAR(rec.dir_norm, 5.0, 1e-12);
                                        }
                                      });
  EXPECT_FALSE(res.aborted);
}

TEST(RunOptimizer, NMpgZeroDirectionHoldsPosition) {
  MockModel model(2, ParamVector::Zero(2), ParamVector::Zero(2));
  ParamVector theta0(2);
  theta0 << 0.5, 0.5;
  const RunResult res = run_optimizer(Algorithm::kNMpg, model, make_spec(Algorithm::kNMpg, 8),
                                      theta0, 1, 0, 0);
  EXPECT_FALSE(res.aborted);
  EXPECT_DOUBLE_EQ((res.theta_final - theta0).norm(), 0.0);
  for (const auto& r : res.records) EXPECT_DOUBLE_EQ(r.step_len, 0.0);
}

TEST(RunOptimizer, IgtSamplesAtLookaheadPoint) {
  ParamVector g(2);
  g << 1.0, 0.0;
  MockModel model(2, g, ParamVector::Zero(2));
  const ScheduleSpec spec = make_spec(Algorithm::kNPgIgt, 4);
  const RunResult res =
      run_optimizer(Algorithm::kNPgIgt, model, spec, ParamVector::Zero(2), 1, 0, 0);
  EXPECT_FALSE(res.aborted);
  // model.grad_points: [theta_0 (init), lookahead_1, lookahead_2, lookahead_3].
  ASSERT_EQ(model.grad_points.size(), 4u);
  // t = 1: theta_1 = theta_0, so the lookahead collapses to theta_1.
  EXPECT_DOUBLE_EQ((model.grad_points[1] - ParamVector::Zero(2)).norm(), 0.0);
  // t = 2: theta_tilde = theta_2 + ((1-eta_2)/eta_2)(theta_2 - theta_1).
  const double eta2 = momentum(spec, 2);
  const double gamma1 = step_size(spec, 1);
  ParamVector theta2(2);
  theta2 << gamma1, 0.0;  // one normalized step along e_0
  const ParamVector want = theta2 + ((1.0 - eta2) / eta2) * theta2;
  EXPECT_LT((model.grad_points[2] - want).norm(), 1e-14);
}

TEST(RunOptimizer, HarpgRecursionArithmetic) {
  ParamVector g(1), v(1);
  g << 2.0;
  v << 0.5;
  MockModel model(1, g, v);
  const ScheduleSpec spec = make_spec(Algorithm::kHarpg, 2, 0.1);
  std::vector<double> dir_at_t;
  const RunResult res = run_optimizer(
      Algorithm::kHarpg, model, spec, ParamVector::Zero(1), 1, 0, 0,
      [&](const ParamVector&, const ParamVector& d, const IterationRecord&) {
        dir_at_t.push_back(d(0));
      });
  EXPECT_FALSE(res.aborted);
  // d_0 = g; d_1 = (1-eta_1)(d_0 + v) + eta_1 g with eta_1 = 2/3.
  const double eta1 = momentum(spec, 1);
  ASSERT_EQ(dir_at_t.size(), 2u);
  EXPECT_DOUBLE_EQ(dir_at_t[0], 2.0);
  EXPECT_NEAR(dir_at_t[1], (1.0 - eta1) * (2.0 + 0.5) + eta1 * 2.0, 1e-15);
  // The correction was requested at a point on the segment with direction delta.
  ASSERT_EQ(model.hvp_points.size(), 1u);
  ASSERT_EQ(model.hvp_dirs.size(), 1u);
}

TEST(RunOptimizer, TrajectoryBudgetsAreExact) {
  const std::vector<std::pair<Algorithm, int>> cases = {
      {Algorithm::kVanillaPg, 1}, {Algorithm::kNMpg, 1},   {Algorithm::kNPgIgt, 1},
      {Algorithm::kHarpg, 2},     {Algorithm::kNHarpg, 2},
  };
  for (const auto& [alg, per_iter] : cases) {
    for (int batch : {1, 3}) {
      for (int T : {2, 7}) {
        MockModel model(2, ParamVector::Ones(2), ParamVector::Ones(2));
        const RunResult res = run_optimizer(alg, model, make_spec(alg, T, 0.01),
                                            ParamVector::Zero(2), batch, 0, 0);
        EXPECT_EQ(res.total_samples, std::int64_t(per_iter) * T * batch)
            << algorithm_name(alg) << " batch=" << batch << " T=" << T;
        EXPECT_EQ(res.records.size(), std::size_t(T));
        EXPECT_EQ(res.records.back().system_probes, res.total_samples);
      }
    }
  }
}

TEST(RunOptimizer, HarpgSegmentDrawsRecorded) {
  const SynthProblem problem = SynthProblem::quadratic(1.0, 3, 0.5, 0.5);
  SynthModel model(problem);
  ParamVector theta0(3);
  theta0 << 1.0, 0.0, 0.0;
  const RunResult res = run_optimizer(Algorithm::kNHarpg, model,
                                      make_spec(Algorithm::kNHarpg, 50), theta0, 1, 3, 0);
  for (const auto& r : res.records) {
    if (r.t == 0) continue;
    EXPECT_GE(r.q, 0.0);
    EXPECT_LE(r.q, 1.0);
  }
}

TEST(RunOptimizer, SameSeedGivesIdenticalRecords) {
  const PointMassEnv env = PointMassEnv::standard(2);
  const GaussianLinearPolicy policy(FeatureMap::bounded_tanh(2), 0.5, 2, env.action_clip());
  TrajectoryModel<PointMassEnv, GaussianLinearPolicy> model(env, policy, 0.9, 15);
  const ScheduleSpec spec = make_spec(Algorithm::kNHarpg, 20, 0.05);
  const ParamVector theta0 = ParamVector::Zero(policy.dim());
  const RunResult a = run_optimizer(Algorithm::kNHarpg, model, spec, theta0, 2, 99, 5);
  const RunResult b = run_optimizer(Algorithm::kNHarpg, model, spec, theta0, 2, 99, 5);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].mean_return, b.records[i].mean_return);
    EXPECT_EQ(a.records[i].step_len, b.records[i].step_len);
    EXPECT_EQ(a.records[i].dir_norm, b.records[i].dir_norm);
  }
  EXPECT_DOUBLE_EQ((a.theta_final - b.theta_final).norm(), 0.0);
  // system_probes counts trajectories x horizon: 2 per iter x batch 2 x T 20 x H 15.
  EXPECT_EQ(a.records.back().system_probes, 2 * 2 * 20 * 15);
}

TEST(RunOptimizer, AbortsOnNonFiniteIterate) {
  ParamVector huge(1);
  huge << 1e308;
  MockModel model(1, huge, ParamVector::Zero(1));
  const RunResult res = run_optimizer(Algorithm::kVanillaPg, model,
                                      make_spec(Algorithm::kVanillaPg, 10, 10.0),
                                      ParamVector::Zero(1), 1, 0, 0);
  EXPECT_TRUE(res.aborted);
  EXPECT_NE(res.abort_reason.find("non-finite"), std::string::npos);
  EXPECT_LT(res.records.size(), 10u);
}

TEST(RunOptimizer, RejectsBadArguments) {
  MockModel model(2, ParamVector::Zero(2), ParamVector::Zero(2));
  EXPECT_THROW(run_optimizer(Algorithm::kNMpg, model, make_spec(Algorithm::kNMpg, 1),
                             ParamVector::Zero(2), 1, 0, 0),
               std::invalid_argument);  // T < 2
  EXPECT_THROW(run_optimizer(Algorithm::kNMpg, model, make_spec(Algorithm::kNMpg, 5),
                             ParamVector::Zero(3), 1, 0, 0),
               std::invalid_argument);  // dim mismatch
  EXPECT_THROW(run_optimizer(Algorithm::kNHarpg, model, make_spec(Algorithm::kNMpg, 5),
                             ParamVector::Zero(2), 1, 0, 0),
               std::invalid_argument);  // schedule kind mismatch
}

}  // namespace
}  // namespace pg
