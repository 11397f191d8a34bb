#include <benchmark/benchmark.h>

#include "pg/envs.hpp"
#include "pg/estimators.hpp"
#include "pg/oracle.hpp"
#include "pg/policies.hpp"
#include "pg/schedule.hpp"

namespace {

using namespace pg;

void BM_GradEstimate(benchmark::State& state) {
  const int H = static_cast<int>(state.range(0));
  const PointMassEnv env = PointMassEnv::standard(2);
  const GaussianLinearPolicy policy(FeatureMap::bounded_tanh(2), 0.5, 2, env.action_clip());
  RngStream rng(1, 0);
  const ParamVector theta = ParamVector::Zero(policy.dim());
  const auto traj = sample_trajectory(env, policy, theta, H, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(grad_estimate(traj, policy, theta, 0.99));
  }
  state.SetItemsProcessed(state.iterations() * H);
}
BENCHMARK(BM_GradEstimate)->Arg(100)->Arg(500)->Arg(1000);

void BM_HvpEstimate(benchmark::State& state) {
  const int H = static_cast<int>(state.range(0));
  const PointMassEnv env = PointMassEnv::standard(2);
  const GaussianLinearPolicy policy(FeatureMap::bounded_tanh(2), 0.5, 2, env.action_clip());
  RngStream rng(2, 0);
  const ParamVector theta = ParamVector::Zero(policy.dim());
  const auto traj = sample_trajectory(env, policy, theta, H, rng);
  ParamVector u = ParamVector::Ones(policy.dim());
  u /= u.norm();
  for (auto _ : state) {
    benchmark::DoNotOptimize(hvp_estimate(traj, policy, theta, 0.99, u));
  }
  state.SetItemsProcessed(state.iterations() * H);
}
BENCHMARK(BM_HvpEstimate)->Arg(100)->Arg(500)->Arg(1000);

void BM_SampleTrajectory(benchmark::State& state) {
  const int H = static_cast<int>(state.range(0));
  const PointMassEnv env = PointMassEnv::standard(2);
  const GaussianLinearPolicy policy(FeatureMap::bounded_tanh(2), 0.5, 2, env.action_clip());
  RngStream rng(3, 0);
  const ParamVector theta = ParamVector::Zero(policy.dim());
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_trajectory(env, policy, theta, H, rng));
  }
  state.SetItemsProcessed(state.iterations() * H);
}
BENCHMARK(BM_SampleTrajectory)->Arg(100)->Arg(500);

void BM_ExactGradDp(benchmark::State& state) {
  const int H = static_cast<int>(state.range(0));
  const FiniteMdp mdp = FiniteMdp::five_state_walk(0.9);
  const SoftmaxTabularPolicy policy(5, 2);
  RngStream rng(4, 0);
  ParamVector theta(policy.dim());
  for (int i = 0; i < theta.size(); ++i) theta(i) = rng.normal();
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle::exact_grad_jh_dp(mdp, policy, theta, H));
  }
}
BENCHMARK(BM_ExactGradDp)->Arg(10)->Arg(60);

void BM_ScheduleEval(benchmark::State& state) {
  ScheduleSpec spec;
  spec.kind = Algorithm::kNPgIgt;
  spec.T = 1000000;
  spec.discount = 0.99;
  int t = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(step_size(spec, t));
    benchmark::DoNotOptimize(momentum(spec, t));
    t = (t + 1) % spec.T;
  }
}
BENCHMARK(BM_ScheduleEval);

}  // namespace

BENCHMARK_MAIN();
