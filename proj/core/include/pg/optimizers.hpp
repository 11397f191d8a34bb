#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pg/estimators.hpp"
#include "pg/rng.hpp"
#include "pg/schedule.hpp"
#include "pg/synth.hpp"
#include "pg/types.hpp"

namespace pg {

/// Per-sample telemetry accumulated while estimating a gradient.
struct SampleStats {
  double undiscounted_return = 0.0;
  double discounted_return = 0.0;
};

/// What an optimization loop needs from the world: stochastic gradients,
/// stochastic Hessian-vector products, and a probe-count unit. Implemented
/// by trajectory sampling on an environment or by a synthetic direct
/// oracle; the steppers never know which.
class SampleModel {
 public:
  virtual ~SampleModel() = default;
  virtual int dim() const = 0;
  virtual ParamVector grad_sample(const ParamVector& theta, RngStream& rng,
                                  SampleStats* stats) = 0;
  virtual ParamVector hvp_sample(const ParamVector& theta, const ParamVector& u,
                                 RngStream& rng) = 0;
  /// State transitions consumed by one sample (H for rollouts, 1 per oracle call).
  virtual std::int64_t probes_per_sample() const = 0;
  /// Exact J(theta) when the model knows it (synthetic oracles).
  virtual std::optional<double> exact_value(const ParamVector&) const { return std::nullopt; }
};

/// Trajectory-sampling model over (env, policy) with a fixed horizon.
template <class Env, class Policy>
class TrajectoryModel final : public SampleModel {
 public:
  TrajectoryModel(const Env& env, const Policy& policy, double discount, int H)
      : env_(env), policy_(policy), discount_(discount), H_(H) {}

  int dim() const override { return policy_.dim(); }
  std::int64_t probes_per_sample() const override { return H_; }
  int horizon() const { return H_; }

  ParamVector grad_sample(const ParamVector& theta, RngStream& rng,
                          SampleStats* stats) override {
    const auto traj = sample_trajectory(env_, policy_, theta, H_, rng);
    if (stats) {
      stats->undiscounted_return = traj.rewards.sum();
      stats->discounted_return = 0.0;
      double scale = 1.0;
      for (int t = 0; t < H_; ++t) {
        stats->discounted_return += scale * traj.rewards(t);
        scale *= discount_;
      }
    }
    return grad_estimate(traj, policy_, theta, discount_);
  }

  ParamVector hvp_sample(const ParamVector& theta, const ParamVector& u,
                         RngStream& rng) override {
    const auto traj = sample_trajectory(env_, policy_, theta, H_, rng);
    return hvp_estimate(traj, policy_, theta, discount_, u);
  }

 private:
  const Env& env_;
  const Policy& policy_;
  double discount_;
  int H_;
};

/// Direct-oracle model around a synthetic problem; "probes" count oracle calls.
class SynthModel final : public SampleModel {
 public:
  explicit SynthModel(const SynthProblem& problem) : problem_(problem) {}

  int dim() const override { return problem_.dim(); }
  std::int64_t probes_per_sample() const override { return 1; }

  ParamVector grad_sample(const ParamVector& theta, RngStream& rng,
                          SampleStats* stats) override {
    if (stats) {
      const double v = problem_.value(theta);
      stats->undiscounted_return = v;
      stats->discounted_return = v;
    }
    return problem_.grad_sample(theta, rng);
  }

  ParamVector hvp_sample(const ParamVector& theta, const ParamVector& u,
                         RngStream& rng) override {
    return problem_.hvp_sample(theta, u, rng);
  }

  std::optional<double> exact_value(const ParamVector& theta) const override {
    return problem_.value(theta);
  }

 private:
  const SynthProblem& problem_;
};

/// One row of per-iteration telemetry. The CSV surface serializes the first
/// seven fields; the rest are in-memory diagnostics.
struct IterationRecord {
  int t = 0;
  std::int64_t system_probes = 0;  // cumulative state transitions
  double mean_return = 0.0;        // undiscounted batch mean (exact J for oracles)
  double discounted_return = 0.0;  // J_H Monte Carlo estimate
  double step_len = 0.0;           // |theta_{t+1} - theta_t|
  double dir_norm = 0.0;           // |d_t|
  double grad_norm_est = 0.0;      // |batch-mean fresh gradient|
  double wall_time_s = 0.0;
  std::uint64_t seed = 0;
  // Diagnostics (not serialized).
  double gamma_t = std::numeric_limits<double>::quiet_NaN();
  double eta_t = std::numeric_limits<double>::quiet_NaN();
  double q = std::numeric_limits<double>::quiet_NaN();  // HARPG segment draw
  double lookahead_rel_err = std::numeric_limits<double>::quiet_NaN();
};

struct RunResult {
  std::vector<IterationRecord> records;
  ParamVector theta_final;
  bool aborted = false;
  std::string abort_reason;
  std::int64_t total_samples = 0;  // gradient + hvp samples drawn
};

/// Trajectories (or oracle calls) consumed per iteration per batch unit:
/// 2 for the Hessian-aided methods, 1 otherwise.
int samples_per_iteration(Algorithm alg);

/// Observer invoked once per iteration with the base iterate theta_t and
/// the momentum direction d_t that produced the step recorded in rec.
using IterationObserver =
    std::function<void(const ParamVector& theta, const ParamVector& d, const IterationRecord& rec)>;

/// Run one seeded optimization of `schedule.T` iterations from theta0.
///
/// Iteration 0 initializes theta_1 = theta_0 and d_0 = mean of a full
/// iteration budget of gradient samples at theta_0; iterations 1..T-1
/// follow the respective update rule. Identical (seed, stream) inputs give
/// bit-identical records. Aborts (recording the reason) if theta leaves
/// the finite range.
RunResult run_optimizer(Algorithm alg, SampleModel& model, const ScheduleSpec& schedule,
                        const ParamVector& theta0, int batch_size, std::uint64_t seed,
                        std::uint64_t stream_id, const IterationObserver& observe = nullptr);

}  // namespace pg
