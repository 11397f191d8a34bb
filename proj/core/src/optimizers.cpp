#include "pg/optimizers.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace pg {
namespace {

using Clock = std::chrono::steady_clock;

struct BatchGrad {
  ParamVector mean;
  SampleStats stats;
};

BatchGrad batch_grad(SampleModel& model, const ParamVector& theta, int n, RngStream& rng) {
  BatchGrad out;
  out.mean = ParamVector::Zero(theta.size());
  for (int i = 0; i < n; ++i) {
    SampleStats s;
    out.mean += model.grad_sample(theta, rng, &s);
    out.stats.undiscounted_return += s.undiscounted_return;
    out.stats.discounted_return += s.discounted_return;
  }
  out.mean /= n;
  out.stats.undiscounted_return /= n;
  out.stats.discounted_return /= n;
  return out;
}

}  // namespace

int samples_per_iteration(Algorithm alg) {
  return (alg == Algorithm::kHarpg || alg == Algorithm::kNHarpg) ? 2 : 1;
}

RunResult run_optimizer(Algorithm alg, SampleModel& model, const ScheduleSpec& schedule,
                        const ParamVector& theta0, int batch_size, std::uint64_t seed,
                        std::uint64_t stream_id, const IterationObserver& observe) {
  validate(schedule);
  if (schedule.kind != alg) throw std::invalid_argument("run_optimizer: schedule kind mismatch");
  if (schedule.T < 2) throw std::invalid_argument("run_optimizer: T must be >= 2");
  if (batch_size < 1) throw std::invalid_argument("run_optimizer: batch_size must be >= 1");
  if (theta0.size() != model.dim()) throw std::invalid_argument("run_optimizer: theta0 dim");
  if (!all_finite(theta0)) throw std::invalid_argument("run_optimizer: theta0 must be finite");

  RngStream rng(seed, stream_id);
  const int per_iter = samples_per_iteration(alg) * batch_size;

  RunResult out;
  out.records.reserve(schedule.T);
  ParamVector theta = theta0;
  ParamVector theta_prev = theta0;  // theta_1 = theta_0

  auto record_value = [&](const ParamVector& th, const SampleStats& stats, IterationRecord& rec) {
    if (const auto v = model.exact_value(th)) {
      rec.mean_return = *v;
      rec.discounted_return = *v;
    } else {
      rec.mean_return = stats.undiscounted_return;
      rec.discounted_return = stats.discounted_return;
    }
  };

  // Iteration 0: d_0 from a full iteration budget of fresh gradients at theta_0.
  auto t_start = Clock::now();
  BatchGrad init = batch_grad(model, theta, per_iter, rng);
  out.total_samples += per_iter;
  ParamVector d = init.mean;
  {
    IterationRecord rec;
    rec.t = 0;
    rec.system_probes = out.total_samples * model.probes_per_sample();
    record_value(theta, init.stats, rec);
    rec.step_len = 0.0;
    rec.dir_norm = d.norm();
    rec.grad_norm_est = rec.dir_norm;
    rec.seed = seed;
    rec.wall_time_s = std::chrono::duration<double>(Clock::now() - t_start).count();
    out.records.push_back(rec);
    if (observe) observe(theta, d, out.records.back());
  }

  for (int t = 1; t < schedule.T; ++t) {
    t_start = Clock::now();
    const double gamma_t = step_size(schedule, t);
    const double eta_t = momentum(schedule, t);
    IterationRecord rec;
    rec.t = t;
    rec.gamma_t = gamma_t;
    rec.eta_t = eta_t;
    rec.seed = seed;

    ParamVector step;
    switch (alg) {
      case Algorithm::kVanillaPg: {
        BatchGrad g = batch_grad(model, theta, batch_size, rng);
        out.total_samples += batch_size;
        d = g.mean;
        record_value(theta, g.stats, rec);
        rec.grad_norm_est = d.norm();
        step = gamma_t * d;
        break;
      }
      case Algorithm::kNMpg: {
        BatchGrad g = batch_grad(model, theta, batch_size, rng);
        out.total_samples += batch_size;
        d = (1.0 - eta_t) * d + eta_t * g.mean;
        record_value(theta, g.stats, rec);
        rec.grad_norm_est = g.mean.norm();
        const double n = d.norm();
        step = n > 0.0 ? ParamVector(gamma_t * (d / n)) : ParamVector::Zero(theta.size());
        break;
      }
      case Algorithm::kNPgIgt:
      case Algorithm::kNPgIgtFosp: {
        if (eta_t == 0.0) throw std::invalid_argument("n_pg_igt: eta_t must be nonzero");
        const ParamVector lookahead = theta + ((1.0 - eta_t) / eta_t) * (theta - theta_prev);
        rec.lookahead_rel_err =
            (eta_t * lookahead + (1.0 - eta_t) * theta_prev - theta).norm() /
            (1.0 + theta.norm());
        BatchGrad g = batch_grad(model, lookahead, batch_size, rng);
        out.total_samples += batch_size;
        d = (1.0 - eta_t) * d + eta_t * g.mean;
        record_value(theta, g.stats, rec);
        rec.grad_norm_est = g.mean.norm();
        const double n = d.norm();
        step = n > 0.0 ? ParamVector(gamma_t * (d / n)) : ParamVector::Zero(theta.size());
        break;
      }
      case Algorithm::kHarpg:
      case Algorithm::kNHarpg: {
        const double q = rng.uniform();
        rec.q = q;
        const ParamVector theta_hat = q * theta + (1.0 - q) * theta_prev;
        const ParamVector delta = theta - theta_prev;
        ParamVector v = ParamVector::Zero(theta.size());
        for (int i = 0; i < batch_size; ++i) v += model.hvp_sample(theta_hat, delta, rng);
        v /= batch_size;
        BatchGrad g = batch_grad(model, theta, batch_size, rng);
        out.total_samples += 2 * batch_size;
        d = (1.0 - eta_t) * (d + v) + eta_t * g.mean;
        record_value(theta, g.stats, rec);
        rec.grad_norm_est = g.mean.norm();
        if (alg == Algorithm::kHarpg) {
          step = gamma_t * d;
        } else {
          const double n = d.norm();
          step = n > 0.0 ? ParamVector(gamma_t * (d / n)) : ParamVector::Zero(theta.size());
        }
        break;
      }
    }

    rec.step_len = step.norm();
    rec.dir_norm = d.norm();
    rec.system_probes = out.total_samples * model.probes_per_sample();
    rec.wall_time_s = std::chrono::duration<double>(Clock::now() - t_start).count();

    const ParamVector theta_next = theta + step;
    if (!all_finite(theta_next) || !all_finite(d)) {
      out.records.push_back(rec);
      out.aborted = true;
      out.abort_reason = "non-finite iterate at t=" + std::to_string(t);
      out.theta_final = theta;
      return out;
    }
    out.records.push_back(rec);
    if (observe) observe(theta, d, out.records.back());
    theta_prev = theta;
    theta = theta_next;
  }

  out.theta_final = theta;
  return out;
}

}  // namespace pg
