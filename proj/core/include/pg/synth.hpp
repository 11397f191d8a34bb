#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pg/rng.hpp"
#include "pg/types.hpp"

namespace pg {

/// Direct-oracle stochastic optimization problem with known optimum and
/// known gradient-domination constants, used to check convergence-rate
/// exponents without MDP sampling noise.
///
/// Quadratic(mu):  J(theta) = J* - (mu/2)|theta|^2, the equality case
///   |grad J| = sqrt(2 mu (J* - J)) of weak gradient domination.
/// SmoothedNorm(mu, eps_floor): J(theta) = J* - m (1 - exp(-|theta|^2 / (2 w^2)))
///   with m = eps_floor / sqrt(2 mu). The gap is bounded by m, so
///   eps_floor + |grad J| >= sqrt(2 mu) (J* - J) holds everywhere, with the
///   floor approached on the flat tail where the gradient vanishes.
///
/// Gradient samples add isotropic Gaussian noise with per-coordinate scale
/// sigma (second moment d sigma^2); Hessian-vector samples scale the noise
/// by |u| so the zero vector stays exact.
class SynthProblem {
 public:
  enum class Kind { kQuadratic, kSmoothedNorm };

  static SynthProblem quadratic(double mu, int dim, double grad_noise, double hvp_noise,
                                double j_star = 0.0);
  static SynthProblem smoothed_norm(double mu, double eps_floor, int dim, double grad_noise,
                                    double hvp_noise, double j_star = 0.0, double width = 1.0);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  double mu() const { return mu_; }
  double j_star() const { return j_star_; }
  double grad_noise() const { return grad_noise_; }

  double value(const ParamVector& theta) const;
  ParamVector grad(const ParamVector& theta) const;
  ParamVector hvp(const ParamVector& theta, const ParamVector& u) const;

  ParamVector grad_sample(const ParamVector& theta, RngStream& rng) const;
  ParamVector hvp_sample(const ParamVector& theta, const ParamVector& u, RngStream& rng) const;

 private:
  SynthProblem() = default;

  Kind kind_ = Kind::kQuadratic;
  int dim_ = 1;
  double mu_ = 1.0;
  double j_star_ = 0.0;
  double grad_noise_ = 0.0;
  double hvp_noise_ = 0.0;
  double plateau_ = 0.0;  // m, smoothed-norm only
  double width_ = 1.0;    // w, smoothed-norm only
};

/// Least-squares slope of log(delta_t) against log(t) over t in
/// [window_lo, window_hi), per seed, then the median across seeds.
/// Throws std::invalid_argument when any delta in a window is <= 0.
double fit_rate(const std::vector<std::vector<double>>& suboptimality_per_seed, int window_lo,
                int window_hi);

}  // namespace pg
