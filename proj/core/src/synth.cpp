#include "pg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pg {

SynthProblem SynthProblem::quadratic(double mu, int dim, double grad_noise, double hvp_noise,
                                     double j_star) {
  if (!(mu > 0.0) || dim < 1) throw std::invalid_argument("SynthProblem: mu > 0, dim >= 1 required");
  SynthProblem p;
  p.kind_ = Kind::kQuadratic;
  p.mu_ = mu;
  p.dim_ = dim;
  p.grad_noise_ = grad_noise;
  p.hvp_noise_ = hvp_noise;
  p.j_star_ = j_star;
  return p;
}

SynthProblem SynthProblem::smoothed_norm(double mu, double eps_floor, int dim, double grad_noise,
                                         double hvp_noise, double j_star, double width) {
  if (!(mu > 0.0) || !(eps_floor > 0.0) || !(width > 0.0) || dim < 1)
    throw std::invalid_argument("SynthProblem: invalid smoothed-norm parameters");
  SynthProblem p;
  p.kind_ = Kind::kSmoothedNorm;
  p.mu_ = mu;
  p.dim_ = dim;
  p.grad_noise_ = grad_noise;
  p.hvp_noise_ = hvp_noise;
  p.j_star_ = j_star;
  p.plateau_ = eps_floor / std::sqrt(2.0 * mu);
  p.width_ = width;
  return p;
}

double SynthProblem::value(const ParamVector& theta) const {
  if (theta.size() != dim_) throw std::invalid_argument("SynthProblem: theta dim");
  const double r2 = theta.squaredNorm();
  switch (kind_) {
    case Kind::kQuadratic:
      return j_star_ - 0.5 * mu_ * r2;
    case Kind::kSmoothedNorm:
      return j_star_ - plateau_ * (1.0 - std::exp(-r2 / (2.0 * width_ * width_)));
  }
  return j_star_;
}

ParamVector SynthProblem::grad(const ParamVector& theta) const {
  if (theta.size() != dim_) throw std::invalid_argument("SynthProblem: theta dim");
  switch (kind_) {
    case Kind::kQuadratic:
      return -mu_ * theta;
    case Kind::kSmoothedNorm: {
      const double w2 = width_ * width_;
      const double e = std::exp(-theta.squaredNorm() / (2.0 * w2));
      return -(plateau_ / w2) * e * theta;
    }
  }
  return ParamVector::Zero(dim_);
}

ParamVector SynthProblem::hvp(const ParamVector& theta, const ParamVector& u) const {
  if (theta.size() != dim_ || u.size() != dim_)
    throw std::invalid_argument("SynthProblem: dimension mismatch");
  switch (kind_) {
    case Kind::kQuadratic:
      return -mu_ * u;
    case Kind::kSmoothedNorm: {
      const double w2 = width_ * width_;
      const double e = std::exp(-theta.squaredNorm() / (2.0 * w2));
      // hess = -(m/w^2) e (I - theta theta^T / w^2)
      return -(plateau_ / w2) * e * (u - theta * (theta.dot(u) / w2));
    }
  }
  return ParamVector::Zero(dim_);
}

ParamVector SynthProblem::grad_sample(const ParamVector& theta, RngStream& rng) const {
  ParamVector g = grad(theta);
  if (grad_noise_ > 0.0)
    for (int i = 0; i < dim_; ++i) g(i) += grad_noise_ * rng.normal();
  return g;
}

ParamVector SynthProblem::hvp_sample(const ParamVector& theta, const ParamVector& u,
                                     RngStream& rng) const {
  ParamVector h = hvp(theta, u);
  if (hvp_noise_ > 0.0) {
    const double scale = hvp_noise_ * u.norm();
    if (scale > 0.0)
      for (int i = 0; i < dim_; ++i) h(i) += scale * rng.normal();
  }
  return h;
}

double fit_rate(const std::vector<std::vector<double>>& suboptimality_per_seed, int window_lo,
                int window_hi) {
  if (suboptimality_per_seed.empty()) throw std::invalid_argument("fit_rate: no seeds");
  if (window_lo < 1 || window_hi <= window_lo) throw std::invalid_argument("fit_rate: bad window");
  std::vector<double> slopes;
  slopes.reserve(suboptimality_per_seed.size());
  for (const auto& seq : suboptimality_per_seed) {
    const int hi = std::min<int>(window_hi, static_cast<int>(seq.size()));
    if (window_lo >= hi) throw std::invalid_argument("fit_rate: window beyond sequence");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int t = window_lo; t < hi; ++t) {
      if (!(seq[t] > 0.0))
        throw std::invalid_argument("fit_rate: nonpositive suboptimality in window");
      const double x = std::log(static_cast<double>(t));
      const double y = std::log(seq[t]);
      sx += x; sy += y; sxx += x * x; sxy += x * y;
      ++n;
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("fit_rate: degenerate window");
    slopes.push_back((n * sxy - sx * sy) / denom);
  }
  std::sort(slopes.begin(), slopes.end());
  const std::size_t n = slopes.size();
  return n % 2 == 1 ? slopes[n / 2] : 0.5 * (slopes[n / 2 - 1] + slopes[n / 2]);
}

}  // namespace pg
