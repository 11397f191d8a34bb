#include "pg/features.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pg/rng.hpp"

namespace pg {

FeatureMap FeatureMap::raw(int state_dim) {
  if (state_dim < 1) throw std::invalid_argument("FeatureMap: state_dim must be >= 1");
  return FeatureMap(Kind::kRaw, state_dim, state_dim);
}

FeatureMap FeatureMap::bounded_tanh(int state_dim) {
  if (state_dim < 1) throw std::invalid_argument("FeatureMap: state_dim must be >= 1");
  FeatureMap f(Kind::kTanh, state_dim, state_dim);
  f.bound_ = std::sqrt(static_cast<double>(state_dim));
  return f;
}

FeatureMap FeatureMap::random_fourier(int state_dim, int n_features, double bandwidth,
                                      std::uint64_t seed) {
  if (state_dim < 1 || n_features < 1)
    throw std::invalid_argument("FeatureMap: dimensions must be >= 1");
  if (!(bandwidth > 0.0)) throw std::invalid_argument("FeatureMap: bandwidth must be positive");
  FeatureMap f(Kind::kFourier, state_dim, n_features);
  RngStream rng(seed, /*stream_id=*/0x15EEDu);
  f.weights_ = Matrix(n_features, state_dim);
  f.offsets_ = Eigen::VectorXd(n_features);
  for (int i = 0; i < n_features; ++i) {
    for (int j = 0; j < state_dim; ++j) f.weights_(i, j) = rng.normal() / bandwidth;
    f.offsets_(i) = rng.uniform(0.0, 2.0 * std::numbers::pi);
  }
  f.bound_ = std::sqrt(2.0);
  return f;
}

Eigen::VectorXd FeatureMap::operator()(const Eigen::VectorXd& s) const {
  if (s.size() != state_dim_) throw std::invalid_argument("FeatureMap: state dimension mismatch");
  switch (kind_) {
    case Kind::kRaw:
      return s;
    case Kind::kTanh:
      return s.array().tanh().matrix();
    case Kind::kFourier: {
      Eigen::VectorXd z = weights_ * s + offsets_;
      const double scale = std::sqrt(2.0 / dim_);
      return (z.array().cos() * scale).matrix();
    }
  }
  throw std::logic_error("FeatureMap: unhandled kind");
}

}  // namespace pg
