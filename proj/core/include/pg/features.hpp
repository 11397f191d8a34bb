#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

#include "pg/types.hpp"

namespace pg {

/// State feature map phi(s) for linear-mean policies. Built-ins:
///   raw      phi(s) = s                 (no certifiable norm bound)
///   tanh     phi(s) = tanh(s)           bound sqrt(dim)
///   fourier  phi_i = sqrt(2/m) cos(w_i^T s + b_i), bound sqrt(2)
class FeatureMap {
 public:
  enum class Kind { kRaw, kTanh, kFourier };

  static FeatureMap raw(int state_dim);
  static FeatureMap bounded_tanh(int state_dim);
  static FeatureMap random_fourier(int state_dim, int n_features, double bandwidth,
                                   std::uint64_t seed);

  Eigen::VectorXd operator()(const Eigen::VectorXd& s) const;
  int dim() const { return dim_; }
  int state_dim() const { return state_dim_; }
  Kind kind() const { return kind_; }
  /// D_feat with |phi(s)| <= D_feat for all s; nullopt for the raw map.
  std::optional<double> norm_bound() const { return bound_; }

 private:
  FeatureMap(Kind kind, int state_dim, int dim) : kind_(kind), state_dim_(state_dim), dim_(dim) {}

  Kind kind_;
  int state_dim_;
  int dim_;
  std::optional<double> bound_;
  Matrix weights_;       // fourier only
  Eigen::VectorXd offsets_;
};

}  // namespace pg
