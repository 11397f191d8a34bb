#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string_view>

namespace pg {

/// Policy parameter vector theta. Dimension is fixed for the lifetime of a
/// run; every operation that produces one must keep all entries finite.
using ParamVector = Eigen::VectorXd;

using Matrix = Eigen::MatrixXd;

inline bool all_finite(const Eigen::Ref<const Eigen::VectorXd>& v) {
  return v.allFinite();
}

/// FNV-1a over bytes; used for config hashes and derived stream ids.
inline std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace pg
