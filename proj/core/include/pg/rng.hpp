#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>

namespace pg {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Counter-based pseudo-random stream.
///
/// Each (seed, stream_id) pair indexes an independent SplitMix64 sequence
/// whose starting counter is derived by double-mixing the pair, so streams
/// for the same seed start in well-separated regions of the counter space.
/// The draw sequence depends only on (seed, stream_id) and the order of
/// calls, never on threads or wall time, and all transforms below are
/// implemented by hand (no std:: distributions) so the bit pattern of every
/// draw is stable across standard library implementations.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0) noexcept
      : seed_(seed), stream_(stream_id) {
    state_ = mix64(mix64(seed) ^ mix64(0xD2B74407B1CE6E93ull + stream_id));
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_; }

  std::uint64_t next_u64() noexcept {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1), 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) noexcept { return lo + uniform() * (hi - lo); }

  /// Standard normal via Box-Muller; two uniforms per draw.
  double normal() noexcept {
    double u1 = uniform();
    if (u1 < 0x1.0p-53) u1 = 0x1.0p-53;
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Standard Cauchy via inverse CDF: tan(pi (u - 1/2)).
  double cauchy() noexcept {
    double u = uniform();
    if (u == 0.5) u = std::nextafter(0.5, 1.0);
    return std::tan(std::numbers::pi * (u - 0.5));
  }

  /// Categorical draw by inverse CDF over (possibly unnormalized) weights.
  int categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) throw std::invalid_argument("categorical: nonpositive weight total");
    double u = uniform() * total;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      u -= weights[i];
      if (u < 0.0) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
  }

  /// Geometric count of failures before success: P(k) = p (1-p)^k, k >= 0.
  std::int64_t geometric(double p) {
    if (!(p > 0.0) || !(p <= 1.0)) throw std::invalid_argument("geometric: p outside (0,1]");
    if (p == 1.0) return 0;
    double u = uniform();
    if (u < 0x1.0p-53) u = 0x1.0p-53;
    return static_cast<std::int64_t>(std::floor(std::log(u) / std::log1p(-p)));
  }

 private:
  std::uint64_t state_;
  std::uint64_t seed_;
  std::uint64_t stream_;
};

}  // namespace pg
