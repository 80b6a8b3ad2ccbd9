#pragma once

#include <cmath>
#include <cstdint>

#include "irfk/types.hpp"

namespace irfk {

/// Counter-based generator: every draw is a pure function of
/// (seed, stream, counter), so work can be split across threads in any way
/// without changing the numbers produced.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_(mix(mix(seed ^ 0x9e3779b97f4a7c15ULL) ^ (stream * 0xd1b54a32d192ed03ULL))) {}

  std::uint64_t bits(std::uint64_t counter) const noexcept {
    return mix(key_ ^ mix(counter + 0x632be59bd9b4e019ULL));
  }

  /// Uniform on the open interval (0, 1).
  double uniform(std::uint64_t counter) const noexcept {
    return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard complex Gaussian: real and imaginary parts iid N(0, 1/2).
  cplx complex_normal(std::uint64_t counter) const noexcept {
    const double u1 = uniform(2 * counter);
    const double u2 = uniform(2 * counter + 1);
    const double radius = std::sqrt(-std::log(u1));
    const double angle = 2.0 * kPi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }

  /// Standard real Gaussian N(0, 1).
  double normal(std::uint64_t counter) const noexcept {
    return std::sqrt(2.0) * complex_normal(counter).real();
  }

  static std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t key_;
};

/// Sequential view over one CounterRng stream.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream) noexcept : rng_(seed, stream) {}

  double uniform() noexcept { return rng_.uniform(counter_++); }
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  double normal() noexcept { return rng_.normal(counter_++); }
  cplx complex_normal() noexcept { return rng_.complex_normal(counter_++); }

 private:
  CounterRng rng_;
  std::uint64_t counter_ = 0;
};

}  // namespace irfk
