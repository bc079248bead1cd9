#pragma once

#include <cstdint>
#include <optional>

#include "torusns/field.hpp"

namespace torusns {

/// Counter-based SplitMix64 stream: draw k of seed s is the SplitMix64
/// finalizer applied to s + (k+1) * 0x9E3779B97F4A7C15 (mod 2^64).
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  static std::uint64_t mix(std::uint64_t seed, std::uint64_t counter);

  std::uint64_t next_u64() { return mix(seed_, counter_++); }
  /// Uniform in [0, 1) from the top 53 bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  /// Uniform in [-1, 1).
  double uniform() { return 2.0 * uniform01() - 1.0; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

struct RandomFieldOptions {
  /// Coefficients scale like (1 + |xi|^2)^{-decay/2}.
  double decay = 1.0;
  double amplitude = 1.0;
  bool dotted = true;
  bool solenoidal = false;
  /// Restrict support to the Euclidean ball |xi| <= radius.
  std::optional<double> ball_radius;
};

/// Real random field. Draws are consumed mode by mode over the lexicographically
/// positive half lattice, two per component (real part, then imaginary part);
/// the other half is filled by conjugation and the mean (if kept) uses one draw
/// per component after the half lattice.
FourierField random_field(const Lattice& lattice, int components, std::uint64_t seed,
                          const RandomFieldOptions& options = {});

}  // namespace torusns
