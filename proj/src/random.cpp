#include "torusns/random.hpp"

#include <cmath>

namespace torusns {

std::uint64_t CounterRng::mix(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

FourierField random_field(const Lattice& lattice, int components, std::uint64_t seed,
                          const RandomFieldOptions& options) {
  const int n = lattice.dimension();
  const bool vector = components == n;
  FourierField out(lattice, components,
                   FieldFlags{options.dotted, options.solenoidal && vector, false});
  CounterRng rng(seed);
  const double r2 = options.ball_radius ? *options.ball_radius * *options.ball_radius : 0.0;
  for (std::size_t i = lattice.origin() + 1; i < lattice.size(); ++i) {
    const int nsq = lattice.norm_sq(i);
    const double w = options.amplitude * std::pow(1.0 + nsq, -0.5 * options.decay);
    const bool inside = !options.ball_radius || nsq <= r2 + 1e-9;
    auto coeffs = out.mode_coeffs(i);
    for (int c = 0; c < components; ++c) {
      const double re = rng.uniform();
      const double im = rng.uniform();
      coeffs[static_cast<std::size_t>(c)] = inside ? w * Complex(re, im) : Complex{};
    }
    if (options.solenoidal && vector && inside) {
      auto xi = lattice.mode(i);
      Complex proj = 0.0;
      for (int d = 0; d < n; ++d) proj += static_cast<double>(xi[d]) * coeffs[static_cast<std::size_t>(d)];
      proj /= static_cast<double>(nsq);
      for (int d = 0; d < n; ++d) coeffs[static_cast<std::size_t>(d)] -= static_cast<double>(xi[d]) * proj;
    }
    const std::size_t j = lattice.negated(i);
    for (int c = 0; c < components; ++c) out.at(j, c) = std::conj(coeffs[static_cast<std::size_t>(c)]);
  }
  if (!options.dotted) {
    for (int c = 0; c < components; ++c) {
      const double v = options.amplitude * rng.uniform();
      // A nonzero mean vector is compatible with div = 0 (xi = 0).
      out.at(lattice.origin(), c) = v;
    }
  }
  return out;
}

}  // namespace torusns
