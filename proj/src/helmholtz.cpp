#include "torusns/helmholtz.hpp"

#include <numbers>

#include "torusns/errors.hpp"
#include "torusns/spectral.hpp"

namespace torusns {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_vector(const FourierField& F) {
  if (F.components() != F.dimension()) throw DomainError("expected a vector field");
}

void require_dotted(const FourierField& g) {
  const double mean = g.mean_magnitude();
  if (mean > kDecompositionTolerance * sobolev_norm(g, 0.0)) {
    throw DomainError("field has a nonzero mean; expected a zero-mean (dotted) field");
  }
}

Complex longitudinal(std::span<const int> xi, std::span<const Complex> c) {
  Complex s = 0.0;
  for (std::size_t d = 0; d < xi.size(); ++d) s += static_cast<double>(xi[d]) * c[d];
  return s;
}

}  // namespace

FourierField project_grad(const FourierField& F) {
  require_vector(F);
  require_dotted(F);
  const Lattice& lat = F.lattice();
  FourierField out(lat, F.components(), FieldFlags{true, false, true});
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (i == lat.origin()) continue;
    auto xi = lat.mode(i);
    const Complex p = longitudinal(xi, F.mode_coeffs(i)) / static_cast<double>(lat.norm_sq(i));
    for (int d = 0; d < F.components(); ++d) out.at(i, d) = static_cast<double>(xi[d]) * p;
  }
  return out;
}

FourierField project_sigma(const FourierField& F) {
  require_vector(F);
  require_dotted(F);
  const Lattice& lat = F.lattice();
  FourierField out(lat, F.components(), FieldFlags{true, true, false});
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (i == lat.origin()) continue;
    auto xi = lat.mode(i);
    auto src = F.mode_coeffs(i);
    const Complex p = longitudinal(xi, src) / static_cast<double>(lat.norm_sq(i));
    for (int d = 0; d < F.components(); ++d) out.at(i, d) = src[static_cast<std::size_t>(d)] - static_cast<double>(xi[d]) * p;
  }
  return out;
}

FourierField solve_div(const FourierField& f) {
  if (f.components() != 1) throw DomainError("solve_div expects a scalar field");
  if (f.mean_magnitude() > kDecompositionTolerance * sobolev_norm(f, 0.0)) {
    throw DomainError("div F = f has no periodic solution when f has a nonzero mean");
  }
  const Lattice& lat = f.lattice();
  const int n = lat.dimension();
  FourierField out(lat, n, FieldFlags{true, false, true});
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (i == lat.origin()) continue;
    auto xi = lat.mode(i);
    const Complex scale = f.at(i, 0) / Complex(0.0, kTwoPi * lat.norm_sq(i));
    for (int d = 0; d < n; ++d) out.at(i, d) = static_cast<double>(xi[d]) * scale;
  }
  return out;
}

FourierField solve_grad(const FourierField& F, double s) {
  require_vector(F);
  require_dotted(F);
  const double total = sobolev_norm(F, s - 1.0);
  const double solenoidal = sobolev_norm(project_sigma(F), s - 1.0);
  if (solenoidal > kDecompositionTolerance * total) {
    throw DomainError("grad f = F is unsolvable: F has a solenoidal part of relative size " +
                      std::to_string(solenoidal / total));
  }
  const Lattice& lat = F.lattice();
  FourierField out(lat, 1, FieldFlags{true, false, false});
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (i == lat.origin()) continue;
    out.at(i, 0) = longitudinal(lat.mode(i), F.mode_coeffs(i)) / Complex(0.0, kTwoPi * lat.norm_sq(i));
  }
  return out;
}

}  // namespace torusns
