#include "torusns/spectral.hpp"

#include <cmath>
#include <numbers>

#include "compensated_sum.hpp"
#include "torusns/errors.hpp"

namespace torusns {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_same_lattice(const FourierField& a, const FourierField& b) {
  if (!(a.lattice() == b.lattice())) throw LatticeMismatch("fields live on different lattices");
}

void require_same_shape(const FourierField& a, const FourierField& b) {
  require_same_lattice(a, b);
  if (a.components() != b.components()) throw LatticeMismatch("fields differ in component count");
}

void require_vector(const FourierField& v, const char* op) {
  if (v.components() != v.dimension()) {
    throw DomainError(std::string(op) + " expects a vector field with n components");
  }
}

}  // namespace

double rho_sq(int norm_sq) { return kTwoPi * kTwoPi * (1.0 + norm_sq); }

double rho(std::span<const int> xi) {
  int nsq = 0;
  for (int v : xi) nsq += v * v;
  return std::sqrt(rho_sq(nsq));
}

double sobolev_norm(const FourierField& g, double s) {
  const Lattice& lat = g.lattice();
  detail::CompensatedSum sum;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    double m = 0.0;
    for (const auto& c : g.mode_coeffs(i)) m += std::norm(c);
    if (m == 0.0) continue;
    sum.add(std::pow(rho_sq(lat.norm_sq(i)), s) * m);
  }
  return std::sqrt(sum.value());
}

Complex inner_product(const FourierField& g, const FourierField& f, double s) {
  require_same_shape(g, f);
  const Lattice& lat = g.lattice();
  detail::CompensatedSum re, im;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    Complex m = 0.0;
    for (int c = 0; c < g.components(); ++c) m += g.at(i, c) * std::conj(f.at(i, c));
    if (m == 0.0) continue;
    const double w = std::pow(rho_sq(lat.norm_sq(i)), s);
    re.add(w * m.real());
    im.add(w * m.imag());
  }
  return {re.value(), im.value()};
}

Complex dual_product(const FourierField& g, const FourierField& f) {
  require_same_shape(g, f);
  const Lattice& lat = g.lattice();
  detail::CompensatedSum re, im;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const std::size_t j = lat.negated(i);
    Complex m = 0.0;
    for (int c = 0; c < g.components(); ++c) m += g.at(i, c) * f.at(j, c);
    re.add(m.real());
    im.add(m.imag());
  }
  return {re.value(), im.value()};
}

FourierField bessel_potential(const FourierField& g, double r) {
  FourierField out = g;
  const Lattice& lat = g.lattice();
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const double w = std::pow(rho_sq(lat.norm_sq(i)), 0.5 * r);
    for (auto& c : out.mode_coeffs(i)) c *= w;
  }
  return out;
}

FourierField grad(const FourierField& g) {
  if (g.components() != 1) throw DomainError("grad expects a scalar field");
  const Lattice& lat = g.lattice();
  const int n = lat.dimension();
  FourierField out(lat, n, FieldFlags{true, false, true});
  for (std::size_t i = 0; i < lat.size(); ++i) {
    auto xi = lat.mode(i);
    const Complex gi = g.at(i, 0);
    for (int d = 0; d < n; ++d) out.at(i, d) = Complex(0.0, kTwoPi * xi[d]) * gi;
  }
  return out;
}

FourierField div(const FourierField& v) {
  require_vector(v, "div");
  const Lattice& lat = v.lattice();
  const int n = lat.dimension();
  FourierField out(lat, 1, FieldFlags{true, false, false});
  for (std::size_t i = 0; i < lat.size(); ++i) {
    auto xi = lat.mode(i);
    Complex s = 0.0;
    for (int d = 0; d < n; ++d) s += static_cast<double>(xi[d]) * v.at(i, d);
    out.at(i, 0) = Complex(0.0, kTwoPi) * s;
  }
  return out;
}

FourierField full_gradient(const FourierField& v) {
  require_vector(v, "full_gradient");
  const Lattice& lat = v.lattice();
  const int n = lat.dimension();
  FourierField out(lat, n * n, FieldFlags{true, false, false});
  for (std::size_t i = 0; i < lat.size(); ++i) {
    auto xi = lat.mode(i);
    for (int j = 0; j < n; ++j) {
      const Complex dj(0.0, kTwoPi * xi[j]);
      for (int b = 0; b < n; ++b) out.at(i, j * n + b) = dj * v.at(i, b);
    }
  }
  return out;
}

FourierField sym_gradient(const FourierField& v) {
  require_vector(v, "sym_gradient");
  const Lattice& lat = v.lattice();
  const int n = lat.dimension();
  FourierField out(lat, n * n, FieldFlags{true, false, false});
  for (std::size_t i = 0; i < lat.size(); ++i) {
    auto xi = lat.mode(i);
    for (int j = 0; j < n; ++j) {
      for (int b = j; b < n; ++b) {
        const Complex e =
            Complex(0.0, 0.5 * kTwoPi) * (static_cast<double>(xi[j]) * v.at(i, b) + static_cast<double>(xi[b]) * v.at(i, j));
        out.at(i, j * n + b) = e;
        out.at(i, b * n + j) = e;
      }
    }
  }
  return out;
}

FourierField laplacian(const FourierField& g) {
  FourierField out = g;
  const Lattice& lat = g.lattice();
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const double w = -kTwoPi * kTwoPi * lat.norm_sq(i);
    for (auto& c : out.mode_coeffs(i)) c *= w;
  }
  out.flags().dotted = true;
  out.flags().potential = g.flags().potential;
  return out;
}

FourierField resample(const FourierField& g, int cutoff) {
  Lattice target(g.dimension(), cutoff);
  FourierField out(target, g.components(), g.flags());
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (auto src = g.lattice().find(target.mode(i))) {
      for (int c = 0; c < g.components(); ++c) out.at(i, c) = g.at(*src, c);
    }
  }
  return out;
}

FourierField multiply(const FourierField& a, const FourierField& b) {
  require_same_lattice(a, b);
  if (a.components() != 1 && a.components() != b.components()) {
    throw LatticeMismatch("multiply expects a scalar or a same-shaped left operand");
  }
  const int cutoff = a.lattice().cutoff();
  const int grid = default_grid_size(cutoff);
  GridField ga = to_physical(a, grid);
  GridField gb = to_physical(b, grid);
  const bool scalar = a.components() == 1;
  for (std::size_t p = 0; p < gb.points(); ++p) {
    for (int c = 0; c < gb.components; ++c) gb.at(p, c) *= ga.at(p, scalar ? 0 : c);
  }
  return from_physical(gb, cutoff);
}

FourierField dot(const FourierField& a, const FourierField& b) {
  require_same_shape(a, b);
  const int cutoff = a.lattice().cutoff();
  const int grid = default_grid_size(cutoff);
  GridField ga = to_physical(a, grid);
  GridField gb = to_physical(b, grid);
  GridField out(ga.dimension, grid, 1);
  for (std::size_t p = 0; p < ga.points(); ++p) {
    double s = 0.0;
    for (int c = 0; c < ga.components; ++c) s += ga.at(p, c) * gb.at(p, c);
    out.at(p, 0) = s;
  }
  return from_physical(out, cutoff);
}

}  // namespace torusns
