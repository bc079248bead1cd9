#include "torusns/advection.hpp"

#include <numbers>

#include "torusns/errors.hpp"
#include "torusns/helmholtz.hpp"
#include "torusns/spectral.hpp"

namespace torusns {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_pair(const FourierField& v1, const FourierField& v2) {
  if (!(v1.lattice() == v2.lattice())) throw LatticeMismatch("advection operands live on different lattices");
  const int n = v1.dimension();
  if (v1.components() != n || v2.components() != n) {
    throw LatticeMismatch("advection expects n-component vector fields");
  }
}

FourierField advect_grid(const FourierField& v1, const FourierField& v2) {
  const Lattice& lat = v1.lattice();
  const int n = lat.dimension();
  const int grid = default_grid_size(lat.cutoff());
  const GridField a = to_physical(v1, grid);
  const GridField g = to_physical(full_gradient(v2), grid);
  GridField out(n, grid, n);
  for (std::size_t p = 0; p < a.points(); ++p) {
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += a.at(p, j) * g.at(p, j * n + k);
      out.at(p, k) = s;
    }
  }
  return from_physical(out, lat.cutoff());
}

FourierField advect_convolution(const FourierField& v1, const FourierField& v2) {
  const Lattice& lat = v1.lattice();
  const int n = lat.dimension();
  FourierField out(lat, n);
  std::vector<int> sum(static_cast<std::size_t>(n));
  std::vector<Complex> dv2(static_cast<std::size_t>(n));
  for (std::size_t q = 0; q < lat.size(); ++q) {
    auto xq = lat.mode(q);
    bool zero = true;
    for (int k = 0; k < n; ++k) zero = zero && v2.at(q, k) == Complex{};
    if (zero) continue;
    for (std::size_t p = 0; p < lat.size(); ++p) {
      auto xp = lat.mode(p);
      for (int d = 0; d < n; ++d) sum[static_cast<std::size_t>(d)] = xp[d] + xq[d];
      const auto target = lat.find(sum);
      if (!target) continue;
      Complex s = 0.0;
      for (int j = 0; j < n; ++j) s += v1.at(p, j) * static_cast<double>(xq[j]);
      if (s == Complex{}) continue;
      s *= Complex(0.0, kTwoPi);
      for (int k = 0; k < n; ++k) out.at(*target, k) += s * v2.at(q, k);
    }
  }
  return out;
}

}  // namespace

FourierField advect(const FourierField& v1, const FourierField& v2, AdvectionMethod method) {
  require_pair(v1, v2);
  return method == AdvectionMethod::pseudospectral ? advect_grid(v1, v2) : advect_convolution(v1, v2);
}

double trilinear(const FourierField& v1, const FourierField& v2, const FourierField& v3, AdvectionMethod method) {
  return dual_product(advect(v1, v2, method), v3).real();
}

FourierField advect_projected(const FourierField& u, AdvectionMethod method) {
  FourierField a = advect(u, u, method);
  for (auto& c : a.mode_coeffs(a.lattice().origin())) c = 0.0;
  return project_sigma(a);
}

FourierField div_tensor_product(const FourierField& v1, const FourierField& v2) {
  require_pair(v1, v2);
  const Lattice& lat = v1.lattice();
  const int n = lat.dimension();
  const int grid = default_grid_size(lat.cutoff());
  const GridField a = to_physical(v1, grid);
  const GridField b = to_physical(v2, grid);
  GridField prod(n, grid, n * n);
  for (std::size_t p = 0; p < a.points(); ++p) {
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) prod.at(p, j * n + k) = a.at(p, j) * b.at(p, k);
  }
  const FourierField T = from_physical(prod, lat.cutoff());
  FourierField out(lat, n);
  for (std::size_t i = 0; i < lat.size(); ++i) {
    auto xi = lat.mode(i);
    for (int k = 0; k < n; ++k) {
      Complex s = 0.0;
      for (int j = 0; j < n; ++j) s += static_cast<double>(xi[j]) * T.at(i, j * n + k);
      out.at(i, k) = Complex(0.0, kTwoPi) * s;
    }
  }
  return out;
}

}  // namespace torusns
