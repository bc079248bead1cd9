#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "torusns/errors.hpp"
#include "torusns/helmholtz.hpp"
#include "torusns/random.hpp"
#include "torusns/spectral.hpp"
#include "torusns/viscosity.hpp"

using namespace torusns;
using oracle::kTwoPi;

namespace {

std::size_t idx(int n, int k, int j, int a, int b) { return ViscosityTensor::index(n, k, j, a, b); }

/// Average a raw n^4 array over the group generated by k<->alpha, j<->beta and (k,alpha)<->(j,beta).
std::vector<double> symmetrize(const std::vector<double>& raw, int n) {
  std::vector<double> out(raw.size(), 0.0);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          const std::array<std::array<int, 4>, 8> images{{{k, j, a, b},
                                                          {a, j, k, b},
                                                          {k, b, a, j},
                                                          {a, b, k, j},
                                                          {j, k, b, a},
                                                          {j, a, b, k},
                                                          {b, k, j, a},
                                                          {b, a, j, k}}};
          double s = 0.0;
          for (const auto& im : images) s += raw[idx(n, im[0], im[1], im[2], im[3])];
          out[idx(n, k, j, a, b)] = s / 8.0;
        }
  return out;
}

/// Isotropic mu = 3 background plus symmetrized random trigonometric modes of degree 1.
ViscosityTensor random_symmetric_tensor(int n, std::uint64_t seed, double amplitude = 0.3) {
  CounterRng rng(seed);
  std::vector<TensorMode> modes;
  const std::size_t e = static_cast<std::size_t>(n * n * n * n);
  std::vector<std::vector<int>> wavevectors{std::vector<int>(static_cast<std::size_t>(n), 0)};
  for (int d = 0; d < n; ++d) {
    std::vector<int> xi(static_cast<std::size_t>(n), 0);
    xi[static_cast<std::size_t>(d)] = 1;
    wavevectors.push_back(xi);
  }
  for (const auto& xi : wavevectors) {
    std::vector<double> re(e), im(e);
    for (auto& v : re) v = amplitude * rng.uniform();
    for (auto& v : im) v = amplitude * rng.uniform();
    re = symmetrize(re, n);
    im = symmetrize(im, n);
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) {
            double iso = 0.0;
            if (xi == wavevectors[0]) iso = 3.0 * ((a == j && b == k) + (a == b && k == j));
            const std::size_t q = idx(n, k, j, a, b);
            modes.push_back({k, j, a, b, xi, Complex(re[q] + iso, xi == wavevectors[0] ? 0.0 : im[q])});
          }
  }
  return trigonometric_tensor(n, modes, "random symmetric");
}

/// sum a^{alpha beta}_{kj} zeta_{k alpha} zeta_{j beta} by direct loops.
double form(const std::vector<double>& a, const std::vector<double>& zeta, int n) {
  double s = 0.0;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int al = 0; al < n; ++al)
        for (int be = 0; be < n; ++be) s += a[idx(n, k, j, al, be)] * zeta[k * n + al] * zeta[j * n + be];
  return s;
}

std::vector<double> random_traceless_symmetric(int n, CounterRng& rng) {
  std::vector<double> z(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) z[i * n + j] = z[j * n + i] = rng.uniform();
  double tr = 0.0;
  for (int i = 0; i < n; ++i) tr += z[i * n + i];
  for (int i = 0; i < n; ++i) z[i * n + i] -= tr / n;
  return z;
}

FourierField solenoidal(int n, int K, std::uint64_t seed) {
  RandomFieldOptions opt;
  opt.solenoidal = true;
  return random_field(Lattice(n, K), n, seed, opt);
}

const std::vector<double> kZero{0.0};

}  // namespace

TEST_CASE("symmetry report") {
  for (int n : {2, 3}) {
    const auto A = isotropic_constant(n, 0.7, 1.3);
    CHECK(check_symmetry(A, sample_grid(n, 4, kZero)).max_deviation == 0.0);
    const auto R = random_symmetric_tensor(n, 5);
    const auto rep = check_symmetry(R, sample_grid(n, 6, kZero));
    CHECK(rep.max_deviation <= 1e-15);
    CHECK(rep.passes);
  }
  const auto base = isotropic_constant(2, 0.0, 1.0);
  ViscosityTensor bent(
      2,
      [base](std::span<const double> x, double t, std::span<double> out) {
        base.evaluate(x, t, out);
        if (x[0] == 0.25 && x[1] == 0.5) out[idx(2, 0, 0, 0, 1)] += 1e-3;
      },
      0, false, "perturbed");
  const auto rep = check_symmetry(bent, sample_grid(2, 4, kZero));
  CHECK(rep.max_deviation >= 1e-3);
  CHECK_FALSE(rep.passes);
  CHECK(rep.worst.x == std::vector<double>{0.25, 0.5});
}

TEST_CASE("ellipticity certificate") {
  CounterRng rng(99);
  SUBCASE("isotropic form is 2 mu |zeta|^2 on trace-free symmetric matrices") {
    for (double lambda : {0.0, -10.0, 1.0}) {
      const auto A = isotropic_constant(3, lambda, 1.0);
      const auto a = A.evaluate(std::vector<double>{0.1, 0.2, 0.3}, 0.0);
      for (int r = 0; r < 20; ++r) {
        const auto z = random_traceless_symmetric(3, rng);
        double z2 = 0.0;
        for (double v : z) z2 += v * v;
        CHECK(form(a, z, 3) == doctest::Approx(2.0 * z2).epsilon(1e-13));
      }
      const auto cert = ellipticity_constant(A, sample_grid(3, 2, kZero));
      CHECK(cert.c_a == doctest::Approx(0.5).epsilon(1e-13));
      CHECK(cert.c_a * cert.mu_min == doctest::Approx(1.0));
    }
  }
  SUBCASE("variable mu") {
    ScalarCoefficient mu{[](std::span<const double> x, double) { return 2.0 + std::sin(kTwoPi * x[0]); }, 1, false};
    const auto A = isotropic_tensor(2, ScalarCoefficient::constant(0.0), mu);
    const auto cert = ellipticity_constant(A, sample_grid(2, 8, kZero));
    CHECK(std::abs(cert.c_a - 0.5) <= 1e-10);
    CHECK(cert.worst.x[0] == doctest::Approx(0.75));
  }
  SUBCASE("negative viscosity yields a witness") {
    CHECK_THROWS_AS(isotropic_constant(2, 0.0, -1.0), EllipticityViolation);
    // Bypass the isotropic constructor check with a raw evaluator.
    ViscosityTensor neg(
        3,
        [](std::span<const double>, double, std::span<double> out) {
          std::fill(out.begin(), out.end(), 0.0);
          for (int k = 0; k < 3; ++k)
            for (int j = 0; j < 3; ++j) {
              out[idx(3, k, j, j, k)] -= 1.0;
              if (k == j)
                for (int a = 0; a < 3; ++a) out[idx(3, k, k, a, a)] -= 1.0;
            }
        },
        0, false, "negative");
    try {
      (void)ellipticity_constant(neg, sample_grid(3, 2, kZero));
      FAIL("expected EllipticityViolation");
    } catch (const EllipticityViolation& e) {
      const auto& z = e.zeta();
      double tr = 0.0, norm = 0.0, asym = 0.0;
      for (int i = 0; i < 3; ++i) tr += z[i * 3 + i];
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          norm += z[i * 3 + j] * z[i * 3 + j];
          asym = std::max(asym, std::abs(z[i * 3 + j] - z[j * 3 + i]));
        }
      CHECK(std::abs(tr) <= 1e-12);
      CHECK(norm == doctest::Approx(1.0));
      CHECK(asym <= 1e-12);
      CHECK(form(neg.evaluate(e.x(), e.t()), z, 3) <= 0.0);
      CHECK(e.form_value() <= 0.0);
    }
  }
  SUBCASE("more samples never raise mu_min or lower the norm") {
    const auto A = isotropic_variable(2, 2.0, 1.5, 2);
    const std::vector<double> t1{0.0}, t2{0.0, 0.3, 0.5};
    const auto coarse = ellipticity_constant(A, sample_grid(2, 4, t1));
    const auto fine = ellipticity_constant(A, sample_grid(2, 8, t2));
    CHECK(fine.mu_min <= coarse.mu_min);
    CHECK(fine.tensor_norm >= coarse.tensor_norm);
  }
  SUBCASE("trace-free basis is orthonormal") {
    for (int n : {2, 3}) {
      const auto B = traceless_symmetric_basis(n);
      CHECK(B.size() == static_cast<std::size_t>(n * (n + 1) / 2 - 1));
      for (std::size_t a = 0; a < B.size(); ++a)
        for (std::size_t b = 0; b < B.size(); ++b) {
          double s = 0.0;
          for (std::size_t e = 0; e < B[a].size(); ++e) s += B[a][e] * B[b][e];
          CHECK(std::abs(s - (a == b ? 1.0 : 0.0)) <= 1e-15);
        }
    }
  }
}

TEST_CASE("tensor norm") {
  // Enumerate the 16 isotropic entries delta_{aj} delta_{bk} + delta_{ab} delta_{kj}.
  double sum = 0.0;
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 2; ++j)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const double v = (a == j && b == k) + (a == b && k == j);
          sum += v * v;
        }
  const auto A = isotropic_constant(2, 0.0, 1.0);
  CHECK(tensor_norm(A, sample_grid(2, 3, kZero)) == doctest::Approx(std::sqrt(sum)).epsilon(1e-15));
  CHECK(tensor_norm(A, sample_grid(2, 7, kZero)) == tensor_norm(A, sample_grid(2, 2, kZero)));
  CHECK(tensor_norm(trigonometric_tensor(2, {}, "zero"), sample_grid(2, 3, kZero)) == 0.0);
}

TEST_CASE("operator L and the bilinear form") {
  SUBCASE("constant isotropic L is the Laplacian on solenoidal fields") {
    for (int n : {2, 3}) {
      const auto A = isotropic_constant(n, 0.0, 1.0);
      const auto u = solenoidal(n, 4, 7 + n);
      const auto Lu = apply_L(A, u, 0.0);
      CHECK(sobolev_norm(Lu - laplacian(u), 0.0) <= 1e-12 * sobolev_norm(laplacian(u), 0.0));
      CHECK(sobolev_norm(apply_L(A, FourierField(u.lattice(), n), 0.0), 0.0) == 0.0);
      CHECK(bilinear_form(A, u, u, 0.0) ==
            doctest::Approx(2.0 * std::pow(sobolev_norm(sym_gradient(u), 0.0), 2)).epsilon(1e-13));
    }
  }
  SUBCASE("-<Lu, w> = a_T(u, w) and symmetry for random symmetric tensors") {
    for (int n : {2, 3}) {
      const auto A = random_symmetric_tensor(n, 11 + n);
      for (std::uint64_t s = 1; s <= 5; ++s) {
        const auto u = solenoidal(n, 4, 100 * s + n);
        const auto w = solenoidal(n, 4, 200 * s + n);
        const double a = bilinear_form(A, u, w, 0.0);
        const double scale = sobolev_norm(u, 1.0) * sobolev_norm(w, 1.0);
        CHECK(std::abs(-dual_product(apply_L(A, u, 0.0), w).real() - a) <= 1e-11 * scale);
        CHECK(std::abs(bilinear_form(A, w, u, 0.0) - a) <= 1e-12 * scale);
      }
    }
  }
  SUBCASE("bilinear form against direct quadrature") {
    const int n = 2;
    const auto A = random_symmetric_tensor(n, 3);
    const auto u = random_field(Lattice(n, 2), n, 41);
    const auto v = random_field(Lattice(n, 2), n, 42);
    const auto Eu = sym_gradient(u);
    const auto Ev = sym_gradient(v);
    const int N = 8;  // exact for degree 2 + 2 + 1
    long double s = 0.0L;
    for (std::size_t p = 0; p < oracle::grid_points(n, N); ++p) {
      const auto x = oracle::grid_point(p, n, N);
      const auto a = A.evaluate(x, 0.0);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int al = 0; al < n; ++al)
            for (int be = 0; be < n; ++be)
              s += a[idx(n, i, j, al, be)] * oracle::evaluate(Eu, x, j * n + be) * oracle::evaluate(Ev, x, i * n + al);
    }
    const double expected = static_cast<double>(s / oracle::grid_points(n, N));
    CHECK(bilinear_form(A, u, v, 0.0) == doctest::Approx(expected).epsilon(1e-12));
  }
  SUBCASE("expanded isotropic form") {
    // L u = (lambda+mu) grad div u + mu Lap u + (grad lambda) div u + 2 (grad mu) . E(u)
    const int n = 2, K = 4;
    const Lattice lat(n, K);
    auto lam_f = [](std::span<const double> x, double) { return 0.5 + 0.3 * std::cos(kTwoPi * x[1]); };
    auto mu_f = [](std::span<const double> x, double) { return 2.0 + std::sin(kTwoPi * x[0]); };
    const auto A = isotropic_tensor(n, ScalarCoefficient{lam_f, 1, false}, ScalarCoefficient{mu_f, 1, false});
    FourierField lam(lat, 1), mu(lat, 1);
    lam.at(lat.origin(), 0) = 0.5;
    lam.at(lat.index_of(std::vector<int>{0, 1}), 0) = 0.15;
    lam.at(lat.index_of(std::vector<int>{0, -1}), 0) = 0.15;
    mu.at(lat.origin(), 0) = 2.0;
    mu.at(lat.index_of(std::vector<int>{1, 0}), 0) = Complex(0.0, -0.5);
    mu.at(lat.index_of(std::vector<int>{-1, 0}), 0) = Complex(0.0, 0.5);
    const auto u = random_field(lat, n, 77);  // not solenoidal: exercises every term
    const auto du = div(u);
    FourierField expected = multiply(lam + mu, grad(du));
    expected += multiply(mu, laplacian(u));
    expected += multiply(du, grad(lam));
    const auto E = sym_gradient(u);
    const auto gm = grad(mu);
    for (int k = 0; k < n; ++k) {
      FourierField term(lat, 1);
      for (int j = 0; j < n; ++j) term += multiply(gm.component(j), E.component(j * n + k));
      FourierField vec(lat, n);
      vec.set_component(k, term);
      expected.axpy(2.0, vec);
    }
    const auto Lu = apply_L(A, u, 0.0);
    CHECK(sobolev_norm(Lu - expected, 0.0) <= 1e-11 * sobolev_norm(expected, 0.0));
  }
}

TEST_CASE("coercivity and boundedness") {
  for (int n : {2, 3}) {
    std::vector<double> w;
    for (int d = 0; d < n; ++d) w.push_back(1.0 + 0.4 * d);
    std::vector<ViscosityTensor> tensors{isotropic_constant(n, 0.2, 0.8), isotropic_variable(n, 2.0, 1.0, 1),
                                         anisotropic_diagonal(w), random_symmetric_tensor(n, 21)};
    for (const auto& A : tensors) {
      const int grid = A.quadrature_grid(4);
      const std::vector<double> times{0.0, 0.25, 0.5};
      const auto cert = ellipticity_constant(A, sample_grid(n, grid, times));
      CHECK(check_symmetry(A, sample_grid(n, 4, times)).passes);
      for (std::uint64_t s = 1; s <= 5; ++s) {
        const double t = A.time_dependent() ? times[s % 3] : 0.0;
        const auto v = solenoidal(n, 4, 500 * s + n);
        const auto u = random_field(Lattice(n, 4), n, 600 * s + n);
        const double h1 = std::pow(sobolev_norm(v, 1.0), 2);
        const double a = bilinear_form(A, v, v, t);
        CHECK(0.25 / cert.c_a * h1 <= a);
        CHECK(a <= cert.tensor_norm * h1);
        CHECK(std::abs(bilinear_form(A, u, v, t)) <= cert.tensor_norm * sobolev_norm(u, 1.0) * sobolev_norm(v, 1.0));
      }
    }
  }
}

TEST_CASE("Korn inequality") {
  for (int n : {2, 3}) {
    for (std::uint64_t s = 1; s <= 100; ++s) {
      RandomFieldOptions opt;
      opt.dotted = s % 3 != 0;
      const auto v = random_field(Lattice(n, 3), n, 900 * n + s, opt);
      const auto k = korn_check(v);
      CHECK(k.lhs <= k.rhs + 1e-12);
      if (s <= 3) {
        const auto G = full_gradient(v);
        const auto E = sym_gradient(v);
        CHECK(k.lhs == doctest::Approx(oracle::quadrature(G, G, 7)).epsilon(1e-12));
        CHECK(k.rhs == doctest::Approx(2.0 * oracle::quadrature(E, E, 7)).epsilon(1e-12));
      }
    }
    const auto q = random_field(Lattice(n, 3), 1, 77);
    const auto k = korn_check(grad(q));
    CHECK(k.lhs <= k.rhs);
    CHECK(k.rhs == doctest::Approx(2.0 * k.lhs));
  }
}

TEST_CASE("coefficient tables and grids") {
  const auto path = std::filesystem::temp_directory_path() / "torusns_tensor_table.json";
  {
    std::ofstream out(path);
    out << R"({"n": 2, "entries": [)";
    bool first = true;
    for (int k = 1; k <= 2; ++k)
      for (int j = 1; j <= 2; ++j)
        for (int a = 1; a <= 2; ++a)
          for (int b = 1; b <= 2; ++b) {
            const double v = (a == j && b == k) + (a == b && k == j);
            if (v == 0.0) continue;
            out << (first ? "" : ",") << R"({"k":)" << k << R"(,"j":)" << j << R"(,"alpha":)" << a << R"(,"beta":)"
                << b << R"(,"modes":[{"xi":[0,0],"re":)" << v << "}]}";
            first = false;
          }
    out << "]}";
  }
  const auto T = load_tensor_table(path);
  const auto I = isotropic_constant(2, 0.0, 1.0);
  const std::vector<double> x{0.3, 0.9};
  CHECK(T.evaluate(x, 0.0) == I.evaluate(x, 0.0));
  CHECK(T.fourier_degree() == 0);
  {
    std::ofstream out(path);
    out << R"({"n": 2, "entries": [{"k": 1}]})";
  }
  CHECK_THROWS_AS(load_tensor_table(path), ConfigError);
  std::filesystem::remove(path);

  CHECK(isotropic_constant(2, 0, 1).quadrature_grid(8) == 25);
  CHECK(isotropic_variable(2, 2, 1, 12).quadrature_grid(8) >= 2 * 8 + 12 + 1);
  ViscosityTensor opaque(2, [](std::span<const double>, double, std::span<double> o) { std::fill(o.begin(), o.end(), 0.0); },
                         std::nullopt, false, "opaque");
  CHECK_FALSE(opaque.quadrature_is_exact());
  CHECK(opaque.quadrature_grid(8) >= 50);
}
