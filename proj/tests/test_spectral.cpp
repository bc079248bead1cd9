#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "oracles.hpp"
#include "torusns/errors.hpp"
#include "torusns/random.hpp"
#include "torusns/serialization.hpp"
#include "torusns/spectral.hpp"

using namespace torusns;
using oracle::kTwoPi;

namespace {

FourierField unit_mode(const Lattice& lat, std::vector<int> xi, int components = 1, int c = 0) {
  FourierField g(lat, components);
  g.at(lat.index_of(xi), c) = 1.0;
  return g;
}

}  // namespace

TEST_CASE("lattice enumerates the symmetric box") {
  for (int n : {2, 3}) {
    for (int K : {1, 2, 4}) {
      const Lattice lat(n, K);
      CHECK(lat.size() == static_cast<std::size_t>(std::pow(2 * K + 1, n)));
      const std::vector<int> zero(static_cast<std::size_t>(n), 0);
      CHECK(lat.index_of(zero) == lat.origin());
      for (std::size_t i = 0; i < lat.size(); ++i) {
        const auto xi = lat.mode(i);
        const auto neg = lat.mode(lat.negated(i));
        for (int d = 0; d < n; ++d) CHECK(neg[d] == -xi[d]);
        CHECK(lat.find(xi) == i);
      }
    }
  }
  const Lattice lat(2, 2);
  CHECK_FALSE(lat.find(std::vector<int>{3, 0}).has_value());
  CHECK_THROWS_AS(lat.index_of(std::vector<int>{0, -3}), DomainError);
}

TEST_CASE("rho values and the gradient sandwich") {
  CHECK(rho(std::vector<int>{0, 0}) == doctest::Approx(kTwoPi).epsilon(1e-15));
  CHECK(rho(std::vector<int>{1, 0}) == doctest::Approx(kTwoPi * std::sqrt(2.0)).epsilon(1e-15));
  CounterRng rng(42);
  for (int k = 0; k < 100; ++k) {
    std::vector<int> xi{static_cast<int>(rng.uniform() * 20), static_cast<int>(rng.uniform() * 20),
                        static_cast<int>(rng.uniform() * 20)};
    if (xi == std::vector<int>{0, 0, 0}) xi[0] = 1;
    double nsq = 0;
    for (int v : xi) nsq += v * v;
    const double r2 = rho(xi) * rho(xi);
    const double g2 = kTwoPi * kTwoPi * nsq;
    CHECK(0.5 * r2 <= g2 * (1 + 1e-15));
    CHECK(g2 <= r2);
  }
}

TEST_CASE("sobolev norm, inner product and dual product") {
  const Lattice lat(2, 4);
  SUBCASE("single mode") {
    CHECK(sobolev_norm(unit_mode(lat, {1, 0}), 1.0) == doctest::Approx(kTwoPi * std::sqrt(2.0)).epsilon(1e-15));
    CHECK(sobolev_norm(FourierField(lat, 2), 0.7) == 0.0);
    const auto g = unit_mode(lat, {2, -1});
    CHECK(inner_product(g, g, 0.0).real() == doctest::Approx(1.0));
    CHECK(std::abs(inner_product(g, unit_mode(lat, {1, 1}), 0.0)) == 0.0);
  }
  SUBCASE("Parseval against direct quadrature") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      RandomFieldOptions opt;
      opt.dotted = false;
      const auto g = random_field(lat, 2, seed, opt);
      const double q = oracle::quadrature(g, g, 9);
      const double norm = sobolev_norm(g, 0.0);
      CHECK(std::abs(norm - std::sqrt(q)) <= 1e-12 * norm);
      const auto f = random_field(lat, 2, seed + 100, opt);
      const double dp = dual_product(g, f).real();
      CHECK(std::abs(dp - oracle::quadrature(g, f, 9)) <= 1e-12 * norm * sobolev_norm(f, 0.0));
      CHECK(std::abs(dual_product(g, f).imag()) <= 1e-14);
      for (double s : {-1.0, 0.5, 2.0}) {
        const double n2 = sobolev_norm(g, s);
        CHECK(std::abs(inner_product(g, g, s).real() - n2 * n2) <= 1e-14 * n2 * n2);
        CHECK(std::abs(dual_product(g, f)) <= sobolev_norm(g, s) * sobolev_norm(f, -s) * (1 + 1e-14));
      }
    }
  }
  SUBCASE("dual product of constants and of a zero-mean field with one") {
    FourierField one(lat, 1);
    one.at(lat.origin(), 0) = 1.0;
    CHECK(dual_product(one, one).real() == doctest::Approx(1.0));
    const auto g = random_field(lat, 1, 9);
    CHECK(std::abs(dual_product(g, one)) == 0.0);
  }
  SUBCASE("lattice mismatch") {
    CHECK_THROWS_AS(inner_product(FourierField(lat, 1), FourierField(Lattice(2, 3), 1), 0.0), LatticeMismatch);
    CHECK_THROWS_AS(dual_product(FourierField(lat, 1), FourierField(lat, 2)), LatticeMismatch);
  }
}

TEST_CASE("Bessel potential") {
  const Lattice lat(3, 3);
  RandomFieldOptions opt;
  opt.dotted = false;
  const auto g = random_field(lat, 1, 5, opt);
  const auto id = bessel_potential(g, 0.0);
  for (std::size_t i = 0; i < lat.size(); ++i) CHECK(id.at(i, 0) == g.at(i, 0));
  const auto back = bessel_potential(bessel_potential(g, 1.3), -1.3);
  CHECK(sobolev_norm(back - g, 0.0) <= 1e-14 * sobolev_norm(g, 0.0));
  // Lambda^2 g = (2 pi)^2 g - Laplacian g.
  FourierField expected = (kTwoPi * kTwoPi) * g;
  expected -= laplacian(g);
  CHECK(sobolev_norm(bessel_potential(g, 2.0) - expected, 0.0) <= 1e-12 * sobolev_norm(expected, 0.0));
  for (double s : {-1.0, 0.0, 1.0, 2.0}) {
    for (double r : {-2.0, 0.5, 1.0}) {
      const double a = sobolev_norm(bessel_potential(g, r), s - r);
      CHECK(std::abs(a - sobolev_norm(g, s)) <= 1e-14 * a);
    }
  }
  const auto sol = random_field(lat, 3, 6, RandomFieldOptions{1.0, 1.0, true, true, {}});
  const auto ls = bessel_potential(sol, 1.0);
  CHECK(ls.flags().dotted);
  CHECK(ls.flags().solenoidal);
  CHECK(ls.divergence_defect() <= 1e-13);
}

TEST_CASE("differential operators") {
  const Lattice lat(2, 5);
  FourierField c(lat, 1);
  c.at(lat.origin(), 0) = 3.0;
  CHECK(sobolev_norm(grad(c), 0.0) == 0.0);

  const auto g = random_field(lat, 1, 77);
  const auto dg = div(grad(g));
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const Complex expected = -kTwoPi * kTwoPi * lat.norm_sq(i) * g.at(i, 0);
    CHECK(std::abs(dg.at(i, 0) - expected) <= 1e-12 * (1 + std::abs(expected)));
  }

  const auto v = random_field(lat, 2, 78);
  const auto E = sym_gradient(v);
  const auto dv = div(v);
  for (std::size_t i = 0; i < lat.size(); ++i) {
    CHECK(E.at(i, 1) == E.at(i, 2));
    CHECK(std::abs(E.at(i, 0) + E.at(i, 3) - dv.at(i, 0)) <= 1e-13);
  }

  // Derivatives against direct summation of the analytic derivative.
  const auto G = grad(g);
  const std::vector<double> x{0.173, 0.611};
  const double h = 1e-5;
  for (int d = 0; d < 2; ++d) {
    auto xp = x, xm = x;
    xp[static_cast<std::size_t>(d)] += h;
    xm[static_cast<std::size_t>(d)] -= h;
    const double fd = (oracle::evaluate(g, xp, 0) - oracle::evaluate(g, xm, 0)) / (2 * h);
    CHECK(oracle::evaluate(G, x, d) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("gradient norm equivalence for scalar and vector fields") {
  for (int n : {2, 3}) {
    const Lattice lat(n, n == 2 ? 6 : 3);
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const auto g = random_field(lat, 1, 300 + seed);
      const auto v = random_field(lat, n, 600 + seed);
      for (double s : {-1.0, 0.0, 1.0, 2.0}) {
        const double gs = std::pow(sobolev_norm(g, s), 2);
        const double dg = std::pow(sobolev_norm(grad(g), s - 1), 2);
        CHECK(0.5 * gs <= dg * (1 + 1e-14));
        CHECK(dg <= gs * (1 + 1e-14));
        const double vs = std::pow(sobolev_norm(v, s), 2);
        const double dv = std::pow(sobolev_norm(full_gradient(v), s - 1), 2);
        CHECK(0.5 * vs <= dv * (1 + 1e-14));
        CHECK(dv <= vs * (1 + 1e-14));
      }
    }
  }
}

TEST_CASE("physical transforms") {
  SUBCASE("single cosine mode samples cos(2 pi xi.x)") {
    const Lattice lat(2, 3);
    FourierField g(lat, 1);
    g.at(lat.index_of(std::vector<int>{1, 2}), 0) = 0.5;
    g.at(lat.index_of(std::vector<int>{-1, -2}), 0) = 0.5;
    const GridField G = to_physical(g, 8);
    for (std::size_t p = 0; p < G.points(); ++p) {
      const auto x = G.coordinates(p);
      CHECK(G.at(p, 0) == doctest::Approx(std::cos(kTwoPi * (x[0] + 2 * x[1]))).epsilon(1e-14));
    }
  }
  SUBCASE("round trip at N = 2K + 1 and against direct summation") {
    for (int n : {2, 3}) {
      const int K = 3;
      const Lattice lat(n, K);
      RandomFieldOptions opt;
      opt.dotted = false;
      const auto g = random_field(lat, 2, 12 + n, opt);
      const GridField G = to_physical(g, 2 * K + 1);
      const auto direct = oracle::sample(g, 2 * K + 1);
      double worst = 0.0;
      for (std::size_t p = 0; p < G.points(); ++p) {
        for (int c = 0; c < 2; ++c) worst = std::max(worst, std::abs(G.at(p, c) - direct[p][static_cast<std::size_t>(c)]));
      }
      CHECK(worst <= 1e-13);
      const auto back = from_physical(G, K);
      CHECK(sobolev_norm(back - g, 0.0) <= 1e-13 * sobolev_norm(g, 0.0));
      CHECK(back.hermitian_defect() == 0.0);
    }
  }
  SUBCASE("undersampling is rejected") {
    const Lattice lat(2, 4);
    CHECK_THROWS_AS(to_physical(FourierField(lat, 1), 4), AliasingError);
    CHECK_THROWS_AS(from_physical(GridField(2, 8, 1), 4), AliasingError);
  }
  SUBCASE("grid sizes") {
    CHECK(fft_friendly_size(25) == 25);
    CHECK(fft_friendly_size(11) == 12);
    CHECK(default_grid_size(8) == 25);
    CHECK(default_grid_size(10) >= 31);
  }
}

TEST_CASE("dealiased products match direct multiplication") {
  const Lattice lat(2, 3);
  RandomFieldOptions opt;
  opt.dotted = false;
  const auto a = random_field(lat, 1, 21, opt);
  const auto b = random_field(lat, 2, 22, opt);
  const auto p = multiply(a, b);
  // Coefficients of the exact product restricted to the box, by convolution.
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const auto xi = lat.mode(i);
    for (int c = 0; c < 2; ++c) {
      Complex s = 0.0;
      for (std::size_t j = 0; j < lat.size(); ++j) {
        const auto eta = lat.mode(j);
        const std::vector<int> rest{xi[0] - eta[0], xi[1] - eta[1]};
        if (auto k = lat.find(rest)) s += a.at(j, 0) * b.at(*k, c);
      }
      CHECK(std::abs(p.at(i, c) - s) <= 1e-13);
    }
  }
}

TEST_CASE("counter-based random stream") {
  std::uint64_t state = 12345;
  CounterRng rng(12345);
  for (int k = 0; k < 10; ++k) CHECK(rng.next_u64() == oracle::splitmix64(state));
  const Lattice lat(2, 3);
  const auto a = random_field(lat, 2, 7);
  const auto b = random_field(lat, 2, 7);
  CHECK(sobolev_norm(a - b, 0.0) == 0.0);
  CHECK(a.hermitian_defect() == 0.0);
  CHECK(a.mean_magnitude() == 0.0);
  const auto s = random_field(lat, 2, 8, RandomFieldOptions{1.0, 1.0, true, true, {}});
  CHECK(s.divergence_defect() <= 1e-15);
  RandomFieldOptions ball;
  ball.ball_radius = 2.0;
  const auto r = random_field(lat, 1, 9, ball);
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (lat.norm_sq(i) > 4) CHECK(r.at(i, 0) == Complex{});
  }
}

TEST_CASE("field serialization round trip") {
  const Lattice lat(3, 2);
  auto g = random_field(lat, 3, 31, RandomFieldOptions{1.0, 1.0, true, true, {}});
  std::stringstream ss;
  write_field(ss, g);
  const std::string bytes = ss.str();
  const auto header_end = bytes.find('\n');
  REQUIRE(header_end != std::string::npos);
  CHECK(bytes.size() - header_end - 1 == lat.size() * 3 * 16);
  CHECK(bytes.find("\"format\":\"torusns-field\"") < header_end);
  const auto back = read_field(ss);
  CHECK(back.lattice() == lat);
  CHECK(back.components() == 3);
  CHECK(back.flags().solenoidal);
  CHECK(sobolev_norm(back - g, 0.0) == 0.0);
}
