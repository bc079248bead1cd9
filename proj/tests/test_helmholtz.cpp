#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"
#include "torusns/errors.hpp"
#include "torusns/helmholtz.hpp"
#include "torusns/random.hpp"
#include "torusns/spectral.hpp"

using namespace torusns;

namespace {

double rel(const FourierField& a, const FourierField& b, double s = 0.0) {
  return sobolev_norm(a - b, s) / std::max(sobolev_norm(b, s), 1e-300);
}

FourierField solenoidal(const Lattice& lat, std::uint64_t seed) {
  RandomFieldOptions opt;
  opt.solenoidal = true;
  return random_field(lat, lat.dimension(), seed, opt);
}

}  // namespace

TEST_CASE("gradient projector") {
  for (int n : {2, 3}) {
    const Lattice lat(n, 6);
    const auto q = random_field(lat, 1, 10 + n);
    const auto G = grad(q);
    CHECK(rel(project_grad(G), G) <= 1e-14);
    CHECK(sobolev_norm(project_grad(solenoidal(lat, 20 + n)), 0.0) <= 1e-15);

    // Scalar potential from the series (xi . F) / (2 pi i |xi|^2), built here directly.
    const auto F = random_field(lat, n, 30 + n);
    FourierField pot(lat, 1);
    for (std::size_t i = 0; i < lat.size(); ++i) {
      if (i == lat.origin()) continue;
      Complex s = 0.0;
      for (int d = 0; d < n; ++d) s += static_cast<double>(lat.mode(i)[d]) * F.at(i, d);
      pot.at(i, 0) = s / Complex(0.0, oracle::kTwoPi * lat.norm_sq(i));
    }
    CHECK(rel(grad(pot), project_grad(F)) <= 1e-13);
    CHECK(project_grad(F).flags().potential);
  }
}

TEST_CASE("Leray projector") {
  for (int n : {2, 3}) {
    const Lattice lat(n, 6);
    const auto V = solenoidal(lat, 40 + n);
    CHECK(rel(project_sigma(V), V) <= 1e-14);
    const auto G = grad(random_field(lat, 1, 50 + n));
    CHECK(sobolev_norm(project_sigma(G), 0.0) <= 1e-14 * sobolev_norm(G, 0.0));
    const auto F = random_field(lat, n, 60 + n);
    const auto P = project_sigma(F);
    CHECK(P.divergence_defect() <= 1e-14);
    CHECK(P.flags().solenoidal);
    CHECK(rel(project_grad(F) + P, F) <= 1e-14);
    CHECK(rel(project_sigma(P), P) <= 1e-14);
  }
}

TEST_CASE("decomposition properties") {
  for (int n : {2, 3}) {
    const Lattice lat(n, 5);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto F = random_field(lat, n, 100 * n + seed);
      const auto G = random_field(lat, n, 200 * n + seed);
      for (double s : {-1.0, 0.0, 1.0}) {
        const double ip = std::abs(inner_product(project_grad(F), project_sigma(G), s));
        CHECK(ip <= 1e-13 * sobolev_norm(F, s) * sobolev_norm(G, s));
      }
      const auto V = solenoidal(lat, 300 * n + seed);
      CHECK(std::abs(dual_product(project_grad(F), V)) <= 1e-13 * sobolev_norm(F, 0) * sobolev_norm(V, 0));

      // Independent parts are recovered exactly.
      const auto Fg = grad(random_field(lat, 1, 400 * n + seed));
      const auto Fs = solenoidal(lat, 500 * n + seed);
      const auto sum = Fg + Fs;
      CHECK(rel(project_grad(sum), Fg) <= 1e-14);
      CHECK(rel(project_sigma(sum), Fs) <= 1e-14);

      // Projectors commute with the Bessel potential.
      CHECK(rel(project_sigma(bessel_potential(F, 1.5)), bessel_potential(project_sigma(F), 1.5)) <= 1e-15);
    }
  }
}

TEST_CASE("non-dotted input is rejected") {
  const Lattice lat(2, 3);
  RandomFieldOptions opt;
  opt.dotted = false;
  const auto F = random_field(lat, 2, 3, opt);
  CHECK_THROWS_AS(project_grad(F), DomainError);
  CHECK_THROWS_AS(project_sigma(F), DomainError);
  CHECK_THROWS_AS(solve_div(random_field(lat, 1, 4, opt)), DomainError);
  CHECK_THROWS_AS(project_sigma(random_field(lat, 1, 5)), DomainError);
}

TEST_CASE("divergence equation") {
  const Lattice lat(2, 4);
  CHECK(sobolev_norm(solve_div(FourierField(lat, 1)), 0.0) == 0.0);

  FourierField f(lat, 1);
  const std::size_t i = lat.index_of(std::vector<int>{0, 1});
  f.at(i, 0) = 1.0;
  const auto F = solve_div(f);
  CHECK(std::abs(F.at(i, 0)) == 0.0);
  CHECK(std::abs(F.at(i, 1) - 1.0 / Complex(0.0, oracle::kTwoPi)) <= 1e-16);

  for (int n : {2, 3}) {
    const Lattice l(n, 5);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto g = random_field(l, 1, 700 + seed);
      const auto G = solve_div(g);
      CHECK(rel(div(G), g) <= 1e-14);
      CHECK(G.flags().potential);
      for (double s : {-1.0, 0.0, 1.0}) CHECK(sobolev_norm(G, s + 1) <= std::sqrt(2.0) * sobolev_norm(g, s));
    }
  }
}

TEST_CASE("gradient equation") {
  const Lattice lat(3, 4);
  CHECK(sobolev_norm(solve_grad(FourierField(lat, 3)), 0.0) == 0.0);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto q = random_field(lat, 1, 800 + seed);
    const auto G = grad(q);
    const auto f = solve_grad(G);
    CHECK(rel(f, q) <= 1e-13);
    CHECK(rel(grad(f), G) <= 1e-13);
    for (double s : {-1.0, 0.0, 1.0}) CHECK(sobolev_norm(f, s) <= std::sqrt(2.0) * sobolev_norm(G, s - 1));
  }
  // A solenoidal remainder makes the equation unsolvable.
  auto bad = grad(random_field(lat, 1, 900));
  bad.axpy(1e-6, solenoidal(lat, 901));
  CHECK_THROWS_AS(solve_grad(bad), DomainError);
  auto fine = grad(random_field(lat, 1, 902));
  fine.axpy(1e-14, solenoidal(lat, 903));
  CHECK_NOTHROW(solve_grad(fine));
}
