#include "torusns/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "json.hpp"
#include "torusns/advection.hpp"
#include "torusns/basis.hpp"
#include "torusns/errors.hpp"
#include "torusns/galerkin.hpp"
#include "torusns/helmholtz.hpp"
#include "torusns/random.hpp"
#include "torusns/scenario.hpp"
#include "torusns/spectral.hpp"
#include "torusns/viscosity.hpp"

namespace torusns {
namespace {

class Collector {
 public:
  explicit Collector(std::string suite) { report_.suite = std::move(suite); }
  /// Track the worst value of a named check.
  void observe(const std::string& name, double value, double threshold) {
    for (auto& c : report_.checks) {
      if (c.name == name) {
        c.value = std::max(c.value, value);
        c.pass = c.value <= c.threshold;
        return;
      }
    }
    report_.checks.push_back({name, value, threshold, value <= threshold});
  }
  VerifyReport take() { return std::move(report_); }

 private:
  VerifyReport report_;
};

FourierField random_vector(int n, int K, std::uint64_t seed, bool solenoidal = false) {
  RandomFieldOptions opt;
  opt.solenoidal = solenoidal;
  return random_field(Lattice(n, K), n, seed, opt);
}

double rel(const FourierField& a, const FourierField& b, double s) {
  const double d = sobolev_norm(a - b, s);
  const double scale = std::max(sobolev_norm(b, s), 1e-300);
  return d / scale;
}

VerifyReport projectors() {
  Collector c("projectors");
  for (int n : {2, 3}) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const FourierField F = random_vector(n, 8, 1000 * n + seed);
      const FourierField G = random_vector(n, 8, 5000 * n + seed);
      const FourierField Pg = project_grad(F);
      const FourierField Ps = project_sigma(F);
      for (double s : {-1.0, 0.0, 1.0}) {
        c.observe("decomposition F = Pg F + Psigma F", rel(Pg + Ps, F, s), 1e-13);
        c.observe("idempotence Pg", rel(project_grad(Pg), Pg, s), 1e-13);
        c.observe("idempotence Psigma", rel(project_sigma(Ps), Ps, s), 1e-13);
        const double ip = std::abs(inner_product(Pg, project_sigma(G), s));
        c.observe("orthogonality (inner product)", ip / (sobolev_norm(F, s) * sobolev_norm(G, s)), 1e-13);
      }
      const double dp = std::abs(dual_product(Pg, project_sigma(G)));
      c.observe("orthogonality (dual product)", dp / (sobolev_norm(F, 0) * sobolev_norm(G, 0)), 1e-13);
      c.observe("Psigma output solenoidal", Ps.divergence_defect() / sobolev_norm(F, 0), 1e-13);
    }
  }
  return c.take();
}

VerifyReport isomorphisms() {
  Collector c("isomorphisms");
  for (int n : {2, 3}) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const Lattice lat(n, 8);
      const FourierField f = random_field(lat, 1, 7000 * n + seed);
      const FourierField F = solve_div(f);
      c.observe("div(solve_div f) = f", rel(div(F), f, 0.0), 1e-13);
      const FourierField q = random_field(lat, 1, 9000 * n + seed);
      const FourierField G = grad(q);
      const FourierField g = solve_grad(G);
      c.observe("grad(solve_grad F) = F", rel(grad(g), G, 0.0), 1e-13);
      for (double s : {-1.0, 0.0, 1.0}) {
        c.observe("||F||_{s+1} / (sqrt2 ||f||_s)", sobolev_norm(F, s + 1) / (std::numbers::sqrt2 * sobolev_norm(f, s)),
                  1.0);
        c.observe("||f||_s / (sqrt2 ||F||_{s-1})", sobolev_norm(g, s) / (std::numbers::sqrt2 * sobolev_norm(G, s - 1)),
                  1.0);
      }
    }
  }
  return c.take();
}

VerifyReport korn() {
  Collector c("korn");
  for (int n : {2, 3}) {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      RandomFieldOptions opt;
      opt.dotted = seed % 2 == 0;
      const FourierField v = random_field(Lattice(n, 6), n, 11000 * n + seed, opt);
      const KornSides k = korn_check(v);
      c.observe("||grad v||^2 - 2||E(v)||^2", k.lhs - k.rhs, 1e-12);
    }
  }
  return c.take();
}

VerifyReport coercivity() {
  Collector c("coercivity");
  const int K = 6;
  for (int n : {2, 3}) {
    std::vector<std::pair<std::string, ViscosityTensor>> tensors;
    tensors.emplace_back("isotropic constant", isotropic_constant(n, 0.5, 1.0));
    tensors.emplace_back("isotropic variable", isotropic_variable(n, 2.0, 1.0, 1));
    std::vector<double> w;
    for (int d = 0; d < n; ++d) w.push_back(1.0 + 0.5 * d);
    tensors.emplace_back("anisotropic diagonal", anisotropic_diagonal(w));
    for (const auto& [name, A] : tensors) {
      const EllipticityCertificate cert = certify(A, K, 1.0);
      for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const double t = A.time_dependent() ? 0.1 * static_cast<double>(seed % 10) : 0.0;
        const FourierField v = random_vector(n, K, 13000 * n + seed, true);
        const double a = bilinear_form(A, v, v, t);
        const double h1 = std::pow(sobolev_norm(v, 1.0), 2);
        c.observe(name + ": lower bound (1/4 C_A^-1 ||w||^2 / a_T)", 0.25 / cert.c_a * h1 / a, 1.0);
        c.observe(name + ": upper bound (a_T / ||A|| ||w||^2)", a / (cert.tensor_norm * h1), 1.0);
      }
    }
  }
  return c.take();
}

VerifyReport trilinear_suite() {
  Collector c("trilinear");
  const int K = 5;
  for (int n : {2, 3}) {
    for (AdvectionMethod method : {AdvectionMethod::pseudospectral, AdvectionMethod::convolution}) {
      const std::string tag = method == AdvectionMethod::pseudospectral ? " [pseudospectral]" : " [convolution]";
      const int count = n == 3 && method == AdvectionMethod::convolution ? 2 : 10;
      for (int s = 1; s <= count; ++s) {
        const auto seed = static_cast<std::uint64_t>(17000 * n + 3 * s);
        const FourierField v1 = random_vector(n, K, seed);
        const FourierField v2 = random_vector(n, K, seed + 1);
        const FourierField v3 = random_vector(n, K, seed + 2);
        const FourierField sol = random_vector(n, K, seed + 3, true);
        const double scale = sobolev_norm(v1, 0) * sobolev_norm(v2, 1) * sobolev_norm(v3, 0) * 1.0;
        const double lhs = trilinear(v1, v2, v3, method);
        const double rhs = -trilinear(v1, v3, v2, method) - dual_product(multiply(div(v1), v3), v2).real();
        c.observe("<(v1.grad)v2,v3> = -<(v1.grad)v3,v2> - <(div v1)v3,v2>" + tag, std::abs(lhs - rhs) / scale, 1e-11);
        const double l2 = trilinear(v1, v2, v2, method);
        const double r2 = -0.5 * dual_product(div(v1), dot(v2, v2)).real();
        c.observe("<(v1.grad)v2,v2> = -1/2 <div v1,|v2|^2>" + tag, std::abs(l2 - r2) / scale, 1e-11);
        const double l3 = trilinear(sol, v2, v3, method);
        const double r3 = -trilinear(sol, v3, v2, method);
        c.observe("solenoidal skew-symmetry" + tag, std::abs(l3 - r3) / scale, 1e-11);
        c.observe("<(v1.grad)v2,v2> = 0 for div v1 = 0" + tag, std::abs(trilinear(sol, v2, v2, method)) / scale, 1e-11);
      }
    }
  }
  return c.take();
}

VerifyReport basis_suite() {
  Collector c("basis");
  for (int n : {2, 3}) {
    const GalerkinBasis b(n, 4);
    std::vector<FourierField> w;
    for (std::size_t j = 0; j < b.size(); ++j) w.push_back(b.field(j));
    double gram = 0.0, eig = 0.0, divg = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
      const double lam = b.entry(j).eigenvalue;
      eig = std::max(eig, rel(bessel_potential(w[j], 1.0), lam * w[j], 0.0));
      divg = std::max(divg, w[j].divergence_defect());
      // w_k shares modes with w_j only when eta matches.
      for (std::size_t k = 0; k < w.size(); ++k) {
        if (b.entry(k).eta != b.entry(j).eta) continue;
        gram = std::max(gram, std::abs(dual_product(w[j], w[k]).real() - (j == k ? 1.0 : 0.0)));
      }
    }
    c.observe("Gram matrix - identity", gram, 1e-13);
    c.observe("Lambda w - rho(eta) w", eig, 1e-14);
    c.observe("div w", divg, 1e-15);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const FourierField h = random_vector(n, 4, 19000 * n + seed, true);
      for (std::size_t m : {b.size() / 4, b.size() / 2, b.size()}) {
        const FourierField p = project_Pm(h, b, m);
        for (double r : {-1.0, 0.0, 1.0}) {
          c.observe("||P_m h||_r / ||h||_r", sobolev_norm(p, r) / sobolev_norm(h, r), 1.0 + 1e-14);
        }
      }
    }
  }
  return c.take();
}

VerifyReport energy() {
  Collector c("energy");
  for (const std::string name : {"taylor-green", "random-anisotropic", "manufactured"}) {
    ScenarioConfig cfg;
    cfg.scenario = name;
    cfg.K = 6;
    cfg.T = 0.02;
    cfg.dt = 5e-4;
    cfg.stepper = Stepper::ifrk4;
    cfg.forcing_amplitude = name == "random-anisotropic" ? 0.5 : 0.0;
    const Scenario s = build_scenario(cfg);
    GalerkinSystem sys(s.basis, s.tensor, s.forcing, s.solver_config());
    const auto res = integrate(sys, set_initial(*s.basis, sys.size(), s.initial), s.certificate);
    const auto rep = energy_inequality_check(res.ledger, 0.0, cfg.T);
    c.observe(name + ": energy inequality defect - tolerance", rep.defect - rep.tolerance, 0.0);
    c.observe(name + ": sup ||u||^2 / B1", rep.sup_energy / rep.b1, 1.0);
    c.observe(name + ": ||u||^2_{L2 H1} / B2", rep.h1_integral / rep.b2, 1.0);
    double work = 0.0;
    for (const auto& smp : res.ledger.samples) {
      work = std::max(work, std::abs(smp.nonlinear_work) / std::max(smp.h1_sq, 1e-300));
    }
    c.observe(name + ": nonlinear work / ||u||^2_H1", work, 1e-10);
  }
  return c.take();
}

}  // namespace

bool VerifyReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.pass; });
}

std::string VerifyReport::json() const {
  nlohmann::ordered_json j;
  j["suite"] = suite;
  j["pass"] = pass();
  auto& arr = j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    arr.push_back({{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"pass", c.pass}});
  }
  return j.dump(2);
}

std::vector<std::string> verify_suite_names() {
  return {"projectors", "korn", "coercivity", "trilinear", "basis", "isomorphisms", "energy"};
}

VerifyReport run_verify_suite(const std::string& name) {
  if (name == "projectors") return projectors();
  if (name == "isomorphisms") return isomorphisms();
  if (name == "korn") return korn();
  if (name == "coercivity") return coercivity();
  if (name == "trilinear") return trilinear_suite();
  if (name == "basis") return basis_suite();
  if (name == "energy") return energy();
  throw ConfigError("unknown verify suite '" + name + "'", 0, "suite");
}

}  // namespace torusns
