// Command-line driver: run, verify, describe.

#include <algorithm>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "torusns/errors.hpp"
#include "torusns/scenario.hpp"
#include "torusns/verify.hpp"

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2, kGuard = 3, kEllipticity = 4 };

struct Overrides {
  std::string config;
  std::optional<std::string> scenario, stepper, tensor, out_dir;
  std::optional<int> n, K, diagnostics_every;
  std::optional<std::size_t> m;
  std::optional<double> T, dt, nu;
  std::optional<std::uint64_t> seed;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "key = value configuration file");
    app->add_option("--scenario", scenario, "taylor-green | zero | manufactured | random-anisotropic");
    app->add_option("--n", n, "spatial dimension (2 or 3)");
    app->add_option("--K", K, "Fourier cutoff");
    app->add_option("--m", m, "Galerkin mode count (0: whole basis)");
    app->add_option("--T", T, "time horizon");
    app->add_option("--dt", dt, "time step");
    app->add_option("--stepper", stepper, "rk4 | ifrk4 | imex");
    app->add_option("--nu", nu, "viscosity of the default tensor");
    app->add_option("--tensor", tensor, "tensor preset or JSON coefficient table");
    app->add_option("--seed", seed, "random seed");
    app->add_option("--out-dir", out_dir, "output directory");
    app->add_option("--diagnostics-every", diagnostics_every, "ledger sample every k steps");
  }

  torusns::ScenarioConfig resolve() const {
    torusns::ScenarioConfig c;
    if (!config.empty()) c = torusns::load_config(config);
    auto set = [&](const char* key, const auto& value) {
      if (value) {
        std::ostringstream os;
        os << std::setprecision(17) << *value;
        torusns::apply_setting(c, key, os.str());
      }
    };
    set("scenario", scenario);
    set("stepper", stepper);
    set("tensor", tensor);
    set("out_dir", out_dir);
    set("n", n);
    set("K", K);
    set("diagnostics_every", diagnostics_every);
    set("m", m);
    set("T", T);
    set("dt", dt);
    set("nu", nu);
    set("seed", seed);
    return c;
  }
};

void print_witness(const torusns::EllipticityViolation& e) {
  std::cerr << "error: " << e.what() << "\nwitness: x = (";
  for (std::size_t i = 0; i < e.x().size(); ++i) std::cerr << (i ? ", " : "") << e.x()[i];
  std::cerr << "), t = " << e.t() << ", zeta = [";
  for (std::size_t i = 0; i < e.zeta().size(); ++i) std::cerr << (i ? ", " : "") << e.zeta()[i];
  std::cerr << "], form value = " << e.form_value() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral Faedo-Galerkin solver for anisotropic Navier-Stokes on the torus"};
  app.require_subcommand(1);

  Overrides run_opts, describe_opts;
  auto* run = app.add_subcommand("run", "integrate a scenario and write diagnostics");
  run_opts.attach(run);
  auto* describe = app.add_subcommand("describe", "print mode counts, certificate and a-priori bounds");
  describe_opts.attach(describe);
  std::string suite;
  auto* verify = app.add_subcommand("verify", "run a property suite and print a JSON report");
  verify->add_option("suite", suite, "projectors | korn | coercivity | trilinear | basis | isomorphisms | energy")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*verify) {
      const auto names = torusns::verify_suite_names();
      if (std::find(names.begin(), names.end(), suite) == names.end()) {
        std::cerr << "error: unknown suite '" << suite << "'\n" << verify->help();
        return kUsage;
      }
      const torusns::VerifyReport report = torusns::run_verify_suite(suite);
      std::cout << report.json() << '\n';
      return report.pass() ? kOk : kFailure;
    }
    if (*describe) {
      const auto scenario = torusns::build_scenario(describe_opts.resolve());
      std::cout << torusns::description_json(torusns::describe(scenario)) << '\n';
      return kOk;
    }
    const auto config = run_opts.resolve();
    const auto scenario = torusns::build_scenario(config);
    const auto d = torusns::describe(scenario);
    if (config.stepper == torusns::Stepper::rk4 && config.dt > d.stability_dt) {
      std::cerr << "warning: dt = " << config.dt << " exceeds the explicit RK4 bound " << d.stability_dt << '\n';
    }
    const auto summary = torusns::run_scenario(scenario);
    std::cout << "steps: " << summary.result.steps << "\ndiagnostics: " << summary.diagnostics.string()
              << "\nmanifest: " << summary.manifest.string() << '\n';
    if (summary.max_b1_violation > 0.0 || summary.max_b2_violation > 0.0) {
      std::cerr << "error: a-priori energy bound violated\n";
      return kGuard;
    }
    return kOk;
  } catch (const torusns::EllipticityViolation& e) {
    print_witness(e);
    return kEllipticity;
  } catch (const torusns::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const torusns::BlowUpError& e) {
    std::cerr << "blow-up guard: " << e.what() << '\n';
    return kGuard;
  } catch (const torusns::StepSizeUnderflow& e) {
    std::cerr << "step-size underflow: " << e.what() << '\n';
    return kGuard;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}
