#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>

#include "torusns/basis.hpp"
#include "torusns/galerkin.hpp"
#include "torusns/viscosity.hpp"

namespace torusns {

/// Everything a run needs; read from a key = value file and overridden by flags.
struct ScenarioConfig {
  std::string scenario = "taylor-green";  // taylor-green | zero | manufactured | random-anisotropic
  int n = 2;
  int K = 8;
  std::size_t m = 0;  // 0: whole basis
  double T = 0.1;
  double dt = 1e-3;
  Stepper stepper = Stepper::rk4;
  std::optional<double> adaptive_tolerance;
  double nu = 1.0;
  std::string tensor;  // preset expression or JSON table path; empty: scenario default
  std::uint64_t seed = 1;
  std::filesystem::path out_dir = "torusns-out";
  int diagnostics_every = 1;
  int checkpoint_every = 10;  // in ledger samples; the final sample is always written
  double amplitude = 1.0;
  double decay = 3.0;
  double forcing_amplitude = 0.0;
  bool advection = true;
};

std::vector<std::string> scenario_names();

/// Parse `key = value` lines; '#' starts a comment, strings may be quoted.
/// Throws ConfigError with the line number and key.
ScenarioConfig parse_config(std::istream& in, ScenarioConfig base = {});
ScenarioConfig load_config(const std::filesystem::path& path, ScenarioConfig base = {});
/// Apply one setting; `line` is only used in error messages.
void apply_setting(ScenarioConfig& config, const std::string& key, const std::string& value, int line = 0);

/// Canonical JSON of the configuration and its 64-bit FNV-1a hash (hex).
std::string config_json(const ScenarioConfig& config);
std::string config_hash(const ScenarioConfig& config);

/// Tensor preset: "isotropic(lambda,mu)", "isotropic-variable(mu0,amplitude,mode)",
/// "anisotropic-diagonal(w1,...,wn)" or a path to a JSON coefficient table.
ViscosityTensor parse_tensor(const std::string& spec, int dimension);

/// Certificate samples: the quadrature grid for cutoff K at t = 0, or at
/// t in {0, T/8, ..., T} for time-dependent tensors.
EllipticityCertificate certify(const ViscosityTensor& A, int cutoff, double T);

struct Scenario {
  ScenarioConfig config;
  std::shared_ptr<const GalerkinBasis> basis;
  ViscosityTensor tensor;
  EllipticityCertificate certificate;
  Forcing forcing;
  FourierField initial;                         // u0 on the basis lattice
  std::function<FourierField(double)> exact;    // known solution, if any

  SolverConfig solver_config() const;
};

/// Build basis, tensor, certificate, forcing and initial data.
/// Throws ConfigError, EllipticityViolation.
Scenario build_scenario(const ScenarioConfig& config);

/// Taylor-Green initial field amplitude * (sin 2pi x cos 2pi y, -cos 2pi x sin 2pi y) on cutoff K.
FourierField taylor_green_field(int cutoff, double amplitude = 1.0);

struct Description {
  std::size_t lattice_modes = 0;
  std::size_t ball_modes = 0;  // #{eta != 0 : |eta| <= K}
  std::size_t basis_size = 0;
  std::size_t m = 0;
  double c_a = 0.0;
  double mu_min = 0.0;
  double tensor_norm = 0.0;
  double initial_energy = 0.0;
  double forcing_dual_sq = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  double stability_dt = 0.0;  // 2.78 / (||A|| rho(K)^2), explicit RK4
  int quadrature_grid = 0;
  bool quadrature_exact = true;
  std::string tensor;
  std::string sample_description;
};
Description describe(const Scenario& scenario);
std::string description_json(const Description& d);

struct RunSummary {
  IntegrationResult result;
  std::filesystem::path diagnostics;
  std::filesystem::path manifest;
  std::vector<std::filesystem::path> checkpoints;
  double max_b1_violation = 0.0;  // > 0 means the a-priori bound failed
  double max_b2_violation = 0.0;
};

/// Integrate the scenario and write diagnostics.csv, manifest.json and checkpoints/*.bin
/// into config.out_dir. Throws BlowUpError, StepSizeUnderflow.
RunSummary run_scenario(const Scenario& scenario);

}  // namespace torusns
