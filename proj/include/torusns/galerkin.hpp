#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "torusns/advection.hpp"
#include "torusns/basis.hpp"
#include "torusns/field.hpp"
#include "torusns/viscosity.hpp"

namespace torusns {

enum class Stepper {
  rk4,    // classical explicit Runge-Kutta
  ifrk4,  // Lawson integrating-factor RK4 on a frozen diagonal viscous part
  imex,   // first order, frozen diagonal viscous part implicit
};
Stepper parse_stepper(const std::string& name);
std::string to_string(Stepper stepper);

/// Body force f(x, t) as a vector field on a fixed lattice.
class Forcing {
 public:
  Forcing() = default;
  static Forcing steady(FourierField f);
  static Forcing unsteady(Lattice lattice, std::function<FourierField(double)> f);

  bool is_zero() const noexcept { return !steady_ && !eval_; }
  bool time_dependent() const noexcept { return static_cast<bool>(eval_); }
  /// f(., t); nullopt for zero forcing.
  std::optional<FourierField> at(double t) const;
  /// int_0^T ||f||^2_{H^-1} dt, exact for steady forcing and composite Simpson otherwise.
  double dual_norm_sq(double T, int intervals = 256) const;

 private:
  std::optional<FourierField> steady_;
  std::optional<Lattice> lattice_;
  std::function<FourierField(double)> eval_;
};

struct SolverConfig {
  std::size_t modes = 0;  // m; 0 selects the whole basis
  double T = 0.1;
  double dt = 1e-3;
  Stepper stepper = Stepper::rk4;
  std::optional<double> adaptive_tolerance;  // step doubling when set
  double min_dt = 1e-12;
  int diagnostics_every = 1;  // ledger sample every k accepted steps
  bool advection = true;      // false gives the Stokes system
  AdvectionMethod method = AdvectionMethod::pseudospectral;
  std::size_t matrix_free_above = 512;  // stiffness assembled only for m <= this
  double blowup_factor = 1e3;
};

/// Coefficient derivative and its parts: eta' = forcing - viscous - nonlinear.
struct RhsTerms {
  std::vector<double> derivative;
  std::vector<double> forcing;    // <f, w_k>
  std::vector<double> viscous;    // a_T(u_m, w_k)
  std::vector<double> nonlinear;  // <(u_m . grad) u_m, w_k>
  double a_T = 0.0;               // a_T(u_m, u_m)
  double forcing_power = 0.0;     // <f, u_m>
  double nonlinear_work = 0.0;    // <(u_m . grad) u_m, u_m>
  double h1_sq = 0.0;             // ||u_m||^2_{H^1}
};

struct GalerkinState {
  double t = 0.0;
  std::vector<double> eta;
};

/// The Galerkin ODE system for one basis, mode count, tensor and forcing.
class GalerkinSystem {
 public:
  GalerkinSystem(std::shared_ptr<const GalerkinBasis> basis, ViscosityTensor A, Forcing f, SolverConfig config);

  std::size_t size() const noexcept { return m_; }
  const GalerkinBasis& basis() const noexcept { return *basis_; }
  const ViscosityTensor& tensor() const noexcept { return A_; }
  const Forcing& forcing() const noexcept { return f_; }
  const SolverConfig& config() const noexcept { return config_; }
  bool assembled() const noexcept { return !stiffness_.empty(); }

  /// u_m = sum eta_l w_l on the basis lattice.
  FourierField synthesize(std::span<const double> eta) const;
  RhsTerms assemble_rhs(double t, std::span<const double> eta) const;
  /// a_T(t; w_l, w_k) row-major, or empty when matrix-free.
  const std::vector<double>& stiffness() const noexcept { return stiffness_; }
  /// Constant-coefficient diagonal a_T(w_k, w_k) of the mean tensor at t = 0.
  const std::vector<double>& frozen_diagonal() const noexcept { return diagonal_; }

 private:
  const TensorSamples& samples_at(double t) const;
  std::vector<double> forcing_coefficients(double t) const;

  std::shared_ptr<const GalerkinBasis> basis_;
  ViscosityTensor A_;
  Forcing f_;
  SolverConfig config_;
  std::size_t m_;
  int grid_;
  std::vector<double> stiffness_;
  std::vector<double> diagonal_;
  std::vector<double> steady_forcing_;
  mutable std::map<double, TensorSamples> sample_cache_;
};

/// eta(0) = <u0, w_l>. Throws DomainError when u0 has a mean or a gradient part.
GalerkinState set_initial(const GalerkinBasis& basis, std::size_t m, const FourierField& u0);

struct LedgerSample {
  double t = 0.0;
  double energy = 0.0;          // ||u_m||^2
  double a_T = 0.0;             // a_T(u_m, u_m)
  double forcing_power = 0.0;   // <f, u_m>
  double nonlinear_work = 0.0;  // <(u_m . grad) u_m, u_m>
  double h1_sq = 0.0;           // ||u_m||^2_{H^1}
  double int_a = 0.0;           // int_0^t a_T
  double int_f = 0.0;           // int_0^t <f, u_m>
  double int_h1 = 0.0;          // int_0^t ||u_m||^2_{H^1}
  double sup_energy = 0.0;      // max over samples so far
};

struct EnergyLedger {
  std::vector<LedgerSample> samples;
  double c_a = 0.0;
  double tensor_norm = 0.0;
  double forcing_dual_sq = 0.0;  // ||f||^2_{L2(0,T;H^-1)}
  double b1 = 0.0;               // ||u0||^2 + 4 C_A ||f||^2
  double b2 = 0.0;               // 4 C_A b1
};

struct TrajectorySample {
  double t = 0.0;
  std::vector<double> eta;
  std::vector<double> eta_prime;  // stored RHS
};

struct IntegrationResult {
  std::vector<TrajectorySample> samples;
  EnergyLedger ledger;
  std::size_t steps = 0;
  std::size_t rejected = 0;
};

struct IntegrationCallbacks {
  std::function<void(const TrajectorySample&, const LedgerSample&)> on_sample;
};

/// B1 and B2 from the initial energy, C_A and the forcing over [0, T].
EnergyLedger make_ledger(double initial_energy, const EllipticityCertificate& certificate, double forcing_dual_sq);

/// Advance from `initial` to config.T. Throws BlowUpError, StepSizeUnderflow.
IntegrationResult integrate(const GalerkinSystem& system, const GalerkinState& initial,
                            const EllipticityCertificate& certificate, const IntegrationCallbacks& callbacks = {});

/// d/dt(||u||^2/2) by second-order finite differences of the sampled energy
/// plus a_T - <f, u>, one value per ledger sample.
std::vector<double> energy_residuals(const EnergyLedger& ledger);
/// The residual at the ledger sample closest to t.
double energy_identity_residual(const EnergyLedger& ledger, double t);
/// One value per step between samples: (||u||^2/2 increment + int a_T - int <f,u>) / dt.
std::vector<double> step_energy_residuals(const EnergyLedger& ledger);

struct EnergyInequalityReport {
  double t0 = 0.0, t = 0.0;
  double lhs = 0.0;            // ||u(t)||^2 + 2 int a_T
  double rhs = 0.0;            // ||u(t0)||^2 + 2 int <f, u>
  double defect = 0.0;         // lhs - rhs
  double tolerance = 0.0;      // 10 x quadrature error estimate
  bool inequality_holds = false;
  double sup_energy = 0.0, b1 = 0.0;
  double h1_integral = 0.0, b2 = 0.0;
  bool b1_holds = false, b2_holds = false;
  bool monotone_energy = false;  // ||u|| non-increasing over [t0, t]
};
EnergyInequalityReport energy_inequality_check(const EnergyLedger& ledger, double t0, double t);

/// <u' + (u . grad) u, w> + a_T(u, w) + <grad p, w> - <f, w> at time t.
double weak_residual(const FourierField& u, const FourierField& u_prime, const FourierField& p,
                     const std::optional<FourierField>& f, const ViscosityTensor& A, const FourierField& w, double t);

/// p = solve_grad(P_g[f + L u - (u . grad) u]).
FourierField recover_pressure(const FourierField& u, const std::optional<FourierField>& f, const ViscosityTensor& A,
                              double t);

struct TimeDerivativeReport {
  double max_abs_defect = 0.0;
  double max_relative_defect = 0.0;  // relative to max |rhs|
  std::size_t points = 0;
};
/// d/dt ||u||^2_{H^{(s+s')/2}} (central differences) against 2 <Lambda^{s+s'} u', u> (stored RHS).
TimeDerivativeReport time_derivative_identity_check(const GalerkinBasis& basis,
                                                    const std::vector<TrajectorySample>& samples, double s,
                                                    double s_prime);

}  // namespace torusns
