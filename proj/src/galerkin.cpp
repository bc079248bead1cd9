#include "torusns/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "torusns/errors.hpp"
#include "torusns/helmholtz.hpp"
#include "torusns/spectral.hpp"

namespace torusns {
namespace {

constexpr double kPi = std::numbers::pi;

double dot(std::span<const double> a, std::span<const double> b) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<long double>(a[i]) * b[i];
  return static_cast<double>(s);
}

/// Derivative at x[j] of the quadratic through (x[k], f[k]), k = 0..2.
double lagrange3_derivative(const double x[3], const double f[3], int j) {
  double d = 0.0;
  for (int k = 0; k < 3; ++k) {
    // l_k'(x_j) = sum_{m != k} prod_{l != k, m} (x_j - x_l) / prod_{l != k} (x_k - x_l)
    double denom = 1.0;
    for (int l = 0; l < 3; ++l) {
      if (l != k) denom *= x[k] - x[l];
    }
    double num = 0.0;
    for (int m = 0; m < 3; ++m) {
      if (m == k) continue;
      double p = 1.0;
      for (int l = 0; l < 3; ++l) {
        if (l != k && l != m) p *= x[j] - x[l];
      }
      num += p;
    }
    d += f[k] * num / denom;
  }
  return d;
}

/// Derivative of f at every sample by three-point stencils (one-sided at the ends).
std::vector<double> sampled_derivative(const std::vector<double>& t, const std::vector<double>& f) {
  const std::size_t n = t.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  if (n == 2) {
    d[0] = d[1] = (f[1] - f[0]) / (t[1] - t[0]);
    return d;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = std::clamp<std::size_t>(i, 1, n - 2);
    const double x[3] = {t[c - 1], t[c], t[c + 1]};
    const double y[3] = {f[c - 1], f[c], f[c + 1]};
    d[i] = lagrange3_derivative(x, y, static_cast<int>(i + 1 - c));
  }
  return d;
}

std::size_t nearest_sample(const EnergyLedger& ledger, double t) {
  if (ledger.samples.empty()) throw DomainError("empty energy ledger");
  std::size_t best = 0;
  for (std::size_t i = 1; i < ledger.samples.size(); ++i) {
    if (std::abs(ledger.samples[i].t - t) < std::abs(ledger.samples[best].t - t)) best = i;
  }
  return best;
}

FourierField on_lattice(const FourierField& f, const Lattice& lattice) {
  if (f.lattice() == lattice) return f;
  return resample(f, lattice.cutoff());
}

}  // namespace

Stepper parse_stepper(const std::string& name) {
  if (name == "rk4") return Stepper::rk4;
  if (name == "ifrk4") return Stepper::ifrk4;
  if (name == "imex") return Stepper::imex;
  throw ConfigError("unknown stepper '" + name + "' (expected rk4, ifrk4 or imex)", 0, "stepper");
}

std::string to_string(Stepper stepper) {
  switch (stepper) {
    case Stepper::rk4: return "rk4";
    case Stepper::ifrk4: return "ifrk4";
    case Stepper::imex: return "imex";
  }
  return "?";
}

// --- forcing ---------------------------------------------------------------

Forcing Forcing::steady(FourierField f) {
  Forcing out;
  out.lattice_ = f.lattice();
  out.steady_ = std::move(f);
  return out;
}

Forcing Forcing::unsteady(Lattice lattice, std::function<FourierField(double)> f) {
  Forcing out;
  out.lattice_ = std::move(lattice);
  out.eval_ = std::move(f);
  return out;
}

std::optional<FourierField> Forcing::at(double t) const {
  if (steady_) return steady_;
  if (eval_) return eval_(t);
  return std::nullopt;
}

double Forcing::dual_norm_sq(double T, int intervals) const {
  if (is_zero()) return 0.0;
  if (steady_) {
    const double v = sobolev_norm(*steady_, -1.0);
    return T * v * v;
  }
  if (intervals % 2 != 0) ++intervals;
  const double h = T / intervals;
  double s = 0.0;
  for (int i = 0; i <= intervals; ++i) {
    const double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const double v = sobolev_norm(eval_(i * h), -1.0);
    s += w * v * v;
  }
  return s * h / 3.0;
}

// --- system ----------------------------------------------------------------

GalerkinSystem::GalerkinSystem(std::shared_ptr<const GalerkinBasis> basis, ViscosityTensor A, Forcing f,
                               SolverConfig config)
    : basis_(std::move(basis)), A_(std::move(A)), f_(std::move(f)), config_(config) {
  if (!basis_) throw DomainError("Galerkin system needs a basis");
  if (A_.dimension() != basis_->dimension()) throw LatticeMismatch("tensor and basis dimensions differ");
  m_ = config_.modes == 0 ? basis_->size() : config_.modes;
  if (m_ > basis_->size()) {
    throw DomainError("m = " + std::to_string(m_) + " exceeds the basis size " + std::to_string(basis_->size()));
  }
  if (!(config_.T > 0.0)) throw DomainError("time horizon T must be positive");
  if (!(config_.dt > 0.0)) throw DomainError("time step dt must be positive");
  if (config_.diagnostics_every < 1) throw DomainError("diagnostics cadence must be >= 1");
  grid_ = A_.quadrature_grid(basis_->cutoff());

  const int n = basis_->dimension();
  const TensorSamples& s0 = samples_at(0.0);
  const std::size_t e = A_.entries();
  std::vector<double> mean(e, 0.0);
  const std::size_t pts = s0.values.size() / e;
  for (std::size_t p = 0; p < pts; ++p) {
    for (std::size_t k = 0; k < e; ++k) mean[k] += s0.values[p * e + k];
  }
  for (auto& v : mean) v /= static_cast<double>(pts);

  diagonal_.resize(m_);
  for (std::size_t k = 0; k < m_; ++k) {
    const BasisEntry& b = basis_->entry(k);
    auto g = [&](int j, int beta) {
      return b.eta[static_cast<std::size_t>(j)] * b.polarization[static_cast<std::size_t>(beta)] +
             b.eta[static_cast<std::size_t>(beta)] * b.polarization[static_cast<std::size_t>(j)];
    };
    double d = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int al = 0; al < n; ++al)
          for (int be = 0; be < n; ++be) d += mean[ViscosityTensor::index(n, i, j, al, be)] * g(j, be) * g(i, al);
    diagonal_[k] = kPi * kPi * d;
  }

  if (!A_.time_dependent() && m_ <= config_.matrix_free_above) {
    stiffness_.assign(m_ * m_, 0.0);
    for (std::size_t l = 0; l < m_; ++l) {
      const FourierField Lw = apply_L(s0, basis_->field(l));
      for (std::size_t k = 0; k < m_; ++k) stiffness_[k * m_ + l] = -basis_->coefficient(Lw, k);
    }
  }
  if (f_.at(0.0) && !f_.time_dependent()) steady_forcing_ = basis_->coefficients(*f_.at(0.0), m_);
}

const TensorSamples& GalerkinSystem::samples_at(double t) const {
  const double key = A_.time_dependent() ? t : 0.0;
  if (auto it = sample_cache_.find(key); it != sample_cache_.end()) return it->second;
  if (sample_cache_.size() > 8) sample_cache_.clear();
  return sample_cache_.emplace(key, sample_tensor(A_, grid_, key)).first->second;
}

std::vector<double> GalerkinSystem::forcing_coefficients(double t) const {
  if (f_.is_zero()) return std::vector<double>(m_, 0.0);
  if (!f_.time_dependent()) return steady_forcing_;
  return basis_->coefficients(*f_.at(t), m_);
}

FourierField GalerkinSystem::synthesize(std::span<const double> eta) const { return basis_->synthesize(eta); }

RhsTerms GalerkinSystem::assemble_rhs(double t, std::span<const double> eta) const {
  if (eta.size() != m_) throw DomainError("state vector length differs from m");
  RhsTerms r;
  r.forcing = forcing_coefficients(t);
  r.viscous.assign(m_, 0.0);
  r.nonlinear.assign(m_, 0.0);

  const bool need_field = !assembled() || config_.advection;
  FourierField u = need_field ? synthesize(eta) : FourierField(basis_->lattice(), basis_->dimension());
  if (assembled()) {
    for (std::size_t k = 0; k < m_; ++k) r.viscous[k] = dot(std::span(stiffness_).subspan(k * m_, m_), eta);
  } else {
    const FourierField Lu = apply_L(samples_at(t), u);
    for (std::size_t k = 0; k < m_; ++k) r.viscous[k] = -basis_->coefficient(Lu, k);
  }
  if (config_.advection) {
    const FourierField adv = advect(u, u, config_.method);
    for (std::size_t k = 0; k < m_; ++k) r.nonlinear[k] = basis_->coefficient(adv, k);
  }

  r.derivative.resize(m_);
  double h1 = 0.0;
  for (std::size_t k = 0; k < m_; ++k) {
    r.derivative[k] = r.forcing[k] - r.viscous[k] - r.nonlinear[k];
    const double lam = basis_->entry(k).eigenvalue;
    h1 += lam * lam * eta[k] * eta[k];
  }
  r.a_T = dot(eta, r.viscous);
  r.forcing_power = dot(eta, r.forcing);
  r.nonlinear_work = dot(eta, r.nonlinear);
  r.h1_sq = h1;
  return r;
}

GalerkinState set_initial(const GalerkinBasis& basis, std::size_t m, const FourierField& u0) {
  if (u0.dimension() != basis.dimension() || u0.components() != basis.dimension()) {
    throw LatticeMismatch("initial data must be an n-vector field");
  }
  const double norm = sobolev_norm(u0, 0.0);
  GalerkinState s;
  if (norm == 0.0) {
    s.eta.assign(m, 0.0);
    return s;
  }
  if (u0.mean_magnitude() > kDecompositionTolerance * norm) throw DomainError("initial data has a nonzero mean");
  const double grad_part = sobolev_norm(project_grad(u0), 0.0);
  if (grad_part > kDecompositionTolerance * norm) {
    throw DomainError("initial data is not solenoidal (gradient part of relative size " +
                      std::to_string(grad_part / norm) + "); apply project_sigma first");
  }
  s.eta = basis.coefficients(u0, m);
  return s;
}

EnergyLedger make_ledger(double initial_energy, const EllipticityCertificate& certificate, double forcing_dual_sq) {
  EnergyLedger l;
  l.c_a = certificate.c_a;
  l.tensor_norm = certificate.tensor_norm;
  l.forcing_dual_sq = forcing_dual_sq;
  l.b1 = initial_energy + 4.0 * certificate.c_a * forcing_dual_sq;
  l.b2 = 4.0 * certificate.c_a * l.b1;
  return l;
}

// --- time stepping -----------------------------------------------------------

namespace {

struct Aux {
  double a = 0.0, f = 0.0, h1 = 0.0;
  static Aux of(const RhsTerms& r) { return {r.a_T, r.forcing_power, r.h1_sq}; }
  Aux& add(double w, const Aux& o) {
    a += w * o.a;
    f += w * o.f;
    h1 += w * o.h1;
    return *this;
  }
};

struct StepOutcome {
  std::vector<double> eta;
  Aux increment;
};

class Stepping {
 public:
  explicit Stepping(const GalerkinSystem& sys) : sys_(sys), D_(sys.frozen_diagonal()) {}

  /// One step of size h from (t, eta) whose RHS is `r0`.
  StepOutcome step(double t, const std::vector<double>& eta, const RhsTerms& r0, double h) const {
    switch (sys_.config().stepper) {
      case Stepper::rk4: return rk4(t, eta, r0, h);
      case Stepper::ifrk4: return ifrk4(t, eta, r0, h);
      case Stepper::imex: return imex(t, eta, r0, h);
    }
    return {};
  }
  int order() const { return sys_.config().stepper == Stepper::imex ? 1 : 4; }

 private:
  StepOutcome rk4(double t, const std::vector<double>& y, const RhsTerms& r1, double h) const {
    const std::size_t m = y.size();
    std::vector<double> s(m);
    auto stage = [&](const std::vector<double>& k, double c) {
      for (std::size_t i = 0; i < m; ++i) s[i] = y[i] + c * k[i];
      return s;
    };
    const RhsTerms r2 = sys_.assemble_rhs(t + 0.5 * h, stage(r1.derivative, 0.5 * h));
    const RhsTerms r3 = sys_.assemble_rhs(t + 0.5 * h, stage(r2.derivative, 0.5 * h));
    const RhsTerms r4 = sys_.assemble_rhs(t + h, stage(r3.derivative, h));
    StepOutcome out{std::vector<double>(m), {}};
    for (std::size_t i = 0; i < m; ++i) {
      out.eta[i] = y[i] + h / 6.0 *
                              (r1.derivative[i] + 2.0 * r2.derivative[i] + 2.0 * r3.derivative[i] + r4.derivative[i]);
    }
    out.increment.add(h / 6.0, Aux::of(r1)).add(h / 3.0, Aux::of(r2)).add(h / 3.0, Aux::of(r3)).add(h / 6.0, Aux::of(r4));
    return out;
  }

  // Lawson RK4 for eta' = -D eta + N(t, eta), N = R + D eta.
  StepOutcome ifrk4(double t, const std::vector<double>& y, const RhsTerms& r1, double h) const {
    const std::size_t m = y.size();
    std::vector<double> E(m), E2(m), s(m);
    for (std::size_t i = 0; i < m; ++i) {
      E2[i] = std::exp(-0.5 * h * D_[i]);
      E[i] = E2[i] * E2[i];
    }
    auto N = [&](const RhsTerms& r, const std::vector<double>& state, std::size_t i) {
      return r.derivative[i] + D_[i] * state[i];
    };
    std::vector<double> k1(m), k2(m), k3(m), k4(m);
    for (std::size_t i = 0; i < m; ++i) {
      k1[i] = N(r1, y, i);
      s[i] = E2[i] * (y[i] + 0.5 * h * k1[i]);
    }
    const std::vector<double> s2 = s;
    const RhsTerms r2 = sys_.assemble_rhs(t + 0.5 * h, s2);
    for (std::size_t i = 0; i < m; ++i) {
      k2[i] = N(r2, s2, i);
      s[i] = E2[i] * y[i] + 0.5 * h * k2[i];
    }
    const std::vector<double> s3 = s;
    const RhsTerms r3 = sys_.assemble_rhs(t + 0.5 * h, s3);
    for (std::size_t i = 0; i < m; ++i) {
      k3[i] = N(r3, s3, i);
      s[i] = E[i] * y[i] + h * E2[i] * k3[i];
    }
    const std::vector<double> s4 = s;
    const RhsTerms r4 = sys_.assemble_rhs(t + h, s4);
    StepOutcome out{std::vector<double>(m), {}};
    for (std::size_t i = 0; i < m; ++i) {
      k4[i] = N(r4, s4, i);
      out.eta[i] = E[i] * y[i] + h / 6.0 * (E[i] * k1[i] + 2.0 * E2[i] * (k2[i] + k3[i]) + k4[i]);
    }
    out.increment.add(h / 6.0, Aux::of(r1)).add(h / 3.0, Aux::of(r2)).add(h / 3.0, Aux::of(r3)).add(h / 6.0, Aux::of(r4));
    return out;
  }

  StepOutcome imex(double t, const std::vector<double>& y, const RhsTerms& r1, double h) const {
    const std::size_t m = y.size();
    StepOutcome out{std::vector<double>(m), {}};
    for (std::size_t i = 0; i < m; ++i) {
      out.eta[i] = (y[i] + h * (r1.derivative[i] + D_[i] * y[i])) / (1.0 + h * D_[i]);
    }
    const RhsTerms r2 = sys_.assemble_rhs(t + h, out.eta);
    out.increment.add(0.5 * h, Aux::of(r1)).add(0.5 * h, Aux::of(r2));
    return out;
  }

  const GalerkinSystem& sys_;
  const std::vector<double>& D_;
};

void guard(const std::vector<double>& eta, double t, double bound) {
  double e = 0.0;
  for (double v : eta) e += v * v;
  if (!std::isfinite(e)) {
    std::ostringstream os;
    os << "non-finite Galerkin state at t = " << t;
    throw BlowUpError(os.str());
  }
  if (std::sqrt(e) > bound) {
    std::ostringstream os;
    os << "||u_m|| = " << std::sqrt(e) << " exceeds the blow-up guard " << bound << " at t = " << t;
    throw BlowUpError(os.str());
  }
}

}  // namespace

IntegrationResult integrate(const GalerkinSystem& system, const GalerkinState& initial,
                            const EllipticityCertificate& certificate, const IntegrationCallbacks& callbacks) {
  const SolverConfig& cfg = system.config();
  if (initial.eta.size() != system.size()) throw DomainError("initial state length differs from m");
  if (!(certificate.c_a > 0.0)) throw DomainError("integration needs a positive ellipticity certificate");

  IntegrationResult result;
  const double e0 = dot(initial.eta, initial.eta);
  result.ledger = make_ledger(e0, certificate, system.forcing().dual_norm_sq(cfg.T));
  const double bound = cfg.blowup_factor * std::sqrt(result.ledger.b1);

  Stepping stepper(system);
  double t = initial.t;
  std::vector<double> eta = initial.eta;
  RhsTerms rhs = system.assemble_rhs(t, eta);
  Aux total;
  double sup = e0;

  auto record = [&](double time) {
    TrajectorySample ts{time, eta, rhs.derivative};
    LedgerSample ls;
    ls.t = time;
    ls.energy = dot(eta, eta);
    sup = std::max(sup, ls.energy);
    ls.a_T = rhs.a_T;
    ls.forcing_power = rhs.forcing_power;
    ls.nonlinear_work = rhs.nonlinear_work;
    ls.h1_sq = rhs.h1_sq;
    ls.int_a = total.a;
    ls.int_f = total.f;
    ls.int_h1 = total.h1;
    ls.sup_energy = sup;
    if (callbacks.on_sample) callbacks.on_sample(ts, ls);
    result.samples.push_back(std::move(ts));
    result.ledger.samples.push_back(ls);
  };
  record(t);

  const double T = cfg.T;
  const double end_slack = 1e-12 * std::max(1.0, T);
  double h = cfg.dt;
  std::size_t since_sample = 0;
  std::size_t index = 0;
  while (t < T - end_slack) {
    StepOutcome out;
    double taken;
    if (!cfg.adaptive_tolerance) {
      ++index;
      const double next = std::min(T, static_cast<double>(index) * cfg.dt + initial.t);
      taken = next - t;
      out = stepper.step(t, eta, rhs, taken);
    } else {
      h = std::min(h, T - t);
      for (;;) {
        if (h < cfg.min_dt) {
          std::ostringstream os;
          os << "step size " << h << " fell below " << cfg.min_dt << " at t = " << t;
          throw StepSizeUnderflow(os.str());
        }
        const StepOutcome full = stepper.step(t, eta, rhs, h);
        const StepOutcome half1 = stepper.step(t, eta, rhs, 0.5 * h);
        const RhsTerms mid = system.assemble_rhs(t + 0.5 * h, half1.eta);
        StepOutcome half2 = stepper.step(t + 0.5 * h, half1.eta, mid, 0.5 * h);
        double err = 0.0, scale = 1.0;
        for (std::size_t i = 0; i < eta.size(); ++i) {
          err = std::max(err, std::abs(half2.eta[i] - full.eta[i]));
          scale = std::max(scale, std::abs(half2.eta[i]));
        }
        err /= scale * (std::pow(2.0, stepper.order()) - 1.0);
        const double factor = err > 0.0 ? 0.9 * std::pow(*cfg.adaptive_tolerance / err, 1.0 / (stepper.order() + 1)) : 2.0;
        if (std::isfinite(err) && err <= *cfg.adaptive_tolerance) {
          half2.increment.add(1.0, half1.increment);
          out = std::move(half2);
          taken = h;
          h *= std::clamp(factor, 0.2, 2.0);
          break;
        }
        ++result.rejected;
        h *= std::clamp(std::isfinite(factor) ? factor : 0.2, 0.1, 0.5);
      }
    }
    t = (T - (t + taken) <= end_slack) ? T : t + taken;
    eta = std::move(out.eta);
    total.add(1.0, out.increment);
    guard(eta, t, bound);
    rhs = system.assemble_rhs(t, eta);
    ++result.steps;
    if (++since_sample >= static_cast<std::size_t>(cfg.diagnostics_every) || t >= T) {
      record(t);
      since_sample = 0;
    }
  }
  return result;
}

// --- diagnostics -------------------------------------------------------------

std::vector<double> energy_residuals(const EnergyLedger& ledger) {
  std::vector<double> t, half_energy;
  for (const auto& s : ledger.samples) {
    t.push_back(s.t);
    half_energy.push_back(0.5 * s.energy);
  }
  const std::vector<double> d = sampled_derivative(t, half_energy);
  std::vector<double> out(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    out[i] = d[i] + ledger.samples[i].a_T - ledger.samples[i].forcing_power;
  }
  return out;
}

double energy_identity_residual(const EnergyLedger& ledger, double t) {
  if (ledger.samples.size() < 2) throw DomainError("energy residual needs at least two ledger samples");
  return energy_residuals(ledger)[nearest_sample(ledger, t)];
}

std::vector<double> step_energy_residuals(const EnergyLedger& ledger) {
  std::vector<double> out;
  for (std::size_t i = 1; i < ledger.samples.size(); ++i) {
    const auto& a = ledger.samples[i - 1];
    const auto& b = ledger.samples[i];
    out.push_back((0.5 * (b.energy - a.energy) + (b.int_a - a.int_a) - (b.int_f - a.int_f)) / (b.t - a.t));
  }
  return out;
}

EnergyInequalityReport energy_inequality_check(const EnergyLedger& ledger, double t0, double t) {
  const std::size_t i0 = nearest_sample(ledger, t0);
  const std::size_t i1 = nearest_sample(ledger, t);
  if (i1 <= i0) throw DomainError("energy inequality needs t0 < t inside the trajectory");
  const auto& a = ledger.samples[i0];
  const auto& b = ledger.samples[i1];

  EnergyInequalityReport r;
  r.t0 = a.t;
  r.t = b.t;
  r.lhs = b.energy + 2.0 * (b.int_a - a.int_a);
  r.rhs = a.energy + 2.0 * (b.int_f - a.int_f);
  r.defect = r.lhs - r.rhs;

  // The stage-weighted integrals are compared with the trapezoidal rule on the
  // samples; their gap bounds the quadrature error of the coarser rule.
  double trap_a = 0.0, trap_f = 0.0;
  r.monotone_energy = true;
  for (std::size_t i = i0 + 1; i <= i1; ++i) {
    const auto& p = ledger.samples[i - 1];
    const auto& q = ledger.samples[i];
    trap_a += 0.5 * (q.t - p.t) * (p.a_T + q.a_T);
    trap_f += 0.5 * (q.t - p.t) * (p.forcing_power + q.forcing_power);
    if (q.energy > p.energy * (1.0 + 1e-14) + 1e-300) r.monotone_energy = false;
  }
  const double estimate = 2.0 * std::abs(trap_a - (b.int_a - a.int_a)) + 2.0 * std::abs(trap_f - (b.int_f - a.int_f));
  r.tolerance = 10.0 * estimate + 1e-14 * std::max({1.0, std::abs(r.lhs), std::abs(r.rhs)});
  r.inequality_holds = r.defect <= r.tolerance;

  r.sup_energy = b.sup_energy;
  r.b1 = ledger.b1;
  r.b1_holds = r.sup_energy <= ledger.b1 * (1.0 + 1e-12) + 1e-300;
  r.h1_integral = b.int_h1;
  r.b2 = ledger.b2;
  r.b2_holds = r.h1_integral <= ledger.b2 * (1.0 + 1e-12) + 1e-300;
  return r;
}

double weak_residual(const FourierField& u, const FourierField& u_prime, const FourierField& p,
                     const std::optional<FourierField>& f, const ViscosityTensor& A, const FourierField& w, double t) {
  const Lattice& lat = u.lattice();
  FourierField lhs = on_lattice(u_prime, lat);
  lhs += advect(u, u);
  lhs += grad(on_lattice(p, lat));
  if (f) lhs -= on_lattice(*f, lat);
  const FourierField wl = on_lattice(w, lat);
  return dual_product(lhs, wl).real() + bilinear_form(A, u, wl, t);
}

FourierField recover_pressure(const FourierField& u, const std::optional<FourierField>& f, const ViscosityTensor& A,
                              double t) {
  FourierField g = apply_L(A, u, t);
  g -= advect(u, u);
  if (f) g += on_lattice(*f, u.lattice());
  for (auto& c : g.mode_coeffs(g.lattice().origin())) c = 0.0;
  g.flags().dotted = true;
  return solve_grad(project_grad(g));
}

TimeDerivativeReport time_derivative_identity_check(const GalerkinBasis& basis,
                                                    const std::vector<TrajectorySample>& samples, double s,
                                                    double s_prime) {
  TimeDerivativeReport r;
  if (samples.size() < 3) return r;
  const double r_order = s + s_prime;
  std::vector<double> t, norm_sq, rhs;
  for (const auto& smp : samples) {
    double nsq = 0.0, pair = 0.0;
    for (std::size_t k = 0; k < smp.eta.size(); ++k) {
      const double w = std::pow(basis.entry(k).eigenvalue, r_order);
      nsq += w * smp.eta[k] * smp.eta[k];
      pair += w * smp.eta_prime[k] * smp.eta[k];
    }
    t.push_back(smp.t);
    norm_sq.push_back(nsq);
    rhs.push_back(2.0 * pair);
  }
  const std::vector<double> lhs = sampled_derivative(t, norm_sq);
  double scale = 0.0;
  for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
    r.max_abs_defect = std::max(r.max_abs_defect, std::abs(lhs[i] - rhs[i]));
    scale = std::max(scale, std::abs(rhs[i]));
    ++r.points;
  }
  r.max_relative_defect = scale > 0.0 ? r.max_abs_defect / scale : r.max_abs_defect;
  return r;
}

}  // namespace torusns
