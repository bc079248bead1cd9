#include "torusns/viscosity.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "torusns/errors.hpp"
#include "torusns/spectral.hpp"

namespace torusns {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSymmetryTolerance = 1e-12;

std::string format_point(const SamplePoint& p) {
  std::ostringstream os;
  os << "x=(";
  for (std::size_t d = 0; d < p.x.size(); ++d) os << (d ? "," : "") << p.x[d];
  os << "), t=" << p.t;
  return os.str();
}

std::size_t grid_points(int n, int size) {
  std::size_t pts = 1;
  for (int d = 0; d < n; ++d) pts *= static_cast<std::size_t>(size);
  return pts;
}

void grid_coordinates(std::size_t point, int n, int size, std::span<double> x) {
  for (int d = n - 1; d >= 0; --d) {
    x[static_cast<std::size_t>(d)] = static_cast<double>(point % static_cast<std::size_t>(size)) / size;
    point /= static_cast<std::size_t>(size);
  }
}

void require_vector(const FourierField& u, int n) {
  if (u.dimension() != n || u.components() != n) {
    throw LatticeMismatch("velocity must be an n-component field matching the tensor dimension");
  }
}

}  // namespace

SampleSet sample_grid(int dimension, int grid_size, std::span<const double> times) {
  SampleSet out;
  const std::size_t pts = grid_points(dimension, grid_size);
  out.reserve(pts * times.size());
  std::vector<double> x(static_cast<std::size_t>(dimension));
  for (double t : times) {
    for (std::size_t p = 0; p < pts; ++p) {
      grid_coordinates(p, dimension, grid_size, x);
      out.push_back({x, t});
    }
  }
  return out;
}

ScalarCoefficient ScalarCoefficient::constant(double value) {
  return {[value](std::span<const double>, double) { return value; }, 0, false};
}

ViscosityTensor::ViscosityTensor(int dimension, Evaluator evaluator, std::optional<int> fourier_degree,
                                 bool time_dependent, std::string description)
    : n_(dimension),
      evaluator_(std::move(evaluator)),
      degree_(fourier_degree),
      time_dependent_(time_dependent),
      description_(std::move(description)) {
  if (dimension < 2) throw DomainError("viscosity tensor needs n >= 2");
}

std::vector<double> ViscosityTensor::evaluate(std::span<const double> x, double t) const {
  std::vector<double> out(entries());
  evaluator_(x, t, out);
  return out;
}

int ViscosityTensor::quadrature_grid(int cutoff) const {
  if (!degree_) return fft_friendly_size(2 * (3 * cutoff + 1));
  return fft_friendly_size(std::max(3 * cutoff + 1, 2 * cutoff + *degree_ + 1));
}

ViscosityTensor isotropic_tensor(int dimension, ScalarCoefficient lambda, ScalarCoefficient mu,
                                 const SampleSet* samples) {
  SampleSet defaults;
  if (samples == nullptr) {
    const int grid = mu.degree ? 8 * std::max(*mu.degree, 1) : 32;
    std::vector<double> times{0.0};
    if (mu.time_dependent) {
      times.clear();
      for (int i = 0; i <= 8; ++i) times.push_back(i / 8.0);
    }
    defaults = sample_grid(dimension, grid, times);
    samples = &defaults;
  }
  for (const auto& p : *samples) {
    const double m = mu(p.x, p.t);
    if (!(m > 0.0)) {
      // The form equals 2 mu |zeta|^2 on trace-free symmetric zeta.
      std::vector<double> zeta(static_cast<std::size_t>(dimension * dimension), 0.0);
      zeta[1] = zeta[static_cast<std::size_t>(dimension)] = std::numbers::sqrt2 / 2.0;
      throw EllipticityViolation("relaxed ellipticity violated: mu = " + std::to_string(m) + " at " +
                                     format_point(p),
                                 p.x, p.t, std::move(zeta), 2.0 * m);
    }
  }

  std::optional<int> degree;
  if (lambda.degree && mu.degree) degree = std::max(*lambda.degree, *mu.degree);
  const bool td = lambda.time_dependent || mu.time_dependent;
  const int n = dimension;
  auto eval = [n, lambda = std::move(lambda), mu = std::move(mu)](std::span<const double> x, double t,
                                                                  std::span<double> out) {
    const double l = lambda(x, t);
    const double m = mu(x, t);
    std::fill(out.begin(), out.end(), 0.0);
    for (int k = 0; k < n; ++k) {
      for (int j = 0; j < n; ++j) {
        out[ViscosityTensor::index(n, k, j, k, j)] += l;        // d_{k alpha} d_{j beta}
        out[ViscosityTensor::index(n, k, j, j, k)] += m;        // d_{alpha j} d_{beta k}
      }
      for (int a = 0; a < n; ++a) out[ViscosityTensor::index(n, k, k, a, a)] += m;  // d_{alpha beta} d_{kj}
    }
  };
  return ViscosityTensor(n, std::move(eval), degree, td, "isotropic");
}

ViscosityTensor isotropic_constant(int dimension, double lambda, double mu) {
  auto A = isotropic_tensor(dimension, ScalarCoefficient::constant(lambda), ScalarCoefficient::constant(mu));
  std::ostringstream os;
  os << "isotropic(" << lambda << "," << mu << ")";
  return ViscosityTensor(
      dimension, [A](std::span<const double> x, double t, std::span<double> out) { A.evaluate(x, t, out); }, 0,
      false, os.str());
}

ViscosityTensor isotropic_variable(int dimension, double mu0, double amplitude, int mode) {
  ScalarCoefficient mu{[mu0, amplitude, mode](std::span<const double> x, double t) {
                         return mu0 + amplitude * std::sin(kTwoPi * mode * x[0]) * std::cos(kTwoPi * t);
                       },
                       std::abs(mode), amplitude != 0.0};
  auto A = isotropic_tensor(dimension, ScalarCoefficient::constant(0.0), mu);
  std::ostringstream os;
  os << "isotropic-variable(" << mu0 << "," << amplitude << "," << mode << ")";
  return ViscosityTensor(
      dimension, [A](std::span<const double> x, double t, std::span<double> out) { A.evaluate(x, t, out); },
      A.fourier_degree(), A.time_dependent(), os.str());
}

ViscosityTensor anisotropic_diagonal(std::span<const double> weights) {
  const int n = static_cast<int>(weights.size());
  std::vector<double> w(weights.begin(), weights.end());
  for (double v : w) {
    if (!(v > 0.0)) throw DomainError("anisotropic-diagonal weights must be positive");
  }
  std::vector<double> table(static_cast<std::size_t>(n * n * n * n), 0.0);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      table[ViscosityTensor::index(n, k, j, j, k)] += w[static_cast<std::size_t>(j)] * w[static_cast<std::size_t>(k)];
    }
    for (int a = 0; a < n; ++a) {
      table[ViscosityTensor::index(n, k, k, a, a)] += w[static_cast<std::size_t>(a)] * w[static_cast<std::size_t>(k)];
    }
  }
  std::ostringstream os;
  os << "anisotropic-diagonal(";
  for (int d = 0; d < n; ++d) os << (d ? "," : "") << w[static_cast<std::size_t>(d)];
  os << ")";
  return ViscosityTensor(
      n, [table](std::span<const double>, double, std::span<double> out) { std::copy(table.begin(), table.end(), out.begin()); },
      0, false, os.str());
}

ViscosityTensor trigonometric_tensor(int dimension, std::vector<TensorMode> modes, std::string description) {
  const int n = dimension;
  int degree = 0;
  for (const auto& m : modes) {
    if (static_cast<int>(m.xi.size()) != n) throw DomainError("tensor mode wavevector has the wrong dimension");
    for (int idx : {m.k, m.j, m.alpha, m.beta}) {
      if (idx < 0 || idx >= n) throw DomainError("tensor entry index out of range");
    }
    for (int v : m.xi) degree = std::max(degree, std::abs(v));
  }
  auto eval = [n, modes = std::move(modes)](std::span<const double> x, double, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (const auto& m : modes) {
      double phase = 0.0;
      for (int d = 0; d < n; ++d) phase += m.xi[static_cast<std::size_t>(d)] * x[static_cast<std::size_t>(d)];
      phase *= kTwoPi;
      out[ViscosityTensor::index(n, m.k, m.j, m.alpha, m.beta)] +=
          m.value.real() * std::cos(phase) - m.value.imag() * std::sin(phase);
    }
  };
  return ViscosityTensor(n, std::move(eval), degree, false, std::move(description));
}

ViscosityTensor load_tensor_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open tensor table " + path.string(), 0, "tensor");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
    const int n = doc.at("n").get<int>();
    std::vector<TensorMode> modes;
    for (const auto& entry : doc.at("entries")) {
      TensorMode base;
      base.k = entry.at("k").get<int>() - 1;
      base.j = entry.at("j").get<int>() - 1;
      base.alpha = entry.at("alpha").get<int>() - 1;
      base.beta = entry.at("beta").get<int>() - 1;
      for (const auto& m : entry.at("modes")) {
        TensorMode tm = base;
        tm.xi = m.at("xi").get<std::vector<int>>();
        tm.value = {m.value("re", 0.0), m.value("im", 0.0)};
        modes.push_back(std::move(tm));
      }
    }
    return trigonometric_tensor(n, std::move(modes), "table:" + path.filename().string());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed tensor table: ") + e.what(), 0, "tensor");
  }
}

SymmetryReport check_symmetry(const ViscosityTensor& A, const SampleSet& samples) {
  const int n = A.dimension();
  SymmetryReport report;
  std::vector<double> a(A.entries());
  for (const auto& p : samples) {
    A.evaluate(p.x, p.t, a);
    double worst = 0.0;
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int al = 0; al < n; ++al)
          for (int be = 0; be < n; ++be) {
            const double v = a[ViscosityTensor::index(n, k, j, al, be)];
            worst = std::max(worst, std::abs(v - a[ViscosityTensor::index(n, al, j, k, be)]));
            worst = std::max(worst, std::abs(v - a[ViscosityTensor::index(n, k, be, al, j)]));
          }
    if (worst > report.max_deviation) {
      report.max_deviation = worst;
      report.worst = p;
    }
  }
  report.passes = report.max_deviation <= kSymmetryTolerance;
  return report;
}

std::vector<std::vector<double>> traceless_symmetric_basis(int n) {
  std::vector<std::vector<double>> basis;
  const auto nn = static_cast<std::size_t>(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      std::vector<double> b(nn * nn, 0.0);
      b[static_cast<std::size_t>(i) * nn + static_cast<std::size_t>(j)] = std::numbers::sqrt2 / 2.0;
      b[static_cast<std::size_t>(j) * nn + static_cast<std::size_t>(i)] = std::numbers::sqrt2 / 2.0;
      basis.push_back(std::move(b));
    }
  }
  // Helmert-type diagonal directions (e_11 + ... + e_dd - d e_{d+1,d+1}) / sqrt(d(d+1)).
  for (int d = 1; d < n; ++d) {
    std::vector<double> b(nn * nn, 0.0);
    const double s = 1.0 / std::sqrt(static_cast<double>(d * (d + 1)));
    for (int i = 0; i < d; ++i) b[static_cast<std::size_t>(i) * (nn + 1)] = s;
    b[static_cast<std::size_t>(d) * (nn + 1)] = -d * s;
    basis.push_back(std::move(b));
  }
  return basis;
}

EllipticityCertificate ellipticity_constant(const ViscosityTensor& A, const SampleSet& samples,
                                            std::string sample_description) {
  if (samples.empty()) throw DomainError("ellipticity certificate needs at least one sample");
  const int n = A.dimension();
  const auto basis = traceless_symmetric_basis(n);
  const auto dim = static_cast<Eigen::Index>(basis.size());
  std::vector<double> a(A.entries());
  std::vector<double> sup(A.entries(), 0.0);

  EllipticityCertificate cert;
  cert.mu_min = std::numeric_limits<double>::infinity();
  Eigen::VectorXd worst_vec;
  Eigen::MatrixXd Q(dim, dim);
  for (const auto& p : samples) {
    A.evaluate(p.x, p.t, a);
    for (std::size_t e = 0; e < a.size(); ++e) sup[e] = std::max(sup[e], std::abs(a[e]));
    for (Eigen::Index r = 0; r < dim; ++r) {
      for (Eigen::Index c = 0; c < dim; ++c) {
        const auto& Br = basis[static_cast<std::size_t>(r)];
        const auto& Bc = basis[static_cast<std::size_t>(c)];
        double q = 0.0;
        for (int k = 0; k < n; ++k)
          for (int al = 0; al < n; ++al) {
            const double br = Br[static_cast<std::size_t>(k * n + al)];
            if (br == 0.0) continue;
            for (int j = 0; j < n; ++j)
              for (int be = 0; be < n; ++be) {
                const double bc = Bc[static_cast<std::size_t>(j * n + be)];
                if (bc == 0.0) continue;
                q += a[ViscosityTensor::index(n, k, j, al, be)] * br * bc;
              }
          }
        Q(r, c) = q;
      }
    }
    const Eigen::MatrixXd S = 0.5 * (Q + Q.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(S);
    const double lo = solver.eigenvalues()(0);
    if (lo < cert.mu_min) {
      cert.mu_min = lo;
      cert.worst = p;
      worst_vec = solver.eigenvectors().col(0);
    }
  }

  double fro = 0.0;
  for (double v : sup) fro += v * v;
  cert.tensor_norm = std::sqrt(fro);
  cert.sample_count = samples.size();
  cert.sample_description = std::move(sample_description);

  if (!(cert.mu_min > 0.0)) {
    std::vector<double> zeta(static_cast<std::size_t>(n * n), 0.0);
    for (Eigen::Index r = 0; r < dim; ++r) {
      for (std::size_t e = 0; e < zeta.size(); ++e) zeta[e] += worst_vec(r) * basis[static_cast<std::size_t>(r)][e];
    }
    throw EllipticityViolation("relaxed ellipticity violated: form minimum " + std::to_string(cert.mu_min) +
                                   " at " + format_point(cert.worst),
                               cert.worst.x, cert.worst.t, std::move(zeta), cert.mu_min);
  }
  cert.c_a = 1.0 / cert.mu_min;
  return cert;
}

double tensor_norm(const ViscosityTensor& A, const SampleSet& samples) {
  std::vector<double> a(A.entries());
  std::vector<double> sup(A.entries(), 0.0);
  for (const auto& p : samples) {
    A.evaluate(p.x, p.t, a);
    for (std::size_t e = 0; e < a.size(); ++e) sup[e] = std::max(sup[e], std::abs(a[e]));
  }
  double fro = 0.0;
  for (double v : sup) fro += v * v;
  return std::sqrt(fro);
}

TensorSamples sample_tensor(const ViscosityTensor& A, int grid_size, double t) {
  const int n = A.dimension();
  TensorSamples out{n, grid_size, t, {}};
  const std::size_t pts = grid_points(n, grid_size);
  const std::size_t e = A.entries();
  out.values.resize(pts * e);
  std::vector<double> x(static_cast<std::size_t>(n));
  for (std::size_t p = 0; p < pts; ++p) {
    grid_coordinates(p, n, grid_size, x);
    A.evaluate(x, t, std::span<double>(out.values.data() + p * e, e));
  }
  return out;
}

FourierField apply_L(const ViscosityTensor& A, const FourierField& u, double t) {
  return apply_L(sample_tensor(A, A.quadrature_grid(u.lattice().cutoff()), t), u);
}

FourierField apply_L(const TensorSamples& A, const FourierField& u) {
  const int n = A.dimension;
  require_vector(u, n);
  const Lattice& lat = u.lattice();
  const GridField E = to_physical(sym_gradient(u), A.grid_size);
  GridField stress(n, A.grid_size, n * n);
  const std::size_t e = static_cast<std::size_t>(n * n * n * n);
  for (std::size_t p = 0; p < E.points(); ++p) {
    const double* a = A.values.data() + p * e;
    for (int k = 0; k < n; ++k) {
      for (int al = 0; al < n; ++al) {
        double s = 0.0;
        for (int j = 0; j < n; ++j)
          for (int be = 0; be < n; ++be) s += a[ViscosityTensor::index(n, k, j, al, be)] * E.at(p, j * n + be);
        stress.at(p, k * n + al) = s;
      }
    }
  }
  const FourierField sigma = from_physical(stress, lat.cutoff());
  FourierField out(lat, n, FieldFlags{true, false, false});
  for (std::size_t i = 0; i < lat.size(); ++i) {
    auto xi = lat.mode(i);
    for (int k = 0; k < n; ++k) {
      Complex s = 0.0;
      for (int al = 0; al < n; ++al) s += static_cast<double>(xi[al]) * sigma.at(i, k * n + al);
      out.at(i, k) = Complex(0.0, kTwoPi) * s;
    }
  }
  return out;
}

double bilinear_form(const ViscosityTensor& A, const FourierField& u, const FourierField& v, double t) {
  return bilinear_form(sample_tensor(A, A.quadrature_grid(u.lattice().cutoff()), t), u, v);
}

double bilinear_form(const TensorSamples& A, const FourierField& u, const FourierField& v) {
  const int n = A.dimension;
  require_vector(u, n);
  require_vector(v, n);
  if (!(u.lattice() == v.lattice())) throw LatticeMismatch("a_T operands live on different lattices");
  const GridField Eu = to_physical(sym_gradient(u), A.grid_size);
  const GridField Ev = to_physical(sym_gradient(v), A.grid_size);
  const std::size_t e = static_cast<std::size_t>(n * n * n * n);
  long double total = 0.0L;
  for (std::size_t p = 0; p < Eu.points(); ++p) {
    const double* a = A.values.data() + p * e;
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int al = 0; al < n; ++al)
          for (int be = 0; be < n; ++be)
            s += a[ViscosityTensor::index(n, i, j, al, be)] * Eu.at(p, j * n + be) * Ev.at(p, i * n + al);
    total += s;
  }
  return static_cast<double>(total / static_cast<long double>(Eu.points()));
}

KornSides korn_check(const FourierField& v) {
  const double g = sobolev_norm(full_gradient(v), 0.0);
  const double e = sobolev_norm(sym_gradient(v), 0.0);
  return {g * g, 2.0 * e * e};
}

}  // namespace torusns
