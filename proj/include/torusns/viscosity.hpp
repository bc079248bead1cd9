#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "torusns/field.hpp"

namespace torusns {

struct SamplePoint {
  std::vector<double> x;
  double t = 0.0;
};
using SampleSet = std::vector<SamplePoint>;

/// Every node of the uniform N^n grid at every listed time.
SampleSet sample_grid(int dimension, int grid_size, std::span<const double> times);

/// A scalar coefficient lambda(x, t) or mu(x, t).
struct ScalarCoefficient {
  std::function<double(std::span<const double>, double)> eval;
  /// Trigonometric degree in x (max |xi|_inf); nullopt when unknown.
  std::optional<int> degree = 0;
  bool time_dependent = false;

  static ScalarCoefficient constant(double value);
  double operator()(std::span<const double> x, double t) const { return eval(x, t); }
};

/// Fourth-order viscosity coefficient field a^{alpha beta}_{kj}(x, t).
/// Values are written into an n^4 buffer at index(n, k, j, alpha, beta).
class ViscosityTensor {
 public:
  using Evaluator = std::function<void(std::span<const double> x, double t, std::span<double> out)>;

  ViscosityTensor(int dimension, Evaluator evaluator, std::optional<int> fourier_degree, bool time_dependent,
                  std::string description);

  int dimension() const noexcept { return n_; }
  std::size_t entries() const noexcept { return static_cast<std::size_t>(n_ * n_ * n_ * n_); }
  std::optional<int> fourier_degree() const noexcept { return degree_; }
  bool time_dependent() const noexcept { return time_dependent_; }
  const std::string& description() const noexcept { return description_; }

  void evaluate(std::span<const double> x, double t, std::span<double> out) const { evaluator_(x, t, out); }
  std::vector<double> evaluate(std::span<const double> x, double t) const;

  static std::size_t index(int n, int k, int j, int alpha, int beta) {
    return static_cast<std::size_t>(((k * n + j) * n + alpha) * n + beta);
  }

  /// Quadrature grid for cutoff-K data: N >= max(3K+1, 2K+K_A+1), which makes
  /// apply_L and bilinear_form exact for trigonometric tensors. Tensors of unknown
  /// degree get a doubled grid and quadrature_is_exact() is false.
  int quadrature_grid(int cutoff) const;
  bool quadrature_is_exact() const noexcept { return degree_.has_value(); }

 private:
  int n_;
  Evaluator evaluator_;
  std::optional<int> degree_;
  bool time_dependent_;
  std::string description_;
};

/// a = lambda d_{k alpha} d_{j beta} + mu (d_{alpha j} d_{beta k} + d_{alpha beta} d_{kj}).
/// Throws EllipticityViolation when mu <= 0 at a sample. The default sample set
/// is a grid of 8 max(degree, 1) nodes per axis (32 for unknown degree), at
/// t in {0, 1/8, ..., 1} when mu depends on time.
ViscosityTensor isotropic_tensor(int dimension, ScalarCoefficient lambda, ScalarCoefficient mu,
                                 const SampleSet* samples = nullptr);
ViscosityTensor isotropic_constant(int dimension, double lambda, double mu);
/// lambda = 0, mu(x, t) = mu0 + amplitude sin(2 pi mode x_1) cos(2 pi t).
ViscosityTensor isotropic_variable(int dimension, double mu0, double amplitude, int mode);
/// a = w_alpha w_beta d_{alpha j} d_{beta k} + w_alpha w_k d_{alpha beta} d_{kj}, the
/// isotropic mu = 1 tensor with axis weights. Constant in x and t.
ViscosityTensor anisotropic_diagonal(std::span<const double> weights);

/// One Fourier coefficient of one tensor entry (0-based indices).
struct TensorMode {
  int k = 0, j = 0, alpha = 0, beta = 0;
  std::vector<int> xi;
  Complex value;
};
/// a(x) = Re sum c e^{2 pi i x.xi}, time independent. Degree is the largest |xi|_inf.
ViscosityTensor trigonometric_tensor(int dimension, std::vector<TensorMode> modes, std::string description);
/// JSON coefficient table: {"n": 2, "entries": [{"k":1,"j":1,"alpha":1,"beta":1,
/// "modes": [{"xi":[0,0],"re":1.0,"im":0.0}, ...]}, ...]} with 1-based indices.
ViscosityTensor load_tensor_table(const std::filesystem::path& path);

struct SymmetryReport {
  double max_deviation = 0.0;
  bool passes = true;  // max_deviation <= 1e-12
  SamplePoint worst;
};
SymmetryReport check_symmetry(const ViscosityTensor& A, const SampleSet& samples);

struct EllipticityCertificate {
  double c_a = 0.0;          // 1 / mu_min
  double mu_min = 0.0;       // smallest eigenvalue of the form on unit trace-free symmetric matrices
  double tensor_norm = 0.0;  // Frobenius norm of entrywise sup
  std::size_t sample_count = 0;
  std::string sample_description;
  SamplePoint worst;
};

/// Orthonormal (Frobenius) basis of symmetric trace-free n x n matrices, row-major.
std::vector<std::vector<double>> traceless_symmetric_basis(int dimension);

/// Minimum of the viscosity form over unit symmetric trace-free matrices across
/// the samples. Throws EllipticityViolation with a witness if it is <= 0.
EllipticityCertificate ellipticity_constant(const ViscosityTensor& A, const SampleSet& samples,
                                            std::string sample_description = {});

double tensor_norm(const ViscosityTensor& A, const SampleSet& samples);

/// The tensor sampled on an N^n grid at one time.
struct TensorSamples {
  int dimension = 0;
  int grid_size = 0;
  double t = 0.0;
  std::vector<double> values;  // point-major, n^4 entries per point
};
TensorSamples sample_tensor(const ViscosityTensor& A, int grid_size, double t);

/// (L u)_k = d_alpha (a^{alpha beta}_{kj} E_{j beta}(u)).
FourierField apply_L(const ViscosityTensor& A, const FourierField& u, double t);
FourierField apply_L(const TensorSamples& A, const FourierField& u);

/// a_T(t; u, v) = < a^{alpha beta}_{ij} E_{j beta}(u), E_{i alpha}(v) >.
double bilinear_form(const ViscosityTensor& A, const FourierField& u, const FourierField& v, double t);
double bilinear_form(const TensorSamples& A, const FourierField& u, const FourierField& v);

struct KornSides {
  double lhs = 0.0;  // ||grad v||^2
  double rhs = 0.0;  // 2 ||E(v)||^2
};
KornSides korn_check(const FourierField& v);

}  // namespace torusns
