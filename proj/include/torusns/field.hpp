#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace torusns {

using Complex = std::complex<double>;

/// All integer wavevectors xi in Z^n with |xi|_inf <= K, in lexicographic order
/// (first coordinate most significant). Index of -xi is size()-1-index(xi).
class Lattice {
 public:
  Lattice(int dimension, int cutoff);

  int dimension() const noexcept { return n_; }
  int cutoff() const noexcept { return k_; }
  int width() const noexcept { return 2 * k_ + 1; }
  std::size_t size() const noexcept { return size_; }

  std::span<const int> mode(std::size_t index) const {
    return {modes_->data() + index * static_cast<std::size_t>(n_), static_cast<std::size_t>(n_)};
  }
  int norm_sq(std::size_t index) const { return (*norm_sq_)[index]; }
  int max_abs(std::size_t index) const;

  std::size_t negated(std::size_t index) const noexcept { return size_ - 1 - index; }
  std::size_t origin() const noexcept { return size_ / 2; }

  /// Lattice index of xi, or nullopt when |xi|_inf > K.
  std::optional<std::size_t> find(std::span<const int> xi) const;
  std::size_t index_of(std::span<const int> xi) const;

  bool operator==(const Lattice& other) const noexcept { return n_ == other.n_ && k_ == other.k_; }

 private:
  int n_;
  int k_;
  std::size_t size_;
  std::shared_ptr<const std::vector<int>> modes_;
  std::shared_ptr<const std::vector<int>> norm_sq_;
};

/// Which function space a field is known to belong to. Flags are set by the
/// operations that guarantee them; `check_*` helpers verify numerically.
struct FieldFlags {
  bool dotted = false;      // zero mean
  bool solenoidal = false;  // xi . coeff(xi) = 0
  bool potential = false;   // gradient of a scalar
};

/// Truncated Fourier series g(x) = sum_xi c(xi) e^{2 pi i x.xi} of a real
/// scalar, vector, or matrix field on the unit torus. Coefficients are stored
/// for the full symmetric lattice; component c of mode i sits at i*components()+c.
class FourierField {
 public:
  FourierField(Lattice lattice, int components, FieldFlags flags = {});

  const Lattice& lattice() const noexcept { return lattice_; }
  int dimension() const noexcept { return lattice_.dimension(); }
  int components() const noexcept { return components_; }
  std::size_t modes() const noexcept { return lattice_.size(); }

  Complex& at(std::size_t mode, int component) {
    return coeffs_[mode * static_cast<std::size_t>(components_) + static_cast<std::size_t>(component)];
  }
  const Complex& at(std::size_t mode, int component) const {
    return coeffs_[mode * static_cast<std::size_t>(components_) + static_cast<std::size_t>(component)];
  }
  std::span<Complex> mode_coeffs(std::size_t mode) {
    return {coeffs_.data() + mode * static_cast<std::size_t>(components_), static_cast<std::size_t>(components_)};
  }
  std::span<const Complex> mode_coeffs(std::size_t mode) const {
    return {coeffs_.data() + mode * static_cast<std::size_t>(components_), static_cast<std::size_t>(components_)};
  }
  std::span<Complex> data() noexcept { return coeffs_; }
  std::span<const Complex> data() const noexcept { return coeffs_; }

  FieldFlags& flags() noexcept { return flags_; }
  const FieldFlags& flags() const noexcept { return flags_; }

  /// Extract one component as a scalar field.
  FourierField component(int c) const;
  void set_component(int c, const FourierField& scalar);

  /// max |c(-xi) - conj(c(xi))|.
  double hermitian_defect() const;
  /// Replace every pair by its Hermitian average; the mean becomes real.
  void symmetrize();
  /// |c(0)| (Euclidean over components).
  double mean_magnitude() const;
  /// max_xi |xi . c(xi)|, vector fields only.
  double divergence_defect() const;

  FourierField& operator+=(const FourierField& other);
  FourierField& operator-=(const FourierField& other);
  FourierField& operator*=(double factor);
  FourierField& axpy(double alpha, const FourierField& x);

  friend FourierField operator+(FourierField a, const FourierField& b) { return a += b; }
  friend FourierField operator-(FourierField a, const FourierField& b) { return a -= b; }
  friend FourierField operator*(double s, FourierField a) { return a *= s; }

 private:
  void require_compatible(const FourierField& other) const;

  Lattice lattice_;
  int components_;
  std::vector<Complex> coeffs_;
  FieldFlags flags_;
};

/// Real samples on the uniform grid x_j = j/N; point index is lexicographic
/// with the first axis most significant, components interleaved.
struct GridField {
  int dimension = 0;
  int size = 0;
  int components = 0;
  std::vector<double> values;

  GridField() = default;
  GridField(int dimension, int size, int components);

  std::size_t points() const noexcept { return values.size() / static_cast<std::size_t>(components); }
  double& at(std::size_t point, int c) {
    return values[point * static_cast<std::size_t>(components) + static_cast<std::size_t>(c)];
  }
  double at(std::size_t point, int c) const {
    return values[point * static_cast<std::size_t>(components) + static_cast<std::size_t>(c)];
  }
  /// Coordinates of a grid point.
  std::vector<double> coordinates(std::size_t point) const;
};

}  // namespace torusns
