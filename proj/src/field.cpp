#include "torusns/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "torusns/errors.hpp"

namespace torusns {

Lattice::Lattice(int dimension, int cutoff) : n_(dimension), k_(cutoff) {
  if (dimension < 1) throw DomainError("lattice dimension must be positive");
  if (cutoff < 0) throw DomainError("lattice cutoff must be non-negative");
  const std::size_t w = static_cast<std::size_t>(width());
  size_ = 1;
  for (int d = 0; d < n_; ++d) size_ *= w;

  auto modes = std::make_shared<std::vector<int>>(size_ * static_cast<std::size_t>(n_));
  auto norms = std::make_shared<std::vector<int>>(size_);
  for (std::size_t i = 0; i < size_; ++i) {
    std::size_t rest = i;
    int nsq = 0;
    for (int d = n_ - 1; d >= 0; --d) {
      const int xi = static_cast<int>(rest % w) - k_;
      rest /= w;
      (*modes)[i * static_cast<std::size_t>(n_) + static_cast<std::size_t>(d)] = xi;
      nsq += xi * xi;
    }
    (*norms)[i] = nsq;
  }
  modes_ = std::move(modes);
  norm_sq_ = std::move(norms);
}

int Lattice::max_abs(std::size_t index) const {
  int m = 0;
  for (int v : mode(index)) m = std::max(m, std::abs(v));
  return m;
}

std::optional<std::size_t> Lattice::find(std::span<const int> xi) const {
  if (static_cast<int>(xi.size()) != n_) return std::nullopt;
  const std::size_t w = static_cast<std::size_t>(width());
  std::size_t idx = 0;
  for (int v : xi) {
    if (v < -k_ || v > k_) return std::nullopt;
    idx = idx * w + static_cast<std::size_t>(v + k_);
  }
  return idx;
}

std::size_t Lattice::index_of(std::span<const int> xi) const {
  auto idx = find(xi);
  if (!idx) throw DomainError("wavevector outside the lattice");
  return *idx;
}

FourierField::FourierField(Lattice lattice, int components, FieldFlags flags)
    : lattice_(std::move(lattice)),
      components_(components),
      coeffs_(lattice_.size() * static_cast<std::size_t>(components)),
      flags_(flags) {
  if (components < 1) throw DomainError("field needs at least one component");
}

FourierField FourierField::component(int c) const {
  FourierField out(lattice_, 1, FieldFlags{flags_.dotted, false, false});
  for (std::size_t i = 0; i < modes(); ++i) out.at(i, 0) = at(i, c);
  return out;
}

void FourierField::set_component(int c, const FourierField& scalar) {
  if (!(scalar.lattice() == lattice_) || scalar.components() != 1) {
    throw LatticeMismatch("set_component expects a scalar field on the same lattice");
  }
  for (std::size_t i = 0; i < modes(); ++i) at(i, c) = scalar.at(i, 0);
  flags_ = {};
}

double FourierField::hermitian_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < modes(); ++i) {
    const std::size_t j = lattice_.negated(i);
    for (int c = 0; c < components_; ++c) {
      worst = std::max(worst, std::abs(at(j, c) - std::conj(at(i, c))));
    }
  }
  return worst;
}

void FourierField::symmetrize() {
  for (std::size_t i = 0; i < modes(); ++i) {
    const std::size_t j = lattice_.negated(i);
    if (j < i) continue;
    for (int c = 0; c < components_; ++c) {
      const Complex avg = 0.5 * (at(i, c) + std::conj(at(j, c)));
      at(i, c) = avg;
      at(j, c) = std::conj(avg);
    }
  }
}

double FourierField::mean_magnitude() const {
  double s = 0.0;
  for (const auto& c : mode_coeffs(lattice_.origin())) s += std::norm(c);
  return std::sqrt(s);
}

double FourierField::divergence_defect() const {
  if (components_ != dimension()) throw DomainError("divergence_defect needs a vector field");
  double worst = 0.0;
  for (std::size_t i = 0; i < modes(); ++i) {
    auto xi = lattice_.mode(i);
    Complex s = 0.0;
    for (int d = 0; d < components_; ++d) s += static_cast<double>(xi[d]) * at(i, d);
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

void FourierField::require_compatible(const FourierField& other) const {
  if (!(other.lattice_ == lattice_) || other.components_ != components_) {
    throw LatticeMismatch("fields differ in lattice or component count");
  }
}

FourierField& FourierField::operator+=(const FourierField& other) {
  require_compatible(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  flags_.dotted = flags_.dotted && other.flags_.dotted;
  flags_.solenoidal = flags_.solenoidal && other.flags_.solenoidal;
  flags_.potential = flags_.potential && other.flags_.potential;
  return *this;
}

FourierField& FourierField::operator-=(const FourierField& other) { return axpy(-1.0, other); }

FourierField& FourierField::axpy(double alpha, const FourierField& x) {
  require_compatible(x);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += alpha * x.coeffs_[i];
  flags_.dotted = flags_.dotted && x.flags_.dotted;
  flags_.solenoidal = flags_.solenoidal && x.flags_.solenoidal;
  flags_.potential = flags_.potential && x.flags_.potential;
  return *this;
}

FourierField& FourierField::operator*=(double factor) {
  for (auto& c : coeffs_) c *= factor;
  return *this;
}

GridField::GridField(int dimension_, int size_, int components_)
    : dimension(dimension_), size(size_), components(components_) {
  std::size_t pts = 1;
  for (int d = 0; d < dimension_; ++d) pts *= static_cast<std::size_t>(size_);
  values.assign(pts * static_cast<std::size_t>(components_), 0.0);
}

std::vector<double> GridField::coordinates(std::size_t point) const {
  std::vector<double> x(static_cast<std::size_t>(dimension));
  for (int d = dimension - 1; d >= 0; --d) {
    x[static_cast<std::size_t>(d)] = static_cast<double>(point % static_cast<std::size_t>(size)) / size;
    point /= static_cast<std::size_t>(size);
  }
  return x;
}

}  // namespace torusns
