#pragma once

#include <span>
#include <string>
#include <vector>

#include "torusns/field.hpp"

namespace torusns {

enum class Parity { cos, sin };

/// One real basis function sqrt(2) w cos(2 pi eta.x) or sqrt(2) w sin(2 pi eta.x).
struct BasisEntry {
  std::vector<int> eta;              // lexicographically positive representative
  int beta = 0;                      // polarization index, 0-based
  Parity parity = Parity::cos;
  std::vector<double> polarization;  // unit, orthogonal to eta
  double eigenvalue = 0.0;           // rho(eta)
  int norm_sq = 0;                   // |eta|^2
  std::size_t mode = 0;              // lattice index of eta
  std::size_t mode_neg = 0;          // lattice index of -eta
};

enum class BasisOrdering {
  eigenvalue,     // |eta| non-decreasing, ties lexicographic on (eta, beta, parity)
  lexicographic,  // (eta, beta, parity) only
};

/// n-1 orthonormal vectors spanning the plane orthogonal to eta, from
/// Gram-Schmidt over e_alpha - eta_alpha eta / |eta|^2. Throws DomainError for eta = 0.
std::vector<std::vector<double>> tangent_frame(std::span<const int> eta);

/// rho(eta)^r. Throws DomainError for eta = 0.
double eigenvalue(std::span<const int> eta, double r);

/// Real orthonormal divergence-free eigenfunctions of the Bessel potential
/// over the Euclidean ball 0 < |eta| <= K.
class GalerkinBasis {
 public:
  GalerkinBasis(int dimension, int cutoff, BasisOrdering ordering = BasisOrdering::eigenvalue);

  int dimension() const noexcept { return n_; }
  int cutoff() const noexcept { return k_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const Lattice& lattice() const noexcept { return lattice_; }
  const BasisEntry& entry(std::size_t j) const { return entries_.at(j); }
  const std::vector<BasisEntry>& entries() const noexcept { return entries_; }

  /// w_j as a field on the basis lattice (or on `lattice` if given).
  FourierField field(std::size_t j) const;
  FourierField field(std::size_t j, const Lattice& lattice) const;

  /// <u, w_j>_T; modes of w_j outside u's lattice contribute zero.
  double coefficient(const FourierField& u, std::size_t j) const;
  /// <u, w_j>_T for j < m.
  std::vector<double> coefficients(const FourierField& u, std::size_t m) const;

  /// sum_j c_j w_j on `lattice` (entries outside it are skipped).
  FourierField synthesize(std::span<const double> c, const Lattice& lattice) const;
  FourierField synthesize(std::span<const double> c) const { return synthesize(c, lattice_); }

  /// Add c * w_j to u in place.
  void add_to(FourierField& u, std::size_t j, double c) const;

  /// JSON list of {eta, beta, parity, polarization, eigenvalue}, 1-based beta.
  std::string to_json() const;

 private:
  int n_;
  int k_;
  Lattice lattice_;
  std::vector<BasisEntry> entries_;
};

/// P_m u = sum_{j<m} <u, w_j> w_j, on u's lattice. Throws DomainError if m > size.
FourierField project_Pm(const FourierField& u, const GalerkinBasis& basis, std::size_t m);

}  // namespace torusns
