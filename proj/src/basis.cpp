#include "torusns/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "json.hpp"
#include "torusns/errors.hpp"
#include "torusns/spectral.hpp"

namespace torusns {
namespace {

constexpr double kDropTolerance = 1e-12;

bool lex_positive(std::span<const int> eta) {
  for (int v : eta) {
    if (v != 0) return v > 0;
  }
  return false;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

std::vector<std::vector<double>> tangent_frame(std::span<const int> eta) {
  const auto n = eta.size();
  double nsq = 0.0;
  for (int v : eta) nsq += static_cast<double>(v) * v;
  if (nsq == 0.0) throw DomainError("tangent frame undefined for eta = 0");

  std::vector<std::vector<double>> frame;
  for (std::size_t a = 0; a < n && frame.size() + 1 < n; ++a) {
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = (i == a ? 1.0 : 0.0) - eta[a] * eta[i] / nsq;
    // Two Gram-Schmidt passes keep orthogonality at round-off level.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : frame) {
        const double c = dot(w, q);
        for (std::size_t i = 0; i < n; ++i) w[i] -= c * q[i];
      }
    }
    const double norm = std::sqrt(dot(w, w));
    if (norm < kDropTolerance) continue;
    for (auto& v : w) v /= norm;
    frame.push_back(std::move(w));
  }
  return frame;
}

double eigenvalue(std::span<const int> eta, double r) {
  int nsq = 0;
  for (int v : eta) nsq += v * v;
  if (nsq == 0) throw DomainError("eigenvalue undefined for eta = 0");
  return std::pow(rho_sq(nsq), 0.5 * r);
}

GalerkinBasis::GalerkinBasis(int dimension, int cutoff, BasisOrdering ordering)
    : n_(dimension), k_(cutoff), lattice_(dimension, cutoff) {
  if (dimension < 2) throw DomainError("basis needs n >= 2");
  if (cutoff < 1) throw DomainError("basis needs K >= 1");
  for (std::size_t i = 0; i < lattice_.size(); ++i) {
    auto xi = lattice_.mode(i);
    if (lattice_.norm_sq(i) > k_ * k_ || !lex_positive(xi)) continue;
    const auto frame = tangent_frame(xi);
    const double lambda = std::sqrt(rho_sq(lattice_.norm_sq(i)));
    for (std::size_t b = 0; b < frame.size(); ++b) {
      for (Parity p : {Parity::cos, Parity::sin}) {
        entries_.push_back(BasisEntry{std::vector<int>(xi.begin(), xi.end()), static_cast<int>(b), p, frame[b],
                                      lambda, lattice_.norm_sq(i), i, lattice_.negated(i)});
      }
    }
  }
  auto lex = [](const BasisEntry& a, const BasisEntry& b) {
    if (a.eta != b.eta) return a.eta < b.eta;
    if (a.beta != b.beta) return a.beta < b.beta;
    return a.parity < b.parity;
  };
  if (ordering == BasisOrdering::eigenvalue) {
    std::sort(entries_.begin(), entries_.end(), [&](const BasisEntry& a, const BasisEntry& b) {
      if (a.norm_sq != b.norm_sq) return a.norm_sq < b.norm_sq;
      return lex(a, b);
    });
  } else {
    std::sort(entries_.begin(), entries_.end(), lex);
  }
}

FourierField GalerkinBasis::field(std::size_t j) const { return field(j, lattice_); }

FourierField GalerkinBasis::field(std::size_t j, const Lattice& lattice) const {
  if (lattice.dimension() != n_) throw LatticeMismatch("basis and lattice dimensions differ");
  FourierField out(lattice, n_, FieldFlags{true, true, false});
  add_to(out, j, 1.0);
  return out;
}

void GalerkinBasis::add_to(FourierField& u, std::size_t j, double c) const {
  const BasisEntry& e = entries_.at(j);
  const auto pos = u.lattice().find(e.eta);
  if (!pos) return;
  const std::size_t neg = u.lattice().negated(*pos);
  const double s = c / std::numbers::sqrt2;
  const Complex plus = e.parity == Parity::cos ? Complex(s, 0.0) : Complex(0.0, -s);
  for (int d = 0; d < n_; ++d) {
    const double w = e.polarization[static_cast<std::size_t>(d)];
    u.at(*pos, d) += plus * w;
    u.at(neg, d) += std::conj(plus) * w;
  }
}

double GalerkinBasis::coefficient(const FourierField& u, std::size_t j) const {
  if (u.dimension() != n_ || u.components() != n_) throw LatticeMismatch("coefficient expects an n-vector field");
  const BasisEntry& e = entries_.at(j);
  const auto pos = u.lattice().find(e.eta);
  if (!pos) return 0.0;
  Complex s = 0.0;
  for (int d = 0; d < n_; ++d) s += e.polarization[static_cast<std::size_t>(d)] * u.at(*pos, d);
  return std::numbers::sqrt2 * (e.parity == Parity::cos ? s.real() : -s.imag());
}

std::vector<double> GalerkinBasis::coefficients(const FourierField& u, std::size_t m) const {
  if (m > size()) throw DomainError("requested more modes than the basis holds");
  std::vector<double> c(m);
  for (std::size_t j = 0; j < m; ++j) c[j] = coefficient(u, j);
  return c;
}

FourierField GalerkinBasis::synthesize(std::span<const double> c, const Lattice& lattice) const {
  if (c.size() > size()) throw DomainError("more coefficients than basis functions");
  if (lattice.dimension() != n_) throw LatticeMismatch("basis and lattice dimensions differ");
  FourierField out(lattice, n_, FieldFlags{true, true, false});
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (c[j] != 0.0) add_to(out, j, c[j]);
  }
  return out;
}

std::string GalerkinBasis::to_json() const {
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const auto& e : entries_) {
    list.push_back({{"eta", e.eta},
                    {"beta", e.beta + 1},
                    {"parity", e.parity == Parity::cos ? "cos" : "sin"},
                    {"polarization", e.polarization},
                    {"eigenvalue", e.eigenvalue}});
  }
  return list.dump();
}

FourierField project_Pm(const FourierField& u, const GalerkinBasis& basis, std::size_t m) {
  return basis.synthesize(basis.coefficients(u, m), u.lattice());
}

}  // namespace torusns
