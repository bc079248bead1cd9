#pragma once

#include <span>

#include "torusns/field.hpp"

namespace torusns {

/// 2 pi (1 + |xi|^2)^{1/2}, the symbol of the Bessel potential of order one.
double rho(std::span<const int> xi);
double rho_sq(int norm_sq);

/// (sum_xi rho(xi)^{2s} |g(xi)|^2)^{1/2}, summed over all components.
double sobolev_norm(const FourierField& g, double s);

/// sum_xi rho(xi)^{2s} g(xi) . conj(f(xi)).
Complex inner_product(const FourierField& g, const FourierField& f, double s);

/// sum_xi g(xi) . f(-xi); the L2 pairing of real fields.
Complex dual_product(const FourierField& g, const FourierField& f);

/// Multiply every coefficient by rho(xi)^r.
FourierField bessel_potential(const FourierField& g, double r);

/// Scalar -> vector; d_j becomes 2 pi i xi_j.
FourierField grad(const FourierField& g);
/// Vector -> scalar.
FourierField div(const FourierField& v);
/// Vector -> n*n components, entry (j, beta) at j*n+beta is d_j v_beta.
FourierField full_gradient(const FourierField& v);
/// Vector -> n*n components, E_{j beta} = (d_j v_beta + d_beta v_j)/2.
FourierField sym_gradient(const FourierField& v);
/// Componentwise spectral Laplacian.
FourierField laplacian(const FourierField& g);

/// Zero-pad or truncate to a new box cutoff.
FourierField resample(const FourierField& g, int cutoff);

/// Pointwise product a*b truncated back to the common lattice, computed on a
/// grid fine enough that no product mode aliases into the retained box.
/// `a` must be scalar or have the same component count as `b`.
FourierField multiply(const FourierField& a, const FourierField& b);

/// Pointwise dot product of two vector fields (same rules as multiply).
FourierField dot(const FourierField& a, const FourierField& b);

// --- physical-space transforms -------------------------------------------------

/// Smallest N >= minimum whose prime factors are all in {2, 3, 5, 7}.
int fft_friendly_size(int minimum);
/// Default quadrature grid 3K+1 (rounded up), exact for triple products of cutoff-K data.
int default_grid_size(int cutoff);

/// Sample g on the N^n grid. Throws AliasingError when N < 2K+1.
GridField to_physical(const FourierField& g, int grid_size);
/// Recover the cutoff-K coefficients of grid data. Throws AliasingError when N < 2K+1.
FourierField from_physical(const GridField& values, int cutoff);

/// Grid average of the pointwise dot products of two equally shaped grid fields.
double grid_mean_product(const GridField& a, const GridField& b);

}  // namespace torusns
