#pragma once

#include "torusns/field.hpp"

namespace torusns {

/// Relative size of a mean or a solenoidal remainder treated as round-off.
inline constexpr double kDecompositionTolerance = 1e-10;

/// Gradient part xi (xi . F(xi)) / |xi|^2 of a zero-mean vector field.
FourierField project_grad(const FourierField& F);

/// Leray projection F(xi) - xi (xi . F(xi)) / |xi|^2 of a zero-mean vector field.
FourierField project_sigma(const FourierField& F);

/// Zero-mean potential field F with div F = f: F(xi) = xi f(xi) / (2 pi i |xi|^2).
/// Throws DomainError when f has a nonzero mean.
FourierField solve_div(const FourierField& f);

/// Zero-mean scalar f with grad f = F: f(xi) = xi . F(xi) / (2 pi i |xi|^2).
/// Throws DomainError when ||P_sigma F||_{H^{s-1}} exceeds the tolerance
/// relative to ||F||_{H^{s-1}}.
FourierField solve_grad(const FourierField& F, double s = 0.0);

}  // namespace torusns
