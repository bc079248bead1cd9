#pragma once

#include "torusns/field.hpp"

namespace torusns {

enum class AdvectionMethod {
  pseudospectral,  // dealiased grid product
  convolution,     // exact double sum over mode pairs, O((2K+1)^{2n})
};

/// Coefficients of (v1 . grad) v2 on the common lattice.
FourierField advect(const FourierField& v1, const FourierField& v2,
                    AdvectionMethod method = AdvectionMethod::pseudospectral);

/// <(v1 . grad) v2, v3>_T.
double trilinear(const FourierField& v1, const FourierField& v2, const FourierField& v3,
                 AdvectionMethod method = AdvectionMethod::pseudospectral);

/// P_sigma[(u . grad) u] for solenoidal u; the mean (zero up to round-off) is dropped.
FourierField advect_projected(const FourierField& u, AdvectionMethod method = AdvectionMethod::pseudospectral);

/// div(v1 (x) v2), the conservative form: component k is d_j (v1_j v2_k).
FourierField div_tensor_product(const FourierField& v1, const FourierField& v2);

}  // namespace torusns
