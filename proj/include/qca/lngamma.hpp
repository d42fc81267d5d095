#pragma once

#include "qca/rat.hpp"

namespace qca {

// Principal-branch log-Gamma on C minus the non-positive reals.
// Lanczos rational approximation (g = 7, 9 terms) with the reflection
// formula for Re w < 1/2; absolute error ~1e-13 away from the poles.
Cx lngamma_ref(Cx w);

// Same function through the truncated Weierstrass product,
//   -ln w - g_E w + sum_{k<=K} [w/k - ln(1 + w/k)],
// closed with an Euler-Maclaurin tail estimate so the truncation error
// decays like K^-3.  Principal branch for Re w > 0 (K = 200 agrees with
// the Lanczos route to ~7e-13 on Re w in (0, 8], |Im w| <= 2); off the
// right half-plane the value is some branch of log-Gamma, so exp() of it
// is still exact.  Rejects the cut (-inf, 0].
Cx lngamma_trunc(Cx w, int K);

} // namespace qca
