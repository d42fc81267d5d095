#pragma once

#include "qca/checkresult.hpp"
#include "qca/keyhole.hpp"

namespace qca {

// Closed forms of the two regularized Laplace integrals
//   J1(x)     = int_C ln(-l)/(2 pi i l) e^{-x l} dl           = -ln x - g_E
//   J2(x;eta) = int_C ln(-l)/(2 pi i l) e^{-x l}/(1-e^{-l/eta}) dl
//             = ln G(eta x) + (eta x - 1/2)(g_E - ln eta) - ln(2 pi)/2
// for Re x > 0, with C the keyhole contour around the negative axis.
Cx j1_closed(Cx x);
Cx j2_closed(Cx x, double eta);

// The same integrals by direct contour quadrature.
PairingResult j1_quad(Cx x, const Keyhole& kh = {});
PairingResult j2_quad(Cx x, double eta, const Keyhole& kh = {});

// Quadrature vs closed form for J1 (two contour resolutions) and J2 on a
// grid of (x, eta), plus the half-integer reflection product
// G(1/2-x) G(1/2+x) = pi / cos(pi x) through the log-Gamma evaluator.
CheckResult verify_gamma_identities(int samples, double tol,
                                    std::uint64_t seed);

} // namespace qca
