#pragma once

#include "qca/rat.hpp"

#include <functional>

namespace qca {

struct PairingResult {
  Cx value{};
  double err = 0.0;
};

// Contour integral  I[F] = (1/2pi i) \oint_C dl ln(-l) F(l)  over a keyhole
// hugging the positive real axis: incoming ray [R, eps] above the cut with
// ln(-l) = ln l - i pi, circle of radius eps traversed counterclockwise,
// outgoing ray [eps, R] below with ln(-l) = ln l + i pi.  The two ray edges
// combine into the plain integral of F; the circle keeps the ln weight.
// R grows by doubling until the tail is negligible.
struct Keyhole {
  double eps = 1e-3;
  double ray_tol = 1e-13;
  double r_min = 80.0;
  double r_max = 1e7;
  int circle_panels = 40; // 15-point Gauss each

  PairingResult integrate(const std::function<Cx(Cx)>& F) const;
};

// Regularized Fock-space pairing  <f | g>_x = I[l -> f(l) x(l) g(-l)].
// f, g may carry simple poles at 0; x must be regular at 0.  Throws
// std::runtime_error when the integrand does not decay along the ray.
PairingResult pairing_regularized(const std::function<Cx(Cx)>& f,
                                  const std::function<Cx(Cx)>& g,
                                  const std::function<Cx(Cx)>& x,
                                  const Keyhole& kh = {});

} // namespace qca
