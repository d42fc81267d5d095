#include "qca/keyhole.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <stdexcept>

namespace qca {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
using G15 = boost::math::quadrature::gauss<double, 15>;

// Adaptive integral of a complex integrand, real and imaginary parts split.
Cx gk_complex(const std::function<Cx(double)>& f, double a, double b, double tol,
              double* err) {
  double e1 = 0, e2 = 0;
  double re = GK::integrate([&](double t) { return f(t).real(); }, a, b, 15, tol, &e1);
  double im = GK::integrate([&](double t) { return f(t).imag(); }, a, b, 15, tol, &e2);
  if (err) *err = e1 + e2;
  return {re, im};
}

} // namespace

PairingResult Keyhole::integrate(const std::function<Cx(Cx)>& F) const {
  // Pick R so the tail past it is negligible against the accumulated scale.
  double R = r_min;
  double scale = 0.0;
  for (double t = eps; t < R; t *= 4) scale = std::max(scale, std::abs(F(Cx(t, 0.0))));
  while (true) {
    double tail = std::abs(F(Cx(R, 0.0))) * R;
    if (tail <= 1e-16 * (scale + 1.0)) break;
    R *= 2;
    if (R > r_max)
      throw std::runtime_error("keyhole integrand does not decay along the ray");
  }

  // Ray part: the ln l parts of the two edges cancel and the two -/+ i pi
  // halves add up to the plain integral of F over [eps, R].  Logarithmic
  // substitution resolves the eps end.
  double ray_err = 0.0;
  Cx ray = gk_complex(
      [&](double s) {
        double t = std::exp(s);
        return F(Cx(t, 0.0)) * t;
      },
      std::log(eps), std::log(R), ray_tol, &ray_err);

  // Circle part: l = eps e^{i theta}, theta 0 -> 2pi (counterclockwise,
  // entering above the cut and leaving below), ln(-l) = ln eps + i(theta - pi).
  auto circle_at = [&](int panels) {
    Cx acc{};
    const double w = 2.0 * M_PI / panels;
    for (int p = 0; p < panels; ++p) {
      double t0 = p * w, t1 = t0 + w;
      auto seg = [&](double th) {
        Cx l = eps * std::exp(Cx(0.0, th));
        Cx lnneg(std::log(eps), th - M_PI);
        Cx dl = Cx(0.0, eps) * std::exp(Cx(0.0, th)); // dl/dtheta
        return lnneg * F(l) * dl;
      };
      double re = G15::integrate([&](double th) { return seg(th).real(); }, t0, t1);
      double im = G15::integrate([&](double th) { return seg(th).imag(); }, t0, t1);
      acc += Cx(re, im);
    }
    return acc / Cx(0.0, 2.0 * M_PI); // 1/(2 pi i)
  };
  Cx c1 = circle_at(circle_panels);
  Cx c2 = circle_at(2 * circle_panels);

  PairingResult r;
  r.value = ray + c2;
  r.err = ray_err + std::abs(c2 - c1);
  return r;
}

PairingResult pairing_regularized(const std::function<Cx(Cx)>& f,
                                  const std::function<Cx(Cx)>& g,
                                  const std::function<Cx(Cx)>& x,
                                  const Keyhole& kh) {
  auto F = [&](Cx l) { return f(l) * x(l) * g(-l); };
  return kh.integrate(F);
}

} // namespace qca
