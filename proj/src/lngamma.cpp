#include "qca/lngamma.hpp"

#include <cmath>
#include <stdexcept>

namespace qca {

namespace {

// Lanczos coefficients for g = 7.
constexpr double kLanczos[9] = {
    0.99999999999980993227684700473478,
    676.520368121885098567009190444019,
    -1259.13921672240287047156078755283,
    771.3234287776530788486528258894,
    -176.61502916214059906584551354,
    12.507343278686904814458936853,
    -0.13857109526572011689554707,
    9.984369578019570859563e-6,
    1.50563273514931155834e-7};

constexpr double kHalfLn2Pi = 0.9189385332046727418;

Cx lngamma_right(Cx w) {
  // Valid for Re w >= 1/2.
  Cx x = w - 1.0;
  Cx a = kLanczos[0];
  for (int k = 1; k <= 8; ++k) a += kLanczos[k] / (x + static_cast<double>(k));
  Cx t = x + 7.5;
  return (x + 0.5) * std::log(t) - t + kHalfLn2Pi + std::log(a);
}

} // namespace

Cx lngamma_ref(Cx w) {
  if (w.real() >= 0.5) return lngamma_right(w);
  if (w.imag() == 0.0 && w.real() == std::floor(w.real()))
    throw std::domain_error("lngamma_ref: pole at non-positive integer");
  // Reflection: ln G(w) = ln(pi / sin(pi w)) - ln G(1 - w), up to 2*pi*i
  // branch jumps; exponentials of the result are branch-independent.
  const double pi = 3.14159265358979323846;
  return std::log(pi / std::sin(pi * w)) - lngamma_right(1.0 - w);
}

Cx lngamma_trunc(Cx w, int K) {
  if (w.imag() == 0.0 && w.real() <= 0.0)
    throw std::domain_error("lngamma_trunc: branch cut on (-inf, 0]");
  if (K < 8) throw std::domain_error("lngamma_trunc: K too small");
  constexpr double kEulerGamma = 0.57721566490153286061;
  Cx s = -std::log(w) - kEulerGamma * w;
  for (int k = 1; k <= K; ++k) {
    double kk = static_cast<double>(k);
    s += w / kk - std::log(1.0 + w / kk);
  }
  // Euler-Maclaurin closure of sum_{k>K} f(k), f(a) = w/a - ln(1 + w/a):
  // integral_{K+1}^(inf) f + f(K+1)/2 - f'(K+1)/12.
  double a = static_cast<double>(K + 1);
  Cx integral = -w - (w * std::log(a) - (a + w) * std::log(a + w) +
                      a * std::log(a));
  Cx fa = w / a - std::log(1.0 + w / a);
  Cx fpa = -w * w / (a * a * (a + w));
  return s + integral + fa / 2.0 - fpa / 12.0;
}

} // namespace qca
