#include "qca/gammaid.hpp"

#include "qca/lngamma.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace qca {

namespace {
constexpr double kEulerGamma = 0.57721566490153286061;
constexpr double kPi = 3.14159265358979323846;
constexpr double kHalfLn2Pi = 0.9189385332046727418;
} // namespace

Cx j1_closed(Cx x) { return -std::log(x) - kEulerGamma; }

Cx j2_closed(Cx x, double eta) {
  return lngamma_ref(eta * x) +
         (eta * x - 0.5) * (kEulerGamma - std::log(eta)) - kHalfLn2Pi;
}

PairingResult j1_quad(Cx x, const Keyhole& kh) {
  return kh.integrate([x](Cx lam) { return std::exp(-x * lam) / lam; });
}

PairingResult j2_quad(Cx x, double eta, const Keyhole& kh) {
  return kh.integrate([x, eta](Cx lam) {
    // 1 - e^{-lam/eta} via expm1 to keep the small-|lam| circle stable.
    Cx den = -(std::exp(-lam / eta) - 1.0);
    return std::exp(-x * lam) / (lam * den);
  });
}

CheckResult verify_gamma_identities(int samples, double tol,
                                    std::uint64_t seed) {
  CheckResult r;
  r.id = "gamma:identities";
  r.mode = Mode::numeric;
  r.status = Status::pass;
  r.tolerance = tol;
  r.anchor = "J2(x;eta) = ln G(eta x) + (eta x - 1/2)(g_E - ln eta) - ln(2pi)/2";
  std::ostringstream note;

  // Stage 1: the plain Laplace integral at two contour resolutions.  Both
  // must land on -ln x - g_E before the J2 comparisons mean anything.
  Keyhole kh1;
  Keyhole kh2;
  kh2.eps = 2e-3;
  kh2.circle_panels = 64;
  const Cx probes[] = {{1.0, 0.0}, {0.3, 0.0}, {2.2, 0.4}, {0.7, -0.3},
                       {1.6, 0.8}};
  for (Cx x : probes) {
    Cx want = j1_closed(x);
    Cx q1 = j1_quad(x, kh1).value;
    Cx q2 = j1_quad(x, kh2).value;
    double e = std::max({std::abs(q1 - want), std::abs(q2 - want),
                         std::abs(q1 - q2)});
    r.max_error = std::max(r.max_error, e);
    ++r.samples;
    if (e > tol) {
      r.status = Status::fail;
      r.note = "plain Laplace integral disagrees between resolutions";
      return r;
    }
  }

  // Stage 2: J2 on a random (x, eta) grid.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(0.2, 3.0), uy(-0.5, 0.5),
      ue(0.3, 2.0);
  int n = std::max(samples, 20);
  double worst = 0.0;
  Cx worst_x;
  double worst_eta = 0.0;
  for (int i = 0; i < n; ++i) {
    Cx x{ux(rng), uy(rng)};
    double eta = ue(rng);
    Cx want = j2_closed(x, eta);
    Cx got = j2_quad(x, eta).value;
    double e = std::abs(got - want) / std::max(1.0, std::abs(want));
    ++r.samples;
    if (e > worst) {
      worst = e;
      worst_x = x;
      worst_eta = eta;
    }
  }
  r.max_error = std::max(r.max_error, worst);
  if (worst > tol) {
    r.status = Status::fail;
    std::ostringstream o;
    o << "J2 mismatch " << worst << " at x=" << worst_x.real() << "+"
      << worst_x.imag() << "i, eta=" << worst_eta;
    r.note = o.str();
    return r;
  }

  // Pinned point: x = 1, eta = 1 collapses to g_E/2 - ln(2 pi)/2.
  Cx pin{kEulerGamma / 2.0 - kHalfLn2Pi, 0.0};
  r.constants["j2_pin"] = j2_closed(1.0, 1.0);
  if (std::abs(j2_closed(1.0, 1.0) - pin) > 1e-12 ||
      std::abs(j2_quad(1.0, 1.0).value - pin) > tol) {
    r.status = Status::fail;
    r.note = "pinned J2(1;1) value missed";
    return r;
  }

  // Stage 3: reflection product through the log-Gamma evaluator.
  const double refl_tol = 1e-10;
  std::uniform_real_distribution<double> ur(-0.45, 0.45), ui(-0.6, 0.6);
  auto gamma_pair = [](Cx x) {
    return std::exp(lngamma_ref(0.5 - x) + lngamma_ref(0.5 + x));
  };
  double refl_worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    Cx x{ur(rng), ui(rng)};
    Cx want = kPi / std::cos(kPi * x);
    double e = std::abs(gamma_pair(x) - want) / std::max(1.0, std::abs(want));
    refl_worst = std::max(refl_worst, e);
    ++r.samples;
  }
  Cx quarter = gamma_pair(0.25);
  r.constants["reflection_quarter"] = quarter;
  refl_worst = std::max(refl_worst,
                        std::abs(gamma_pair(Cx{0.0, 0.0}) - kPi) / kPi);
  refl_worst = std::max(
      refl_worst, std::abs(quarter - kPi * std::sqrt(2.0)) /
                      (kPi * std::sqrt(2.0)));
  r.max_error = std::max(r.max_error, refl_worst);
  if (refl_worst > refl_tol) {
    r.status = Status::fail;
    r.note = "reflection product off the cosine closed form";
    return r;
  }

  note << "two-resolution Laplace check, " << n
       << " J2 points, reflection at 1e-10";
  r.note = note.str();
  return r;
}

} // namespace qca
