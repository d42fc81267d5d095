#pragma once

#include "qca/algdsl.hpp"
#include "qca/checkresult.hpp"
#include "qca/kernels.hpp"

#include <array>
#include <map>
#include <vector>

namespace qca {

// Log of a two-point contraction <X(u) Y(v)>, expressed in x = i(u - v) as
// weighted principal logs, weighted truncated log-Gamma factors, and a
// constant.  Exponentials of evaluations are branch-exact.
struct GammaContraction {
  struct LogTerm {
    double weight;
    Cx offset;
  };
  struct GammaTerm {
    double weight;
    Cx offset;
    double scale; // log-Gamma argument is scale * (x + offset)
  };
  std::vector<LogTerm> logs;
  std::vector<GammaTerm> gammas;
  Cx affine{0.0, 0.0};
  int K = 200; // default truncation index

  Cx eval_x(Cx x, int k) const; // truncated Weierstrass route
  Cx eval_x(Cx x) const { return eval_x(x, K); }
  Cx eval_x_ref(Cx x) const; // Lanczos route (cross-check oracle)
  Cx at(Cx delta, int k) const { return eval_x(Cx{0.0, 1.0} * delta, k); }
  Cx at(Cx delta) const { return at(delta, K); }
};

// Elementary oscillator-pair contraction for the given background.
// m, n are 'a' or 'b'.
GammaContraction mode_pair_kernel(KernelVariant v, char m, char n,
                                  double hbar, double eta, int K = 200);

// A represented current: constituent bosons with imaginary rapidity
// offsets (the stored offset o means a shift by i*o), plus the zero-mode
// exponent coefficients that decide the ordering cocycle.
struct ContCurrent {
  std::vector<std::pair<char, double>> parts;
  std::array<Cx, 2> P{}; // momentum coefficients, (a, b) slots
  std::array<Cx, 2> Q{}; // conjugate coefficients
};

// Free-field model of the current family over one background.
struct ContRep {
  KernelVariant variant = KernelVariant::coupled;
  double hbar = 0, eta = 0, etap = 0;
  int K = 200;
  GammaContraction g_aa, g_bb, g_ab;
  std::map<std::string, ContCurrent> currents;

  // Requires 0 < hbar < 1/(2 eta).
  static ContRep make(KernelVariant v, double hbar, double eta, int K = 200);

  Cx pair_exponent(const ContCurrent& x, const ContCurrent& y, Cx delta,
                   int k) const;
  Cx cocycle(const ContCurrent& x, const ContCurrent& y) const;
  // cocycle * exp(<XY>(delta) - <YX>(-delta)) at truncation k
  Cx exchange_ratio(const std::string& X, const std::string& Y, Cx delta,
                    int k) const;
  Cx exchange_ratio(const std::string& X, const std::string& Y,
                    Cx delta) const {
    return exchange_ratio(X, Y, delta, K);
  }
};

// Represented exchange ratio against the declared structure function on
// random draws with 0 < hbar < 1/(2 eta).  Every sample must first be
// stable under K -> K+10 within tol/10, else the check fails outright.
CheckResult verify_continuum_exchange(const AlgebraSpec& alg, KernelVariant v,
                                      const RelationSpec& rel, int samples,
                                      double tol, int K, std::uint64_t seed);

// The self-dual ratios depend on eta only through q = e^{2 pi i eta hbar}
// and the multiplicative points: rescaling eta with those held fixed must
// not move the ratio.
CheckResult verify_eta_redundancy(double tol);

} // namespace qca
