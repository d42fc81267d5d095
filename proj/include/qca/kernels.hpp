#pragma once

#include "qca/checkresult.hpp"
#include "qca/symexpr.hpp"

namespace qca {

// The two free-boson backgrounds: the coupled-deformation one (level 1,
// second parameter etap tied to eta) and the self-dual one (etap = eta).
enum class KernelVariant { coupled, self_dual };

const char* kernel_variant_name(KernelVariant v);

// Momentum-space coefficient kernels of the auxiliary oscillator pair
// together with the mixing coefficients that rebuild the interacting
// modes.  A and B are odd with removable singularities at lam = 0; both
// facts are checked on construction (throws std::domain_error).
struct KernelSet {
  KernelVariant variant;
  double hbar = 0, eta = 0, etap = 0;
  SymPtr A, B, Xa, Xb, Ya, Yb;

  Cx eval(const SymPtr& e, Cx lam) const;

  static KernelSet make(KernelVariant v, double hbar, double eta);
};

// Rebuilt mode brackets: Xm(lam) Xn(-lam) A(lam) + Ym(lam) Yn(-lam) B(lam)
// against the closed forms for [a,a], [b,b], [a,b], on random samples off
// the csch poles.
CheckResult verify_derived_brackets(const KernelSet& ks, int samples,
                                    double tol, std::uint64_t seed);

// Small-lam slopes of A and B by Richardson extrapolation against the
// closed first-order coefficients.
CheckResult verify_asymptotics(const KernelSet& ks, double tol = 1e-6);

} // namespace qca
