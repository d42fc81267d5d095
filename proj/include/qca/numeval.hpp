#pragma once

#include "qca/checkresult.hpp"

#include <complex>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace qca {

using Cx = std::complex<double>;
using NumEnv = std::map<std::string, Cx>;

// Complex sample with modulus in [lo, hi], uniform argument.
Cx random_modulus(std::mt19937_64& rng, double lo = 0.3, double hi = 3.0);

struct SampleDomain {
  std::vector<std::string> names;
  double modulus_lo = 0.3;
  double modulus_hi = 3.0;
};

struct IdentResult {
  bool pass = true;
  double max_error = 0.0;
  NumEnv worst;
  int samples = 0;
  int redraws = 0;
  std::string failure; // evaluation failure text, if any
};

// Randomized identity test |a - b| / max(1, |a|, |b|) <= tol on `samples`
// draws.  Evaluators may throw to signal a singular draw; such draws are
// redrawn (up to a cap) and logged, not failed.  A guard callback may also
// reject draws (e.g. near-pole |den| < 1e-8).
IdentResult rand_ident_test(
    const std::function<Cx(const NumEnv&)>& a,
    const std::function<Cx(const NumEnv&)>& b, const SampleDomain& domain,
    int samples, double tol, std::uint64_t seed,
    const std::function<bool(const NumEnv&)>& guard = nullptr);

double rel_error(Cx a, Cx b);

} // namespace qca
