#include "qca/numeval.hpp"

#include <cmath>

namespace qca {

const char* status_str(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::not_checked: return "not-checked";
    case Status::order_limited: return "order-limited";
  }
  return "?";
}

const char* mode_str(Mode m) { return m == Mode::exact ? "exact" : "numeric"; }

Cx random_modulus(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> mod(lo, hi), arg(0.0, 2.0 * M_PI);
  double r = mod(rng), t = arg(rng);
  return Cx(r * std::cos(t), r * std::sin(t));
}

double rel_error(Cx a, Cx b) {
  double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) / scale;
}

IdentResult rand_ident_test(const std::function<Cx(const NumEnv&)>& a,
                            const std::function<Cx(const NumEnv&)>& b,
                            const SampleDomain& domain, int samples, double tol,
                            std::uint64_t seed,
                            const std::function<bool(const NumEnv&)>& guard) {
  std::mt19937_64 rng(seed);
  IdentResult res;
  const int max_redraw = 64;
  for (int s = 0; s < samples; ++s) {
    NumEnv env;
    Cx va, vb;
    bool got = false;
    for (int attempt = 0; attempt < max_redraw && !got; ++attempt) {
      env.clear();
      for (const auto& n : domain.names)
        env[n] = random_modulus(rng, domain.modulus_lo, domain.modulus_hi);
      if (guard && !guard(env)) {
        ++res.redraws;
        continue;
      }
      try {
        va = a(env);
        vb = b(env);
        got = true;
      } catch (const std::exception& e) {
        ++res.redraws;
        res.failure = e.what();
      }
    }
    if (!got) {
      res.pass = false;
      res.failure = "no admissible sample after redraws: " + res.failure;
      return res;
    }
    double err = rel_error(va, vb);
    if (err > res.max_error) {
      res.max_error = err;
      res.worst = env;
    }
    ++res.samples;
  }
  res.pass = res.max_error <= tol;
  return res;
}

} // namespace qca
