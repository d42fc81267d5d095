#include "qca/kernels.hpp"

#include "qca/numeval.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace qca {

namespace {

using S = SymPtr;

S operator+(S a, S b) { return SymExpr::add(std::move(a), std::move(b)); }
S operator-(S a, S b) { return SymExpr::sub(std::move(a), std::move(b)); }
S operator*(S a, S b) { return SymExpr::mul(std::move(a), std::move(b)); }
S operator/(S a, S b) { return SymExpr::div(std::move(a), std::move(b)); }
S operator-(S a) { return SymExpr::neg(std::move(a)); }

S rc(long n, long d = 1) { return SymExpr::rc(Rat(n, d)); }
S sinh_(S x) { return SymExpr::fn(SymKind::sinh_fn, std::move(x)); }
S cosh_(S x) { return SymExpr::fn(SymKind::cosh_fn, std::move(x)); }
S csch_(S x) { return SymExpr::fn(SymKind::csch_fn, std::move(x)); }
S sq(S x) { return SymExpr::pow(std::move(x), Rat(2)); }

struct Syms {
  S lam = SymExpr::var("lam");
  S hb = SymExpr::param("hbar");
  S eta = SymExpr::param("eta");
  S etap = SymExpr::param("etap");
  S sh() const { return sinh_(hb * lam); }             // sinh(hbar lam)
  S ch2() const { return cosh_(hb * lam / rc(2)); }    // cosh(hbar lam / 2)
  S cs(S e) const { return csch_(lam / (rc(2) * e)); } // csch(lam / 2 eta)
};

} // namespace

const char* kernel_variant_name(KernelVariant v) {
  return v == KernelVariant::coupled ? "coupled" : "self-dual";
}

Cx KernelSet::eval(const SymPtr& e, Cx lam) const {
  return sym_eval(e, SymEnv{{"hbar", hbar},
                            {"eta", eta},
                            {"etap", etap},
                            {"lam", lam}});
}

KernelSet KernelSet::make(KernelVariant v, double hbar, double eta) {
  KernelSet ks;
  ks.variant = v;
  ks.hbar = hbar;
  ks.eta = eta;
  ks.etap = v == KernelVariant::coupled ? 1.0 / (1.0 / eta + hbar) : eta;

  Syms s;
  if (v == KernelVariant::coupled) {
    S den = rc(4) * s.ch2() + (s.cs(s.eta) - s.cs(s.etap)) * s.sh() + rc(2);
    ks.A = s.lam / den;
    ks.B = s.lam *
           ((rc(1) + s.cs(s.eta) * s.sh()) * (rc(1) - s.cs(s.etap) * s.sh()) -
            rc(4) * sq(s.ch2())) /
           den;
    S pre = rc(1) / (s.hb * s.lam);
    ks.Xa = pre * (s.cs(s.eta) * s.sh() + rc(2) * s.ch2() + rc(1));
    ks.Xb = pre * (s.cs(s.etap) * s.sh() - rc(2) * s.ch2() - rc(1));
    ks.Ya = pre;
    ks.Yb = pre;
  } else {
    S den = rc(4) * s.ch2() + rc(2);
    ks.A = s.lam / den;
    ks.B = -s.lam *
           (sq(s.cs(s.eta)) * sq(s.sh()) + rc(2) * cosh_(s.hb * s.lam) +
            rc(1)) /
           den;
    S pre = rc(1) / s.lam;
    ks.Xa = pre * (s.cs(s.eta) * s.sh() + rc(2) * s.ch2() + rc(1));
    ks.Xb = pre * (s.cs(s.eta) * s.sh() - rc(2) * s.ch2() - rc(1));
    ks.Ya = pre;
    ks.Yb = pre;
  }

  // Load checks: A, B odd on random samples, removable at lam = 0.
  std::mt19937_64 rng(0x6b65726eULL);
  int got = 0, tries = 0;
  while (got < 24 && tries < 400) {
    ++tries;
    Cx lam = random_modulus(rng, 0.3, 2.5);
    try {
      for (const SymPtr* e : {&ks.A, &ks.B}) {
        Cx p = ks.eval(*e, lam), m = ks.eval(*e, -lam);
        double scale = std::max({1.0, std::abs(p), std::abs(m)});
        if (std::abs(p + m) > 1e-12 * scale)
          throw std::domain_error("kernel fails antisymmetry at |lam|=" +
                                  std::to_string(std::abs(lam)));
      }
      ++got;
    } catch (const EvalError&) {
      // near a csch pole; redraw
    }
  }
  if (got < 24) throw std::domain_error("kernel antisymmetry check starved");
  for (const SymPtr* e : {&ks.A, &ks.B}) {
    Cx u1 = ks.eval(*e, 1e-4), u2 = ks.eval(*e, 2e-4);
    if (std::abs(u2 - 2.0 * u1) > 1e-6 * (1.0 + std::abs(u1)))
      throw std::domain_error("kernel not removable at lam = 0");
  }
  return ks;
}

CheckResult verify_derived_brackets(const KernelSet& ks, int samples,
                                    double tol, std::uint64_t seed) {
  CheckResult r;
  r.id = std::string("kernels:brackets:") + kernel_variant_name(ks.variant);
  r.mode = Mode::numeric;
  r.status = Status::pass;
  r.tolerance = tol;
  r.anchor = "Xm(l) Xn(-l) A(l) + Ym(l) Yn(-l) B(l) = [m,n] coefficient";

  Syms s;
  S one = rc(1);
  S pre = ks.variant == KernelVariant::coupled
              ? rc(1) / (sq(s.hb) * s.lam)
              : rc(1) / s.lam;
  S ratio_a = s.sh() * s.cs(s.eta);
  S ratio_b = ks.variant == KernelVariant::coupled ? s.sh() * s.cs(s.etap)
                                                   : s.sh() * s.cs(s.eta);
  S taa = -pre * (one + ratio_a);
  S tbb = -pre * (one - ratio_b);
  S tab = rc(2) * pre * s.ch2();

  auto lhs = [&ks](const SymPtr& xm, const SymPtr& xn, const SymPtr& ym,
                   const SymPtr& yn) {
    return [&ks, &xm, &xn, &ym, &yn](const NumEnv& env) {
      Cx lam = env.at("lam");
      return ks.eval(xm, lam) * ks.eval(xn, -lam) * ks.eval(ks.A, lam) +
             ks.eval(ym, lam) * ks.eval(yn, -lam) * ks.eval(ks.B, lam);
    };
  };
  auto closed = [&ks](const SymPtr& t) {
    return [&ks, &t](const NumEnv& env) { return ks.eval(t, env.at("lam")); };
  };
  auto guard = [&ks](const NumEnv& env) {
    Cx lam = env.at("lam");
    return std::abs(std::sinh(lam / (2.0 * ks.eta))) > 3e-2 &&
           std::abs(std::sinh(lam / (2.0 * ks.etap))) > 3e-2;
  };

  SampleDomain dom{{"lam"}, 0.25, 2.5};
  std::ostringstream note;
  int redraws = 0;
  struct Case {
    const char* tag;
    std::function<Cx(const NumEnv&)> l, t;
  };
  std::vector<Case> cases{
      {"aa", lhs(ks.Xa, ks.Xa, ks.Ya, ks.Ya), closed(taa)},
      {"bb", lhs(ks.Xb, ks.Xb, ks.Yb, ks.Yb), closed(tbb)},
      {"ab", lhs(ks.Xa, ks.Xb, ks.Ya, ks.Yb), closed(tab)}};
  for (const auto& c : cases) {
    IdentResult ir =
        rand_ident_test(c.l, c.t, dom, samples, tol, seed ^ std::hash<std::string>{}(c.tag), guard);
    r.samples += ir.samples;
    r.max_error = std::max(r.max_error, ir.max_error);
    redraws += ir.redraws;
    if (!ir.pass) {
      r.status = Status::fail;
      note << c.tag << " bracket mismatch";
      if (!ir.failure.empty()) note << " (" << ir.failure << ")";
      note << "; ";
    }
  }
  if (r.status == Status::pass)
    note << "aa/bb/ab rebuilt brackets match closed forms; redraws="
         << redraws;
  r.note = note.str();
  return r;
}

namespace {

// Two Richardson levels on t(h) = e(h)/h, even in h.
struct Slope {
  Cx value;
  double drift; // |last two extrapolants|
};

Slope slope_at_zero(const KernelSet& ks, const SymPtr& e) {
  double h0 = 0.4;
  Cx t[4];
  for (int i = 0; i < 4; ++i) {
    double h = h0 / (1 << i);
    t[i] = ks.eval(e, h) / h;
  }
  Cx r1[3];
  for (int i = 0; i < 3; ++i) r1[i] = (4.0 * t[i + 1] - t[i]) / 3.0;
  Cx r2[2];
  for (int i = 0; i < 2; ++i) r2[i] = (16.0 * r1[i + 1] - r1[i]) / 15.0;
  return {r2[1], std::abs(r2[1] - r2[0])};
}

} // namespace

CheckResult verify_asymptotics(const KernelSet& ks, double tol) {
  CheckResult r;
  r.id = std::string("kernels:slopes:") + kernel_variant_name(ks.variant);
  r.mode = Mode::numeric;
  r.tolerance = tol;
  r.anchor = "A ~ sA lam, B ~ sB lam as lam -> 0";

  double hb = ks.hbar, eta = ks.eta, etap = ks.etap;
  double den = 2.0 * (eta - etap) * hb + 6.0;
  Cx sa_closed = 1.0 / den;
  Cx sb_closed = ((1.0 + 2.0 * hb * eta) * (1.0 - 2.0 * hb * etap) - 4.0) / den;

  Slope sa = slope_at_zero(ks, ks.A);
  Slope sb = slope_at_zero(ks, ks.B);
  r.samples = 2;
  r.constants["slope_a"] = sa.value;
  r.constants["slope_b"] = sb.value;
  if (sa.drift > 10 * tol || sb.drift > 10 * tol) {
    r.status = Status::fail;
    r.note = "Richardson extrapolation did not stabilize";
    r.max_error = std::max(sa.drift, sb.drift);
    return r;
  }
  r.max_error =
      std::max(rel_error(sa.value, sa_closed), rel_error(sb.value, sb_closed));
  r.status = r.max_error <= tol ? Status::pass : Status::fail;
  if (r.status == Status::fail)
    r.note = "extrapolated slope disagrees with closed coefficient";
  return r;
}

} // namespace qca
