#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qca/builtin.hpp"
#include "qca/gammaid.hpp"
#include "qca/gcontr.hpp"
#include "qca/kernels.hpp"
#include "qca/lngamma.hpp"

#include <chrono>
#include <cmath>

using namespace qca;

namespace {
constexpr double kGammaE = 0.57721566490153286061;
constexpr double kPi = 3.14159265358979323846;

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}
} // namespace

TEST_CASE("log-Gamma: truncated product against the Lanczos route") {
  // Known points first.
  CHECK(std::abs(lngamma_ref(0.5) - 0.5 * std::log(kPi)) < 1e-13);
  CHECK(std::abs(lngamma_ref(5.0) - std::log(24.0)) < 1e-13);
  CHECK(std::abs(lngamma_ref(1.0)) < 1e-13);

  const Cx pts[] = {{0.3, 0.0},  {1.0, 0.5},  {2.5, -1.2},
                    {0.45, 1.8}, {6.0, 2.0},  {0.2, -0.3}};
  double worst = 0.0, drift = 0.0;
  for (Cx w : pts) {
    Cx a = lngamma_trunc(w, 200);
    worst = std::max(worst, std::abs(a - lngamma_ref(w)));
    drift = std::max(drift, std::abs(a - lngamma_trunc(w, 210)));
  }
  INFO("worst=" << worst << " drift=" << drift);
  CHECK(worst < 5e-12);
  CHECK(drift < 1e-11);

  // Left of the axis the value is a branch of log-Gamma: exponentials agree.
  Cx w{-0.05, 0.8};
  Cx ea = std::exp(lngamma_trunc(w, 200)), eb = std::exp(lngamma_ref(w));
  CHECK(std::abs(ea - eb) / std::abs(eb) < 1e-10);

  CHECK_THROWS_AS(lngamma_trunc(Cx{-1.5, 0.0}, 200), std::domain_error);
  CHECK_THROWS_AS(lngamma_trunc(Cx{1.0, 0.0}, 4), std::domain_error);
}

TEST_CASE("kernel sets build and pass their structural load checks") {
  KernelSet c = KernelSet::make(KernelVariant::coupled, 0.22, 0.8);
  CHECK(c.etap == doctest::Approx(1.0 / (1.0 / 0.8 + 0.22)).epsilon(1e-14));
  KernelSet s = KernelSet::make(KernelVariant::self_dual, 0.22, 0.8);
  CHECK(s.etap == 0.8);

  // Spot values: A is lam/denominator with the closed denominator.
  Cx lam{0.9, 0.2};
  Cx den = 4.0 * std::cosh(0.22 * lam / 2.0) +
           (1.0 / std::sinh(lam / 1.6) - 1.0 / std::sinh(lam / (2.0 * c.etap))) *
               std::sinh(0.22 * lam) +
           2.0;
  CHECK(std::abs(c.eval(c.A, lam) - lam / den) < 1e-13);

  // Mixing coefficients at hbar -> 0 in the self-dual background: 3/lam.
  KernelSet s0 = KernelSet::make(KernelVariant::self_dual, 0.0, 0.8);
  CHECK(std::abs(s0.eval(s0.Xa, lam) - 3.0 / lam) < 1e-13);
}

TEST_CASE("rebuilt oscillator brackets match their closed forms") {
  auto t0 = std::chrono::steady_clock::now();
  for (double hbar : {0.18, 0.31}) {
    KernelSet c = KernelSet::make(KernelVariant::coupled, hbar, 0.75);
    CheckResult r = verify_derived_brackets(c, 200, 1e-10, 20260824);
    INFO(r.id << ": " << r.note);
    CHECK(r.status == Status::pass);
    CHECK(r.max_error <= 1e-10);
    CHECK(r.samples >= 600);
  }
  CHECK(ms_since(t0) < 10000.0);
}

TEST_CASE("self-dual brackets, including the undeformed limit") {
  KernelSet s = KernelSet::make(KernelVariant::self_dual, 0.27, 0.6);
  CheckResult r = verify_derived_brackets(s, 200, 1e-10, 77);
  INFO(r.note);
  CHECK(r.status == Status::pass);

  // hbar = 0: everything collapses to -1/lam, -1/lam, 2/lam.
  KernelSet s0 = KernelSet::make(KernelVariant::self_dual, 0.0, 0.6);
  Cx lam{0.7, 0.0};
  Cx aa = s0.eval(s0.Xa, lam) * s0.eval(s0.Xa, -lam) * s0.eval(s0.A, lam) +
          s0.eval(s0.Ya, lam) * s0.eval(s0.Ya, -lam) * s0.eval(s0.B, lam);
  CHECK(std::abs(aa - (-1.0 / lam)) < 1e-12);
  CheckResult r0 = verify_derived_brackets(s0, 50, 1e-10, 78);
  CHECK(r0.status == Status::pass);
}

TEST_CASE("small-argument slopes of A and B") {
  for (double hbar : {0.0, 0.2}) {
    KernelSet c = KernelSet::make(KernelVariant::coupled, hbar, 0.9);
    CheckResult r = verify_asymptotics(c);
    INFO("coupled hbar=" << hbar << " err=" << r.max_error);
    CHECK(r.status == Status::pass);
    if (hbar == 0.0)
      CHECK(std::abs(r.constants.at("slope_a") - Cx{1.0 / 6.0, 0.0}) < 1e-9);
  }
  KernelSet s = KernelSet::make(KernelVariant::self_dual, 0.24, 0.7);
  CheckResult r = verify_asymptotics(s);
  CHECK(r.status == Status::pass);
  // Closed slope of B here is -(3 + 4 hbar^2 eta^2)/6.
  double want = -(3.0 + 4.0 * 0.24 * 0.24 * 0.7 * 0.7) / 6.0;
  CHECK(std::abs(r.constants.at("slope_b") - Cx{want, 0.0}) < 1e-6);
}

TEST_CASE("regularized Laplace integrals against their Gamma closed forms") {
  auto t0 = std::chrono::steady_clock::now();
  CHECK(std::abs(j1_quad(Cx{1.0, 0.0}).value - (-kGammaE)) < 1e-8);
  CheckResult r = verify_gamma_identities(24, 1e-6, 424242);
  INFO(r.note);
  CHECK(r.status == Status::pass);
  CHECK(r.samples >= 20);
  Cx pin = r.constants.at("j2_pin");
  CHECK(std::abs(pin - Cx{kGammaE / 2.0 - 0.9189385332046727418, 0.0}) <
        1e-12);
  CHECK(std::abs(r.constants.at("reflection_quarter") -
                 Cx{kPi * std::sqrt(2.0), 0.0}) < 1e-10);
  CHECK(ms_since(t0) < 30000.0);
}

TEST_CASE("mode-pair contractions: truncated route against the Lanczos route") {
  GammaContraction aa =
      mode_pair_kernel(KernelVariant::coupled, 'a', 'a', 0.2, 0.8);
  GammaContraction bb =
      mode_pair_kernel(KernelVariant::coupled, 'b', 'b', 0.2, 0.8);
  GammaContraction ab =
      mode_pair_kernel(KernelVariant::coupled, 'a', 'b', 0.2, 0.8);
  for (Cx x : {Cx{0.3, 0.2}, Cx{0.1, -1.1}, Cx{0.02, 0.7}}) {
    CHECK(std::abs(aa.eval_x(x) - aa.eval_x_ref(x)) < 1e-10);
    CHECK(std::abs(bb.eval_x(x) - bb.eval_x_ref(x)) < 1e-10);
    CHECK(std::abs(ab.eval_x(x) - ab.eval_x_ref(x)) < 1e-12);
  }
  CHECK(aa.gammas.size() == 2);
  CHECK(ab.gammas.empty());
  CHECK(ab.logs.size() == 2);
}

TEST_CASE("free-field model construction guards its deformation domain") {
  CHECK_THROWS_AS(ContRep::make(KernelVariant::coupled, 0.0, 0.8),
                  std::domain_error);
  CHECK_THROWS_AS(ContRep::make(KernelVariant::coupled, 0.7, 0.8),
                  std::domain_error);
  ContRep rep = ContRep::make(KernelVariant::coupled, 0.2, 0.8);
  CHECK(rep.currents.count("E") == 1);
  CHECK(rep.currents.count("H-") == 1);
  ContRep sd = ContRep::make(KernelVariant::self_dual, 0.2, 0.8);
  CHECK(sd.currents.count("psi+") == 1);
}

TEST_CASE("raising/lowering pair has a smooth ratio of -1") {
  ContRep rep = ContRep::make(KernelVariant::coupled, 0.23, 0.7);
  for (Cx d : {Cx{0.8, 0.0}, Cx{-1.1, 0.03}, Cx{0.4, -0.02}}) {
    Cx ratio = rep.exchange_ratio("E", "F", d);
    CHECK(std::abs(ratio - Cx{-1.0, 0.0}) < 1e-12);
  }
}

TEST_CASE("coupled background reproduces all declared exchange relations") {
  const AlgebraSpec& alg = builtin::def1();
  int n = 0;
  for (const auto& rel : alg.relations) {
    if (rel.kind != RelationSpec::exchange) continue;
    CheckResult r = verify_continuum_exchange(alg, KernelVariant::coupled,
                                              rel, 50, 1e-6, 200, 9001 + n);
    INFO(r.id << " err=" << r.max_error << " note=" << r.note);
    CHECK(r.status == Status::pass);
    CHECK(std::abs(r.constants.at("k_drift")) <= 1e-7);
    ++n;
  }
  CHECK(n == 9);
}

TEST_CASE("self-dual background reproduces the multiplicative relations") {
  const AlgebraSpec& alg = builtin::uq_osp22();
  int n = 0;
  for (const auto& rel : alg.relations) {
    if (rel.kind != RelationSpec::exchange) continue;
    CheckResult r = verify_continuum_exchange(alg, KernelVariant::self_dual,
                                              rel, 50, 1e-6, 200, 1201 + n);
    INFO(r.id << " err=" << r.max_error << " note=" << r.note);
    CHECK(r.status == Status::pass);
    ++n;
  }
  CHECK(n == 9);
}

TEST_CASE("eta enters the self-dual ratios only through the fixed data") {
  CheckResult r = verify_eta_redundancy(1e-8);
  INFO("drift=" << r.max_error
                << " vs_target=" << std::abs(r.constants.at("vs_target")));
  CHECK(r.status == Status::pass);
  CHECK(r.max_error < 1e-10);
  CHECK(std::abs(r.constants.at("vs_target")) < 1e-6);
}

TEST_CASE("a tampered structure function is rejected") {
  const AlgebraSpec& alg = builtin::def1();
  const RelationSpec* ee = alg.exchange_decl("E", "E");
  REQUIRE(ee != nullptr);
  RelationSpec forged = *ee;
  forged.factor = SymExpr::mul(SymExpr::rc(Rat(101, 100)), forged.factor);
  CheckResult r = verify_continuum_exchange(alg, KernelVariant::coupled,
                                            forged, 20, 1e-6, 200, 5);
  CHECK(r.status == Status::fail);
  CHECK(r.max_error > 1e-3);
}
