#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qca/builtin.hpp"
#include "qca/fock.hpp"
#include "qca/keyhole.hpp"
#include "qca/zeromode.hpp"

#include <cmath>
#include <complex>
#include <random>

using namespace qca;
using Cx = std::complex<double>;

namespace {
constexpr double kEulerGamma = 0.57721566490153286;
}

TEST_CASE("reordering a momentum exponential past a coordinate exponential") {
  // A = ln(z) P,  B = 2 Q  ->  e^A e^B = z^2 e^B e^A
  ZmLinearForm A, B;
  A.coeff["P"] = ZmValue{Rat(0), Rat(0), {{"z", Rat(1)}}};
  B.coeff["Q"] = ZmValue{Rat(2), Rat(0), {}};
  std::vector<std::pair<std::string, std::string>> pairs{{"P", "Q"}};

  ZmFactor s = zero_mode_reorder(A, B, pairs);
  CHECK(s.ipow == 0);
  CHECK(s.rexp == 0);
  REQUIRE(s.powers.size() == 1);
  CHECK(s.powers.at("z") == Rat(2));

  // independent check in the functional model P = d/dx, Q = x:
  // e^{c P} shifts by c, e^{2Q} multiplies by e^{2x}; the swap scalar is the
  // ratio of the two orderings applied to any test function
  Cx z(1.3, 0.4);
  Cx c = std::log(z);
  auto f = [](Cx x) { return 1.0 + x + x * x / 3.0; };
  double x0 = 0.25;
  Cx lhs = std::exp(2.0 * (x0 + c)) * f(x0 + c); // e^A e^B f
  Cx rhs = std::exp(Cx(2.0 * x0, 0.0)) * f(x0 + c); // e^B e^A f
  Cx expect = lhs / rhs;
  CHECK(std::abs(s.eval({{"z", z}}) - expect) < 1e-14);
  CHECK(std::abs(expect - z * z) < 1e-14);
}

TEST_CASE("coordinate-only exponentials commute") {
  ZmLinearForm A, B;
  A.coeff["Qa"] = ZmValue{Rat(3), Rat(0), {}};
  A.coeff["Qb"] = ZmValue{Rat(0), Rat(1), {}};
  B.coeff["Qa"] = ZmValue{Rat(-1, 2), Rat(0), {}};
  ZmFactor s = zero_mode_reorder(
      A, B, {{"Pa", "Qa"}, {"Pb", "Qb"}});
  CHECK(s.is_one());
}

TEST_CASE("half-pi momentum prefactor produces the imaginary cocycle") {
  // A = (i pi/2)(1/p) P,  B = p Q, p = 3/2  ->  scalar exp(i pi/2) = i
  Rat p(3, 2);
  ZmLinearForm A, B;
  A.coeff["P"] = ZmValue{Rat(0), Rat(1) / p, {}};
  B.coeff["Q"] = ZmValue{p, Rat(0), {}};
  ZmFactor s = zero_mode_reorder(A, B, {{"P", "Q"}});
  CHECK(s.ipow == Rat(1));
  CHECK(s.rexp == 0);
  CHECK(s.powers.empty());
  CHECK(std::abs(s.eval({}) - Cx(0.0, 1.0)) < 1e-15);
}

TEST_CASE("coefficient expressions fold into the exact linear form") {
  const RealizationSpec* rz = builtin::uq_osp22().realization("gamma_q");
  REQUIRE(rz != nullptr);

  // first field: Pa carries ln(z), Qa carries 2
  const RealField& phi = rz->fields[0];
  CHECK(zm_value_from_expr(phi.zm[0].second) ==
        ZmValue{Rat(0), Rat(0), {{"z", Rat(1)}}});
  CHECK(zm_value_from_expr(phi.zm[1].second) == ZmValue{Rat(2), Rat(0), {}});

  // second field: both momenta carry -(ln z + i pi/2)
  const RealField& phib = rz->fields[1];
  ZmValue want{Rat(0), Rat(-1), {{"z", Rat(-1)}}};
  for (auto& [sym, coeff] : phib.zm) {
    if (sym == "Pa" || sym == "Pb") CHECK(zm_value_from_expr(coeff) == want);
    if (sym == "Qa") CHECK(zm_value_from_expr(coeff) == ZmValue{Rat(-2), Rat(0), {}});
    if (sym == "Qb") CHECK(zm_value_from_expr(coeff) == ZmValue{Rat(2), Rat(0), {}});
  }

  // rebasing the spectral variable: ln(z) with z -> z h^2 picks up 2 ln(h)
  ZmValue v{Rat(0), Rat(0), {{"z", Rat(3)}}};
  v.subst_log("z", {{"z", Rat(1)}, {"h", Rat(2)}});
  CHECK(v == ZmValue{Rat(0), Rat(0), {{"z", Rat(3)}, {"h", Rat(6)}}});

  // nonlinear coefficients are rejected
  SymPtr bad = SymExpr::mul(SymExpr::fn(SymKind::ln_fn, SymExpr::var("z")),
                            SymExpr::fn(SymKind::ln_fn, SymExpr::var("z")));
  CHECK_THROWS_AS(zm_value_from_expr(bad), std::domain_error);
}

TEST_CASE("keyhole pairing: vanishing kernel and closed-form values") {
  auto pole = [](Cx l) { return 1.0 / l; };
  auto expole = [](Cx l) { return std::exp(l) / l; };
  auto expole2 = [](Cx l) { return std::exp(2.0 * l) / l; };
  auto idk = [](Cx l) { return l; };

  CHECK(pairing_regularized(pole, expole, [](Cx) { return Cx{}; }).value == Cx{});

  // f = 1/l, g = e^l / l, x = l:  integrand -e^{-t}/t, value = Euler gamma
  PairingResult r = pairing_regularized(pole, expole, idk);
  CHECK(std::abs(r.value - Cx(kEulerGamma, 0.0)) < 1e-8);
  CHECK(r.err < 1e-8);

  // g = e^{2l}/l pushes the decay scale: value = Euler gamma + ln 2
  PairingResult r2 = pairing_regularized(pole, expole2, idk);
  CHECK(std::abs(r2.value - Cx(kEulerGamma + std::log(2.0), 0.0)) < 1e-8);

  // resolution shifts (contour radius and circle order) leave the value
  Keyhole coarse;
  coarse.eps = 2e-3;
  coarse.circle_panels = 24;
  PairingResult r3 = pairing_regularized(pole, expole, idk, coarse);
  CHECK(std::abs(r3.value - r.value) < 1e-8);

  // a non-decaying integrand is refused
  CHECK_THROWS_AS(pairing_regularized(pole, pole, idk), std::runtime_error);
}

namespace {

// Textbook expansion: contract the leftmost operator with every partner to
// its right, carrying a minus sign for each odd operator an odd one hops.
Cx wick_by_hops(std::vector<int> idx, const std::vector<int>& par,
                const std::vector<std::vector<Cx>>& M) {
  if (idx.empty()) return Cx(1.0, 0.0);
  int a = idx[0];
  Cx total{};
  for (size_t k = 1; k < idx.size(); ++k) {
    int b = idx[k];
    if (par[a] != par[b]) continue;
    int hops = 0;
    for (size_t m = 1; m < k; ++m) hops += par[idx[m]];
    double sg = (par[a] == 1 && hops % 2 != 0) ? -1.0 : 1.0;
    std::vector<int> rest;
    for (size_t m = 1; m < idx.size(); ++m)
      if (m != k) rest.push_back(idx[m]);
    total += sg * M[a][b] * wick_by_hops(rest, par, M);
  }
  return total;
}

} // namespace

TEST_CASE("graded pairing sum agrees with the hop-sign expansion") {
  std::mt19937 rng(7121);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 2 * (1 + int(rng() % 3)); // word lengths 2, 4, 6
    std::vector<int> par(n);
    for (int& p : par) p = int(rng() % 2);
    std::vector<std::vector<Cx>> M(n, std::vector<Cx>(n));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        M[i][j] = par[i] == par[j] ? Cx(U(rng), U(rng)) : Cx{};
    Cx got = graded_wick_sum(par, [&](int i, int j) { return M[i][j]; });
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    Cx want = wick_by_hops(idx, par, M);
    CAPTURE(trial);
    CHECK(std::abs(got - want) < 1e-12);
  }
}

TEST_CASE("two-particle pairing is the Wick sum of pairwise pairings") {
  auto xk = [](const std::string& a, const std::string& b) {
    double c = a == b ? 1.0 : 0.5;
    return [c](Cx l) { return c * l * std::exp(-l); };
  };
  SmearHandle f1{[](Cx l) { return 1.0 / l; }, "s", 0};
  SmearHandle f2{[](Cx l) { return std::exp(l) / l; }, "t", 0};
  SmearHandle g1{[](Cx l) { return 1.0 / (2.0 * l); }, "s", 0};
  SmearHandle g2{[](Cx l) { return std::exp(l / 2.0) / l; }, "t", 0};

  FockVector ket{{f1, f2}, false};
  FockVector bra{{g1, g2}, true};

  auto P = [&](const SmearHandle& b, const SmearHandle& k) {
    return pairing_regularized(b.fn, k.fn, xk(b.family, k.family)).value;
  };
  Cx direct = P(g1, f1) * P(g2, f2) + P(g1, f2) * P(g2, f1);
  Cx got = fock_pairing(bra, ket, xk);
  CHECK(std::abs(got - direct) < 1e-10 * (1.0 + std::abs(direct)));

  // even constituents: the construction order of the ket list is irrelevant
  FockVector ket_swapped{{f2, f1}, false};
  Cx got2 = fock_pairing(bra, ket_swapped, xk);
  CHECK(std::abs(got2 - got) < 1e-10 * (1.0 + std::abs(got)));

  // mismatched particle number pairs to zero
  CHECK(fock_pairing(bra, FockVector{{f1}, false}, xk) == Cx{});
}

TEST_CASE("discrete mode brackets are antisymmetric under index negation") {
  const RealizationSpec* rz = builtin::uq_osp22().realization("gamma_q");
  REQUIRE(rz != nullptr);

  ModeTable table;
  for (auto& m : rz->modes) table.families.push_back({m, true, nullptr});
  std::map<std::string, RatFunc> qvar{{"q", RatFunc::var("q")}};
  for (auto& mb : rz->mbrackets) {
    GeomBracket g;
    for (auto& [alpha, ratio] : mb.geom)
      g.push_back({alpha, sym_to_ratfunc(ratio, qvar)});
    table.brackets.emplace_back(mb.m1, mb.m2, g);
  }

  for (auto& [f1, f2, g] : table.brackets) {
    (void)g;
    for (long n = 1; n <= 12; ++n) {
      INFO(f1, ",", f2, " n=", n);
      RatFunc pos = table.bracket_value(f1, f2, n);
      RatFunc neg = table.bracket_value(f2, f1, -n);
      CHECK(pos == RatFunc(Rat(0)) - neg);
    }
  }

  // spot values: (1/n) * sum of alpha r^n
  RatFunc q = RatFunc::var("q");
  RatFunc one(Rat(1));
  CHECK(table.bracket_value("a", "a", 1) == RatFunc(Rat(1)) / q - one);
  CHECK(table.bracket_value("a", "b", 1) == q + one / q);
  CHECK(table.bracket_value("b", "b", 2) == (one / (q * q) - one) * RatFunc(Rat(1, 2)));
  CHECK_THROWS_AS(table.bracket_value("a", "missing", 1), std::domain_error);
}
