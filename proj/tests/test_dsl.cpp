#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qca/algdsl.hpp"
#include "qca/builtin.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <sstream>

using namespace qca;
using Cx = std::complex<double>;

TEST_CASE("rapidity presentation loads with the expected structure") {
  const AlgebraSpec& s = builtin::def1();
  CHECK(s.name == "def1");
  REQUIRE(s.params.size() == 3);
  CHECK(s.params[0].name == "hbar");
  CHECK(s.params[1].name == "eta");
  CHECK(s.params[2].name == "etap");
  CHECK(s.params[2].derived != nullptr);
  CHECK(s.centrals == std::vector<std::string>{"c"});
  REQUIRE(s.currents.size() == 4);
  CHECK(s.current("E")->parity == 1);
  CHECK(s.current("F")->parity == 1);
  CHECK(s.current("H+")->parity == 0);
  CHECK(s.current("H-")->parity == 0);
  CHECK(s.current("E")->kind == VarKind::rapidity);
  CHECK(s.relations.size() == 10);
  CHECK(s.family_count() == 7);

  const RelationSpec* br = nullptr;
  for (auto& r : s.relations)
    if (r.kind == RelationSpec::delta_bracket) br = &r;
  REQUIRE(br != nullptr);
  CHECK(br->anticommutator); // E and F are both odd
  REQUIRE(br->deltas.size() == 2);
  CHECK(br->deltas[0].additive);
  CHECK(br->deltas[0].sign == +1);
  CHECK(br->deltas[1].sign == -1);
  CHECK(br->deltas[0].target == "H+");
  CHECK(br->deltas[1].target == "H-");

  // the derived parameter obeys 1/etap - 1/eta = hbar*c
  SymEnv env{{"hbar", Cx(0.31, 0.0)}, {"eta", Cx(0.8, 0.1)}, {"c", Cx(1.0, 0.0)}};
  ParamEnv pe = s.param_env();
  for (auto& [k, v] : env) pe.set(k, v);
  SymEnv full = pe.resolve();
  Cx lhs = 1.0 / full.at("etap") - 1.0 / full.at("eta");
  Cx rhs = full.at("hbar") * full.at("c");
  CHECK(std::abs(lhs - rhs) < 1e-14);
}

TEST_CASE("multiplicative presentation loads with realization") {
  const AlgebraSpec& s = builtin::uq_osp22();
  CHECK(s.name == "uq_osp22");
  CHECK(s.params.size() == 1);
  CHECK(s.centrals.size() == 1);
  REQUIRE(s.currents.size() == 4);
  CHECK(s.current("X+")->parity == 1);
  CHECK(s.current("psi+")->parity == 0);
  CHECK(s.current("X+")->kind == VarKind::multiplicative);
  CHECK(s.relations.size() == 10);
  CHECK(s.family_count() == 7);

  const RealizationSpec* rz = s.realization("gamma_q");
  REQUIRE(rz != nullptr);
  CHECK(rz->lets.size() == 1);
  CHECK(rz->modes == std::vector<std::string>{"a", "b"});
  REQUIRE(rz->mbrackets.size() == 3);
  CHECK(rz->mbrackets[0].m1 == "a");
  CHECK(rz->mbrackets[0].geom.size() == 2);
  CHECK(rz->mbrackets[0].geom[0].first == Rat(-1));
  CHECK(rz->zeromode_pairs.size() == 2);
  REQUIRE(rz->fields.size() == 2);
  REQUIRE(rz->ops.size() == 4);
  CHECK(rz->ops[0].kind == RealOp::vexp);
  CHECK(rz->ops[2].kind == RealOp::fuse);
  CHECK(rz->ops[2].ref1 == "X+");
  CHECK(rz->ops[2].ref2 == "X-");

  // exponent of the first field: one oscillator tower on mode a plus the
  // linear zero-mode form ln(z)*Pa + 2*Qa
  const RealField& phi = rz->fields[0];
  REQUIRE(phi.osc.size() == 1);
  CHECK(phi.osc[0].first == "a");
  SymEnv ze{{"z", Cx(0.7, 0.4)}};
  CHECK(sym_eval(phi.osc[0].second, ze) == Cx(1.0, 0.0));
  REQUIRE(phi.zm.size() == 2);
  CHECK(phi.zm[0].first == "Pa");
  CHECK(std::abs(sym_eval(phi.zm[0].second, ze) - std::log(Cx(0.7, 0.4))) < 1e-15);
  CHECK(phi.zm[1].first == "Qa");
  CHECK(sym_eval(phi.zm[1].second, ze) == Cx(2.0, 0.0));

  // second field carries -(Pa+Pb)(ln z + i pi/2) - 2(Qa - Qb)
  const RealField& phib = rz->fields[1];
  REQUIRE(phib.zm.size() == 4);
  Cx lnz = std::log(Cx(0.7, 0.4));
  Cx half_ipi = Cx(0.0, M_PI / 2.0);
  std::map<std::string, Cx> want{{"Pa", -(lnz + half_ipi)},
                                 {"Pb", -(lnz + half_ipi)},
                                 {"Qa", Cx(-2.0, 0.0)},
                                 {"Qb", Cx(2.0, 0.0)}};
  for (auto& [sym, coeff] : phib.zm) {
    INFO(sym);
    CHECK(std::abs(sym_eval(coeff, ze) - want.at(sym)) < 1e-15);
  }
}

TEST_CASE("round-trip through the canonical printer is stable") {
  for (const AlgebraSpec* s : {&builtin::def1(), &builtin::uq_osp22()}) {
    std::string text = print_qalg(*s);
    AlgebraSpec back = parse_qalg(text);
    CHECK(back == *s);
    CHECK(print_qalg(back) == text);
  }
}

TEST_CASE("exchange factors derive the reverse direction") {
  const AlgebraSpec& s = builtin::def1();
  std::string lv, rv;
  auto direct = s.exchange_factor("H+", "E", &lv, &rv);
  REQUIRE(direct.has_value());
  CHECK(lv == "u");
  CHECK(rv == "v");
  auto reversed = s.exchange_factor("E", "H+", &lv, &rv);
  REQUIRE(reversed.has_value());
  // the derived factor reuses the declared relation's slots, swapped
  CHECK(lv == "v");
  CHECK(rv == "u");

  // at any one point the two directions multiply to 1
  SymEnv env{{"hbar", Cx(0.3, 0.0)}, {"eta", Cx(0.9, 0.0)}, {"c", Cx(1.0, 0.0)},
             {"u", Cx(0.4, 0.2)},    {"v", Cx(-0.1, 0.5)}};
  ParamEnv pe = s.param_env();
  for (auto& [k, v] : env) pe.set(k, v);
  SymEnv full = pe.resolve();
  Cx f1 = sym_eval(*direct, full);
  Cx f2 = sym_eval(*reversed, full);
  CHECK(std::abs(f1 * f2 - Cx(1.0, 0.0)) < 1e-12);

  CHECK_FALSE(s.exchange_factor("E", "F", nullptr, nullptr).has_value()); // bracket, not exchange
}

TEST_CASE("parse errors carry locations and reasons") {
  CHECK_THROWS_AS(parse_qalg("algebra x {"), ParseError);
  CHECK_THROWS_AS(parse_qalg("algebra x { param p }"), ParseError);
  CHECK_THROWS_WITH_AS(
      parse_qalg("algebra x { current A(u) odd; A(u) B(v) = A(v) A(u); }"),
      doctest::Contains("unknown current 'B'"), ParseError);
  CHECK_THROWS_WITH_AS(
      parse_qalg("algebra x { current A(u) even; A(u) A(v) = exp(u - v + w) A(v) A(u); }"),
      doctest::Contains("unknown symbol 'w'"), ParseError);
  CHECK_THROWS_WITH_AS(
      parse_qalg("algebra x { current A(u) even; current A(v) odd; }"),
      doctest::Contains("duplicate current"), ParseError);
  // wrong closing order on the right-hand side
  CHECK_THROWS_AS(
      parse_qalg("algebra x { current A(u) odd; current B(u) odd;"
                 " A(u) B(v) = - exp(u - v) A(u) B(v); }"),
      ParseError);

  // an empty algebra is still an algebra
  AlgebraSpec empty = parse_qalg("algebra nothing { }");
  CHECK(empty.name == "nothing");
  CHECK(empty.relations.empty());
}

TEST_CASE("load-time consistency checks reject bad presentations") {
  // odd-odd pair without the leading minus
  CHECK_THROWS_WITH_AS(
      parse_qalg("algebra x { current A(u) odd;"
                 " A(u) A(v) = exp(u - v) * exp(v - u) A(v) A(u); }"),
      doctest::Contains("parity"), ParseError);
  // even self-pair with a spurious minus
  CHECK_THROWS_WITH_AS(
      parse_qalg("algebra x { current A(u) even;"
                 " A(u) A(v) = - exp(u - v) * exp(v - u) A(v) A(u); }"),
      doctest::Contains("parity"), ParseError);
  // self-pair factor that is not reciprocal: f(u,v)*f(v,u) = exp(2(u+v)) != 1
  CHECK_THROWS_WITH_AS(
      parse_qalg("algebra x { current A(u) even;"
                 " A(u) A(v) = exp(u + v) A(v) A(u); }"),
      doctest::Contains("reciprocity"), ParseError);
  // paired declarations: A(a)B(b) picks up f(a,b), B(b)A(a) picks up g(b,a),
  // and consistency needs f(a,b)*g(b,a) = 1; g of the flipped sign fails it
  CHECK_THROWS_WITH_AS(
      parse_qalg("algebra x { param p; current A(u) even; current B(u) even;"
                 " A(u) B(v) = exp(p*(u - v)) B(v) A(u);"
                 " B(u) A(v) = exp(p*(v - u)) A(v) B(u); }"),
      doctest::Contains("reciprocity"), ParseError);
  // ...and the matching-form pairing is accepted
  AlgebraSpec ok = parse_qalg(
      "algebra x { param p; current A(u) even; current B(u) even;"
      " A(u) B(v) = exp(p*(u - v)) B(v) A(u);"
      " B(u) A(v) = exp(p*(u - v)) A(v) B(u); }");
  CHECK(ok.relations.size() == 2);
}

namespace {

// Random presentations whose exchange factors are reciprocal by
// construction: f(u,v) = sign * g(u,v)/g(v,u).
std::string fuzz_algebra(std::mt19937& rng) {
  auto pick = [&rng](int n) { return static_cast<int>(rng() % n); };
  std::ostringstream os;
  os << "algebra fz" << pick(1000) << " {\n";
  int nparams = 1 + pick(2);
  for (int i = 0; i < nparams; ++i) os << "  param p" << i << ";\n";
  if (pick(3) == 0) os << "  param d = 1/(p0 + 3);\n";

  int ncur = 2 + pick(2);
  std::vector<int> parity(ncur);
  for (int i = 0; i < ncur; ++i) {
    parity[i] = pick(2);
    os << "  current C" << i << "(u) " << (parity[i] ? "odd" : "even") << ";\n";
  }

  auto head = [&](int which, const std::string& arg) {
    switch (which % 3) {
      case 0: return "cosh(" + arg + ")";
      case 1: return "exp(" + arg + ")";
      default: return "sinh(" + arg + " + 5)"; // offset keeps samples off zeros
    }
  };

  for (int i = 0; i < ncur; ++i) {
    for (int j = i; j < ncur; ++j) {
      if (pick(3) == 0) continue; // leave some pairs undeclared
      // factor g(u,v)/g(v,u) with one shared g, reciprocal by construction
      int h = pick(3), a = 1 + pick(3), b = 1 + pick(3), ps = pick(nparams);
      auto lin = [&](const char* x, const char* y) {
        std::ostringstream g;
        g << a << "*" << x << " - " << b << "*" << y << " + p" << ps;
        return g.str();
      };
      bool minus = parity[i] == 1 && parity[j] == 1;
      os << "  C" << i << "(u) C" << j << "(v) = " << (minus ? "- " : "")
         << head(h, lin("u", "v")) << " / " << head(h, lin("v", "u"))
         << " C" << j << "(v) C" << i << "(u);\n";
    }
  }
  if (pick(2) == 0) {
    os << "  bracket C0(u) C1(v) = delta_add(u - v) * (2*pi/p0) C0(u)"
       << " - delta_add(u + v) * (2*pi/p0) C1(v);\n";
  }
  os << "}\n";
  return os.str();
}

} // namespace

TEST_CASE("fuzzed presentations survive a print/parse round-trip") {
  std::mt19937 rng(20240817);
  int done = 0;
  while (done < 20) {
    std::string text = fuzz_algebra(rng);
    CAPTURE(text);
    AlgebraSpec s1 = parse_qalg(text);
    std::string canon = print_qalg(s1);
    CAPTURE(canon);
    AlgebraSpec s2 = parse_qalg(canon);
    CHECK(s2 == s1);
    CHECK(print_qalg(s2) == canon);
    ++done;
  }
}
