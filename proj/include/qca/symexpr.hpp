#pragma once

#include "qca/ratfunc.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>

namespace qca {

// Analytic expression tree: rational constants, i, pi, the Euler constant,
// named parameters/variables, field operations, rational powers, and the
// transcendental heads exp/ln/cosh/sinh/csch.
enum class SymKind {
  rat_const,
  imag_unit,
  pi_const,
  euler_gamma,
  param,
  var,
  add,
  sub,
  mul,
  div,
  pow, // rational exponent carried in `value`
  exp_fn,
  ln_fn,
  cosh_fn,
  sinh_fn,
  csch_fn
};

class SymExpr;
using SymPtr = std::shared_ptr<const SymExpr>;

class SymExpr {
public:
  SymKind kind;
  Rat value;        // rat_const payload, or pow exponent
  std::string name; // param / var
  SymPtr a, b;

  static SymPtr rc(const Rat& v);
  static SymPtr imag();
  static SymPtr pi();
  static SymPtr euler();
  static SymPtr param(const std::string& n);
  static SymPtr var(const std::string& n);
  static SymPtr add(SymPtr x, SymPtr y);
  static SymPtr sub(SymPtr x, SymPtr y);
  static SymPtr mul(SymPtr x, SymPtr y);
  static SymPtr div(SymPtr x, SymPtr y);
  static SymPtr pow(SymPtr x, const Rat& e);
  static SymPtr neg(SymPtr x);
  static SymPtr fn(SymKind k, SymPtr x);
};

// Evaluation environment: every name (parameter or variable) maps to a value.
using SymEnv = std::map<std::string, Cx>;

struct EvalError : std::runtime_error {
  explicit EvalError(const std::string& m) : std::runtime_error(m) {}
};

// Principal branches for ln and non-integer powers; csch/ln/div throw
// EvalError naming the offending subexpression when singular.
Cx sym_eval(const SymPtr& e, const SymEnv& env);

// Capture-free substitution of a name (parameter or variable).
SymPtr sym_subst(const SymPtr& e, const std::string& name, const SymPtr& repl);

// var -> var + delta.
SymPtr sym_shift(const SymPtr& e, const std::string& var, const SymPtr& delta);

bool sym_equal(const SymPtr& x, const SymPtr& y);

std::string sym_str(const SymPtr& e);

// Exact conversion to a rational function.  `table` maps names to RatFunc
// images (e.g. q -> h^2).  Rational powers demand exact monomial roots;
// transcendental heads and unmapped names are errors.
RatFunc sym_to_ratfunc(const SymPtr& e, const std::map<std::string, RatFunc>& table);

// Parameter environment with derived rules (e.g. etap = 1/(1/eta + hbar*c));
// rules are applied in declaration order on top of the direct bindings.
class ParamEnv {
public:
  void set(const std::string& name, Cx v) { direct_[name] = v; }
  void add_rule(const std::string& name, SymPtr expr) {
    rules_.push_back({name, std::move(expr)});
  }
  // Direct bindings plus derived values.
  SymEnv resolve() const;

private:
  SymEnv direct_;
  std::vector<std::pair<std::string, SymPtr>> rules_;
};

} // namespace qca
