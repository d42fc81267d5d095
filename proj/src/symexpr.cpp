#include "qca/symexpr.hpp"

#include <cmath>
#include <sstream>

namespace qca {

namespace {
SymPtr make(SymKind k) {
  auto e = std::make_shared<SymExpr>();
  e->kind = k;
  return e;
}
} // namespace

SymPtr SymExpr::rc(const Rat& v) {
  auto e = std::make_shared<SymExpr>();
  e->kind = SymKind::rat_const;
  e->value = v;
  return e;
}
SymPtr SymExpr::imag() { return make(SymKind::imag_unit); }
SymPtr SymExpr::pi() { return make(SymKind::pi_const); }
SymPtr SymExpr::euler() { return make(SymKind::euler_gamma); }
SymPtr SymExpr::param(const std::string& n) {
  auto e = std::make_shared<SymExpr>();
  e->kind = SymKind::param;
  e->name = n;
  return e;
}
SymPtr SymExpr::var(const std::string& n) {
  auto e = std::make_shared<SymExpr>();
  e->kind = SymKind::var;
  e->name = n;
  return e;
}
SymPtr SymExpr::add(SymPtr x, SymPtr y) {
  auto e = make(SymKind::add);
  const_cast<SymExpr&>(*e).a = std::move(x);
  const_cast<SymExpr&>(*e).b = std::move(y);
  return e;
}
SymPtr SymExpr::sub(SymPtr x, SymPtr y) {
  auto e = make(SymKind::sub);
  const_cast<SymExpr&>(*e).a = std::move(x);
  const_cast<SymExpr&>(*e).b = std::move(y);
  return e;
}
SymPtr SymExpr::mul(SymPtr x, SymPtr y) {
  auto e = make(SymKind::mul);
  const_cast<SymExpr&>(*e).a = std::move(x);
  const_cast<SymExpr&>(*e).b = std::move(y);
  return e;
}
SymPtr SymExpr::div(SymPtr x, SymPtr y) {
  auto e = make(SymKind::div);
  const_cast<SymExpr&>(*e).a = std::move(x);
  const_cast<SymExpr&>(*e).b = std::move(y);
  return e;
}
SymPtr SymExpr::pow(SymPtr x, const Rat& ex) {
  auto e = make(SymKind::pow);
  auto& m = const_cast<SymExpr&>(*e);
  m.a = std::move(x);
  m.value = ex;
  return e;
}
SymPtr SymExpr::neg(SymPtr x) { return sub(rc(Rat(0)), std::move(x)); }
SymPtr SymExpr::fn(SymKind k, SymPtr x) {
  auto e = make(k);
  const_cast<SymExpr&>(*e).a = std::move(x);
  return e;
}

static const double kEulerGamma = 0.5772156649015328606;

Cx sym_eval(const SymPtr& e, const SymEnv& env) {
  switch (e->kind) {
    case SymKind::rat_const: return Cx(rat_double(e->value), 0.0);
    case SymKind::imag_unit: return Cx(0.0, 1.0);
    case SymKind::pi_const: return Cx(M_PI, 0.0);
    case SymKind::euler_gamma: return Cx(kEulerGamma, 0.0);
    case SymKind::param:
    case SymKind::var: {
      auto it = env.find(e->name);
      if (it == env.end()) throw EvalError("unbound name: " + e->name);
      return it->second;
    }
    case SymKind::add: return sym_eval(e->a, env) + sym_eval(e->b, env);
    case SymKind::sub: return sym_eval(e->a, env) - sym_eval(e->b, env);
    case SymKind::mul: return sym_eval(e->a, env) * sym_eval(e->b, env);
    case SymKind::div: {
      Cx d = sym_eval(e->b, env);
      if (std::abs(d) < 1e-300)
        throw EvalError("singular evaluation (division) at: " + sym_str(e->b));
      return sym_eval(e->a, env) / d;
    }
    case SymKind::pow: {
      Cx base = sym_eval(e->a, env);
      if (is_integer(e->value)) {
        long long n = e->value.template convert_to<long long>();
        if (base == Cx(0.0, 0.0) && n < 0)
          throw EvalError("singular evaluation (power) at: " + sym_str(e));
        Cx acc(1.0, 0.0), b = base;
        long long k = n < 0 ? -n : n;
        while (k) {
          if (k & 1) acc *= b;
          b *= b;
          k >>= 1;
        }
        return n < 0 ? 1.0 / acc : acc;
      }
      if (std::abs(base) < 1e-300)
        throw EvalError("singular evaluation (power) at: " + sym_str(e));
      return std::pow(base, Cx(rat_double(e->value), 0.0));
    }
    case SymKind::exp_fn: return std::exp(sym_eval(e->a, env));
    case SymKind::ln_fn: {
      Cx v = sym_eval(e->a, env);
      if (std::abs(v) < 1e-300)
        throw EvalError("singular evaluation (ln) at: " + sym_str(e));
      return std::log(v);
    }
    case SymKind::cosh_fn: return std::cosh(sym_eval(e->a, env));
    case SymKind::sinh_fn: return std::sinh(sym_eval(e->a, env));
    case SymKind::csch_fn: {
      Cx s = std::sinh(sym_eval(e->a, env));
      if (std::abs(s) < 1e-12)
        throw EvalError("singular evaluation (csch) at: " + sym_str(e));
      return 1.0 / s;
    }
  }
  throw EvalError("corrupt expression");
}

SymPtr sym_subst(const SymPtr& e, const std::string& name, const SymPtr& repl) {
  switch (e->kind) {
    case SymKind::param:
    case SymKind::var:
      return e->name == name ? repl : e;
    case SymKind::rat_const:
    case SymKind::imag_unit:
    case SymKind::pi_const:
    case SymKind::euler_gamma:
      return e;
    default: {
      auto c = std::make_shared<SymExpr>(*e);
      if (c->a) c->a = sym_subst(c->a, name, repl);
      if (c->b) c->b = sym_subst(c->b, name, repl);
      return c;
    }
  }
}

SymPtr sym_shift(const SymPtr& e, const std::string& var, const SymPtr& delta) {
  return sym_subst(e, var, SymExpr::add(SymExpr::var(var), delta));
}

bool sym_equal(const SymPtr& x, const SymPtr& y) {
  if (x.get() == y.get()) return true;
  if (x->kind != y->kind || x->value != y->value || x->name != y->name)
    return false;
  if (!!x->a != !!y->a || !!x->b != !!y->b) return false;
  if (x->a && !sym_equal(x->a, y->a)) return false;
  if (x->b && !sym_equal(x->b, y->b)) return false;
  return true;
}

namespace {

int prec(SymKind k) {
  switch (k) {
    case SymKind::add:
    case SymKind::sub: return 1;
    case SymKind::mul:
    case SymKind::div: return 2;
    case SymKind::pow: return 3;
    default: return 4;
  }
}

void print(std::ostream& os, const SymPtr& e, int parent_prec, bool right_side) {
  int p = prec(e->kind);
  bool need = p < parent_prec || (p == parent_prec && right_side);
  switch (e->kind) {
    case SymKind::rat_const: {
      bool wrap = (e->value < 0 || !is_integer(e->value)) && parent_prec >= 2;
      if (wrap) os << "(";
      os << rat_str(e->value);
      if (wrap) os << ")";
      return;
    }
    case SymKind::imag_unit: os << "i"; return;
    case SymKind::pi_const: os << "pi"; return;
    case SymKind::euler_gamma: os << "euler_gamma"; return;
    case SymKind::param:
    case SymKind::var: os << e->name; return;
    case SymKind::add:
    case SymKind::sub:
    case SymKind::mul:
    case SymKind::div: {
      if (e->kind == SymKind::mul && e->a->kind == SymKind::rat_const &&
          e->a->value == Rat(-1)) {
        // unary minus; the operand is printed as a right factor so that a
        // product operand keeps its grouping parentheses on reparse
        if (need) os << "(";
        os << "-";
        print(os, e->b, 2, true);
        if (need) os << ")";
        return;
      }
      if (need) os << "(";
      print(os, e->a, p, false);
      switch (e->kind) {
        case SymKind::add: os << " + "; break;
        case SymKind::sub: os << " - "; break;
        case SymKind::mul: os << "*"; break;
        default: os << "/"; break;
      }
      print(os, e->b, p, true);
      if (need) os << ")";
      return;
    }
    case SymKind::pow:
      print(os, e->a, 4, false);
      os << "^(" << rat_str(e->value) << ")";
      return;
    case SymKind::exp_fn:
    case SymKind::ln_fn:
    case SymKind::cosh_fn:
    case SymKind::sinh_fn:
    case SymKind::csch_fn: {
      const char* n = e->kind == SymKind::exp_fn    ? "exp"
                      : e->kind == SymKind::ln_fn   ? "ln"
                      : e->kind == SymKind::cosh_fn ? "cosh"
                      : e->kind == SymKind::sinh_fn ? "sinh"
                                                    : "csch";
      os << n << "(";
      print(os, e->a, 0, false);
      os << ")";
      return;
    }
  }
}

} // namespace

std::string sym_str(const SymPtr& e) {
  std::ostringstream os;
  print(os, e, 0, false);
  return os.str();
}

namespace {

// Exact k-th root of a monomial rational function; throws on failure.
RatFunc monomial_root(const RatFunc& r, long long k) {
  auto root_poly = [k](const Poly& p) {
    if (p.terms().size() != 1)
      throw std::domain_error("sym_to_ratfunc: non-monomial base under fractional power");
    const auto& [mono, coeff] = *p.terms().begin();
    Mono m;
    for (auto& [v, e] : mono) {
      if (e % k != 0)
        throw std::domain_error("sym_to_ratfunc: fractional power has no exact root");
      m[v] = static_cast<int>(e / k);
    }
    if (coeff != 1)
      throw std::domain_error("sym_to_ratfunc: fractional root of non-unit coefficient");
    Poly out;
    out.add_term(m, Rat(1));
    return out;
  };
  return RatFunc(root_poly(r.num()), root_poly(r.den()));
}

} // namespace

RatFunc sym_to_ratfunc(const SymPtr& e, const std::map<std::string, RatFunc>& table) {
  switch (e->kind) {
    case SymKind::rat_const: return RatFunc(e->value);
    case SymKind::param:
    case SymKind::var: {
      auto it = table.find(e->name);
      if (it == table.end())
        throw std::domain_error("sym_to_ratfunc: no rational image for " + e->name);
      return it->second;
    }
    case SymKind::add: return sym_to_ratfunc(e->a, table) + sym_to_ratfunc(e->b, table);
    case SymKind::sub: return sym_to_ratfunc(e->a, table) - sym_to_ratfunc(e->b, table);
    case SymKind::mul: return sym_to_ratfunc(e->a, table) * sym_to_ratfunc(e->b, table);
    case SymKind::div: return sym_to_ratfunc(e->a, table) / sym_to_ratfunc(e->b, table);
    case SymKind::pow: {
      RatFunc base = sym_to_ratfunc(e->a, table);
      Rat ex = e->value;
      long long den = rat_den(ex).template convert_to<long long>();
      long long num = rat_num(ex).template convert_to<long long>();
      RatFunc root = den == 1 ? base : monomial_root(base, den);
      return root.pow(static_cast<int>(num));
    }
    default:
      throw std::domain_error("sym_to_ratfunc: transcendental head in " + sym_str(e));
  }
}

SymEnv ParamEnv::resolve() const {
  SymEnv env = direct_;
  for (const auto& [name, expr] : rules_) env[name] = sym_eval(expr, env);
  return env;
}

} // namespace qca
