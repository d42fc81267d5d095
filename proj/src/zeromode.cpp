#include "qca/zeromode.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace qca {

ZmValue& ZmValue::operator+=(const ZmValue& o) {
  one += o.one;
  ipi2 += o.ipi2;
  for (auto& [s, c] : o.logs) {
    Rat& t = logs[s];
    t += c;
    if (t == 0) logs.erase(s);
  }
  return *this;
}

ZmValue ZmValue::operator+(const ZmValue& o) const {
  ZmValue r = *this;
  r += o;
  return r;
}

ZmValue ZmValue::operator-() const { return scaled(Rat(-1)); }

ZmValue ZmValue::scaled(const Rat& k) const {
  if (k == 0) return {};
  ZmValue r;
  r.one = one * k;
  r.ipi2 = ipi2 * k;
  for (auto& [s, c] : logs) r.logs[s] = c * k;
  return r;
}

bool ZmValue::operator==(const ZmValue& o) const {
  return one == o.one && ipi2 == o.ipi2 && logs == o.logs;
}

ZmValue ZmValue::mul(const ZmValue& o) const {
  if (o.is_rational()) return scaled(o.one);
  if (is_rational()) return o.scaled(one);
  throw std::domain_error("zero-mode product " + str() + " * " + o.str() +
                          " leaves the linear coefficient domain");
}

void ZmValue::subst_log(const std::string& sym,
                        const std::map<std::string, Rat>& powers) {
  auto it = logs.find(sym);
  if (it == logs.end()) return;
  Rat beta = it->second;
  logs.erase(it);
  for (auto& [t, e] : powers) {
    Rat& v = logs[t];
    v += beta * e;
    if (v == 0) logs.erase(t);
  }
}

Cx ZmValue::eval(const SymEnv& env) const {
  Cx r(rat_double(one), 0.0);
  r += Cx(0.0, M_PI / 2.0) * rat_double(ipi2);
  for (auto& [s, c] : logs) r += rat_double(c) * std::log(env.at(s));
  return r;
}

std::string ZmValue::str() const {
  std::ostringstream os;
  bool first = true;
  auto sep = [&] {
    if (!first) os << " + ";
    first = false;
  };
  if (one != 0) {
    sep();
    os << rat_str(one);
  }
  if (ipi2 != 0) {
    sep();
    os << "(" << rat_str(ipi2) << ")*i*pi/2";
  }
  for (auto& [s, c] : logs) {
    sep();
    os << "(" << rat_str(c) << ")*ln(" << s << ")";
  }
  if (first) os << "0";
  return os.str();
}

namespace {

// One multiplicative term while folding an AST: c * i^ip * pi^pp * prod ln(s)^e.
struct FTerm {
  Rat c{1};
  int ip = 0, pp = 0;
  std::map<std::string, int> lns;
};

using FSum = std::vector<FTerm>;

FSum fold(const SymPtr& e) {
  switch (e->kind) {
    case SymKind::rat_const:
      if (e->value == 0) return {};
      return {FTerm{e->value, 0, 0, {}}};
    case SymKind::imag_unit: return {FTerm{Rat(1), 1, 0, {}}};
    case SymKind::pi_const: return {FTerm{Rat(1), 0, 1, {}}};
    case SymKind::ln_fn: {
      const SymPtr& a = e->a;
      if (a->kind != SymKind::var && a->kind != SymKind::param)
        throw std::domain_error("ln of a non-atomic argument in a zero-mode coefficient");
      return {FTerm{Rat(1), 0, 0, {{a->name, 1}}}};
    }
    case SymKind::add:
    case SymKind::sub: {
      FSum r = fold(e->a);
      for (FTerm t : fold(e->b)) {
        if (e->kind == SymKind::sub) t.c = -t.c;
        r.push_back(std::move(t));
      }
      return r;
    }
    case SymKind::mul: {
      FSum r;
      for (const FTerm& x : fold(e->a))
        for (const FTerm& y : fold(e->b)) {
          FTerm t{x.c * y.c, x.ip + y.ip, x.pp + y.pp, x.lns};
          for (auto& [s, n] : y.lns) t.lns[s] += n;
          r.push_back(std::move(t));
        }
      return r;
    }
    case SymKind::div: {
      FSum den = fold(e->b);
      if (den.size() != 1 || den[0].ip || den[0].pp || !den[0].lns.empty())
        throw std::domain_error("non-rational divisor in a zero-mode coefficient");
      FSum r = fold(e->a);
      for (FTerm& t : r) t.c /= den[0].c;
      return r;
    }
    case SymKind::pow: {
      if (!is_integer(e->value))
        throw std::domain_error("fractional power in a zero-mode coefficient");
      FSum base = fold(e->a);
      if (base.size() != 1 || base[0].ip || base[0].pp || !base[0].lns.empty())
        throw std::domain_error("power of a non-rational base in a zero-mode coefficient");
      long n = static_cast<long>(rat_num(e->value).convert_to<long long>());
      return {FTerm{rat_pow(base[0].c, n), 0, 0, {}}};
    }
    default:
      throw std::domain_error("unsupported head in a zero-mode coefficient");
  }
}

} // namespace

ZmValue zm_value_from_expr(const SymPtr& e) {
  ZmValue v;
  for (const FTerm& t : fold(e)) {
    if (t.ip == 0 && t.pp == 0 && t.lns.empty()) {
      v.one += t.c;
    } else if (t.ip == 1 && t.pp == 1 && t.lns.empty()) {
      v.ipi2 += t.c * 2; // c*i*pi = (2c)*(i*pi/2)
    } else if (t.ip == 0 && t.pp == 0 && t.lns.size() == 1 &&
               t.lns.begin()->second == 1) {
      Rat& lc = v.logs[t.lns.begin()->first];
      lc += t.c;
      if (lc == 0) v.logs.erase(t.lns.begin()->first);
    } else {
      throw std::domain_error("zero-mode coefficient term outside { 1, i*pi, ln }");
    }
  }
  return v;
}

ZmValue ZmLinearForm::at(const std::string& s) const {
  auto it = coeff.find(s);
  return it == coeff.end() ? ZmValue{} : it->second;
}

ZmLinearForm& ZmLinearForm::operator+=(const ZmLinearForm& o) {
  for (auto& [s, v] : o.coeff) {
    ZmValue& t = coeff[s];
    t += v;
    if (t.is_zero()) coeff.erase(s);
  }
  return *this;
}

void ZmLinearForm::scale(const Rat& k) {
  if (k == 0) {
    coeff.clear();
    return;
  }
  for (auto& [s, v] : coeff) v = v.scaled(k);
}

void ZmLinearForm::subst_log(const std::string& sym,
                             const std::map<std::string, Rat>& powers) {
  for (auto& [s, v] : coeff) v.subst_log(sym, powers);
}

bool ZmLinearForm::operator==(const ZmLinearForm& o) const {
  return coeff == o.coeff;
}

ZmFactor ZmFactor::exp_of(const ZmValue& v) {
  ZmFactor f;
  f.rexp = v.one;
  f.ipow = v.ipi2;
  f.powers = v.logs;
  return f;
}

ZmFactor ZmFactor::operator*(const ZmFactor& o) const {
  ZmFactor f = *this;
  f.rexp += o.rexp;
  f.ipow += o.ipow;
  for (auto& [s, p] : o.powers) {
    Rat& t = f.powers[s];
    t += p;
    if (t == 0) f.powers.erase(s);
  }
  return f;
}

Cx ZmFactor::eval(const SymEnv& env) const {
  Cx r = std::exp(Cx(rat_double(rexp), 0.0));
  r *= std::exp(Cx(0.0, M_PI / 2.0) * rat_double(ipow));
  for (auto& [s, p] : powers)
    r *= std::exp(rat_double(p) * std::log(env.at(s)));
  return r;
}

std::string ZmFactor::str() const {
  std::ostringstream os;
  bool lead = true;
  if (rexp != 0) {
    os << "e^(" << rat_str(rexp) << ")";
    lead = false;
  }
  if (ipow != 0) {
    if (!lead) os << "*";
    os << "i^(" << rat_str(ipow) << ")";
    lead = false;
  }
  for (auto& [s, p] : powers) {
    if (!lead) os << "*";
    os << s << "^(" << rat_str(p) << ")";
    lead = false;
  }
  if (lead) os << "1";
  return os.str();
}

ZmValue zero_mode_commutator(
    const ZmLinearForm& A, const ZmLinearForm& B,
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  ZmValue r;
  for (auto& [P, Q] : pairs) {
    r += A.at(P).mul(B.at(Q));
    r += (-A.at(Q).mul(B.at(P)));
  }
  return r;
}

ZmFactor zero_mode_reorder(
    const ZmLinearForm& A, const ZmLinearForm& B,
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  return ZmFactor::exp_of(zero_mode_commutator(A, B, pairs));
}

ZmFactor zero_mode_contract(
    const ZmLinearForm& A, const ZmLinearForm& B,
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  ZmValue r;
  for (auto& [P, Q] : pairs) r += A.at(P).mul(B.at(Q));
  return ZmFactor::exp_of(r);
}

} // namespace qca
