#include "qca/poly.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

namespace qca {

Rat rat_pow(const Rat& base, long long e) {
  if (e == 0) return Rat(1);
  if (e < 0) {
    if (base == 0) throw std::domain_error("rat_pow: negative power of zero");
    return Rat(1) / rat_pow(base, -e);
  }
  Rat acc(1), b = base;
  long long n = e;
  while (n > 0) {
    if (n & 1) acc *= b;
    b *= b;
    n >>= 1;
  }
  return acc;
}

std::string rat_str(const Rat& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

Rat rat_parse(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(s));
    Int n(s.substr(0, slash)), d(s.substr(slash + 1));
    if (d == 0) throw std::invalid_argument("zero denominator");
    return Rat(n, d);
  } catch (const std::exception&) {
    throw std::invalid_argument("rat_parse: bad rational '" + s + "'");
  }
}

namespace vars {
namespace {
struct Registry {
  std::vector<std::string> names;
  std::map<std::string, int> index;
  std::mutex mtx;
};
Registry& reg() {
  static Registry r;
  return r;
}
} // namespace

int id(const std::string& name) {
  auto& r = reg();
  std::lock_guard<std::mutex> lk(r.mtx);
  auto it = r.index.find(name);
  if (it != r.index.end()) return it->second;
  int v = static_cast<int>(r.names.size());
  r.names.push_back(name);
  r.index.emplace(name, v);
  return v;
}

const std::string& name(int id) {
  auto& r = reg();
  std::lock_guard<std::mutex> lk(r.mtx);
  return r.names.at(static_cast<size_t>(id));
}
} // namespace vars

Poly::Poly(const Rat& c) {
  if (c != 0) t_[Mono{}] = c;
}

Poly Poly::var(const std::string& name, int exp) { return var(vars::id(name), exp); }

Poly Poly::var(int vid, int exp) {
  Poly p;
  Mono m;
  if (exp != 0) m[vid] = exp;
  p.t_[m] = Rat(1);
  return p;
}

bool Poly::is_constant() const {
  return t_.empty() || (t_.size() == 1 && t_.begin()->first.empty());
}

Rat Poly::constant() const {
  if (t_.empty()) return Rat(0);
  if (!is_constant()) throw std::domain_error("Poly::constant on non-constant");
  return t_.begin()->second;
}

void Poly::add_term(const Mono& m, const Rat& c) {
  if (c == 0) return;
  auto [it, fresh] = t_.emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) t_.erase(it);
  }
}

Poly Poly::operator-() const {
  Poly r;
  for (auto& [m, c] : t_) r.t_[m] = -c;
  return r;
}

Poly Poly::operator+(const Poly& o) const {
  Poly r = *this;
  for (auto& [m, c] : o.t_) r.add_term(m, c);
  return r;
}

Poly Poly::operator-(const Poly& o) const {
  Poly r = *this;
  for (auto& [m, c] : o.t_) r.add_term(m, -c);
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  Poly r;
  for (auto& [ma, ca] : t_)
    for (auto& [mb, cb] : o.t_) {
      Mono m = ma;
      for (auto& [v, e] : mb) {
        auto [it, fresh] = m.emplace(v, e);
        if (!fresh) it->second += e;
      }
      r.add_term(m, ca * cb);
    }
  return r;
}

Poly Poly::pow(int e) const {
  if (e < 0) throw std::domain_error("Poly::pow negative");
  Poly acc(Rat(1)), b = *this;
  while (e > 0) {
    if (e & 1) acc = acc * b;
    b = b * b;
    e >>= 1;
  }
  return acc;
}

int Poly::degree(int vid) const {
  if (t_.empty()) return -1;
  int d = 0;
  for (auto& [m, c] : t_) {
    (void)c;
    auto it = m.find(vid);
    if (it != m.end()) d = std::max(d, it->second);
  }
  return d;
}

std::vector<int> Poly::vars_used() const {
  std::vector<int> out;
  for (auto& [m, c] : t_) {
    (void)c;
    for (auto& [v, e] : m) {
      (void)e;
      if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Cx Poly::eval(const std::map<int, Cx>& env) const {
  Cx acc(0.0, 0.0);
  for (auto& [m, c] : t_) {
    Cx term(rat_double(c), 0.0);
    for (auto& [v, e] : m) {
      auto it = env.find(v);
      if (it == env.end())
        throw std::domain_error("Poly::eval: unbound variable " + vars::name(v));
      Cx base = it->second, p(1.0, 0.0);
      for (int k = 0; k < e; ++k) p *= base;
      term *= p;
    }
    acc += term;
  }
  return acc;
}

Rat Poly::content() const {
  if (t_.empty()) return Rat(0);
  Int gn(0), ld(1);
  for (auto& [m, c] : t_) {
    (void)m;
    gn = boost::multiprecision::gcd(gn, boost::multiprecision::abs(numerator(c)));
    ld = ld / boost::multiprecision::gcd(ld, denominator(c)) * denominator(c);
  }
  return Rat(gn, ld);
}

Poly Poly::scaled(const Rat& c) const {
  if (c == 0) throw std::domain_error("Poly::scaled by zero");
  Poly r;
  for (auto& [m, k] : t_) r.t_[m] = k / c;
  return r;
}

Rat Poly::lead_coeff() const {
  if (t_.empty()) return Rat(0);
  return t_.rbegin()->second;
}

namespace {

using Uni = std::map<int, Poly>; // exponent of the main variable -> coefficient

Uni univar(const Poly& p, int v) {
  Uni out;
  for (auto& [m, c] : p.terms()) {
    Mono rest = m;
    int e = 0;
    auto it = rest.find(v);
    if (it != rest.end()) {
      e = it->second;
      rest.erase(v);
    }
    out[e].add_term(rest, c);
  }
  for (auto it = out.begin(); it != out.end();)
    it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

Poly from_univar(const Uni& u, int v) {
  Poly out;
  for (auto& [e, c] : u) out = out + c * Poly::var(v, e);
  return out;
}

int udeg(const Uni& u) { return u.empty() ? -1 : u.rbegin()->first; }

Uni umul_xk(const Uni& u, int k) {
  Uni out;
  for (auto& [e, c] : u) out[e + k] = c;
  return out;
}

Uni umul_coeff(const Uni& u, const Poly& c) {
  Uni out;
  for (auto& [e, p] : u) {
    Poly q = p * c;
    if (!q.is_zero()) out[e] = q;
  }
  return out;
}

Uni usub(const Uni& a, const Uni& b) {
  Uni out = a;
  for (auto& [e, c] : b) {
    auto it = out.find(e);
    if (it == out.end()) {
      out[e] = -c;
    } else {
      Poly d = it->second - c;
      if (d.is_zero())
        out.erase(it);
      else
        it->second = d;
    }
  }
  return out;
}

// Pseudo-remainder of a by b in the main variable (b nonzero).
Uni uprem(Uni a, const Uni& b) {
  int db = udeg(b);
  const Poly& lb = b.rbegin()->second;
  while (udeg(a) >= db && !a.empty()) {
    int da = udeg(a);
    Poly la = a.rbegin()->second;
    a = usub(umul_coeff(a, lb), umul_xk(umul_coeff(b, la), da - db));
    // The top term cancels by construction; numerical drift is impossible in
    // exact arithmetic, but guard against a stale zero entry.
    auto it = a.find(da);
    if (it != a.end() && it->second.is_zero()) a.erase(it);
  }
  return a;
}

Poly normalize_primitive(const Poly& p) {
  if (p.is_zero()) return p;
  Rat c = p.content();
  Poly q = p.scaled(c);
  if (q.lead_coeff() < 0) q = -q;
  return q;
}

Poly content_wrt(const Poly& p, int v) {
  Uni u = univar(p, v);
  Poly g;
  for (auto& [e, c] : u) {
    (void)e;
    g = gcd(g, c);
  }
  return g;
}

} // namespace

Poly Poly::divided_by(const Poly& d) const {
  if (d.is_zero()) throw std::domain_error("Poly division by zero");
  if (d.is_constant()) return scaled(d.constant());
  if (is_zero()) return Poly();
  int v = d.vars_used().front();
  Uni A = univar(*this, v), D = univar(d, v);
  int dd = udeg(D);
  const Poly& ld = D.rbegin()->second;
  Uni Q;
  while (!A.empty()) {
    int da = udeg(A);
    if (da < dd) throw std::domain_error("Poly division not exact");
    Poly qc = A.rbegin()->second.divided_by(ld);
    Q[da - dd] = qc;
    A = usub(A, umul_xk(umul_coeff(D, qc), da - dd));
  }
  return from_univar(Q, v);
}

std::string Poly::str() const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // Print highest monomial first for readability.
  for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
    const auto& [m, c] = *it;
    Rat a = c;
    if (first) {
      if (a < 0) {
        os << "-";
        a = -a;
      }
    } else {
      os << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    bool coeff_shown = false;
    if (m.empty() || a != 1) {
      os << rat_str(a);
      coeff_shown = true;
    }
    for (auto& [vv, e] : m) {
      if (coeff_shown) os << "*";
      os << vars::name(vv);
      if (e != 1) os << "^" << e;
      coeff_shown = true;
    }
    first = false;
  }
  return os.str();
}

Poly gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return normalize_primitive(b);
  if (b.is_zero()) return normalize_primitive(a);
  if (a.is_constant() || b.is_constant()) return Poly(Rat(1));

  auto va = a.vars_used(), vb = b.vars_used();
  int v = std::min(va.front(), vb.front());
  Poly ca = content_wrt(a, v), cb = content_wrt(b, v);
  Poly cg = gcd(ca, cb);
  auto primitive_wrt = [v](const Poly& p) {
    return normalize_primitive(p.divided_by(content_wrt(p, v)));
  };
  Uni A = univar(primitive_wrt(a.divided_by(ca)), v);
  Uni B = univar(primitive_wrt(b.divided_by(cb)), v);
  if (udeg(A) < udeg(B)) std::swap(A, B);
  while (true) {
    Uni R = uprem(A, B);
    if (R.empty()) break;
    A = std::move(B);
    B = univar(primitive_wrt(from_univar(R, v)), v);
  }
  Poly g = primitive_wrt(from_univar(B, v)) * cg;
  return normalize_primitive(g);
}

} // namespace qca
