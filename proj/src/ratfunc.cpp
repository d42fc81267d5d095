#include "qca/ratfunc.hpp"

namespace qca {

RatFunc::RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::domain_error("RatFunc: zero denominator");
  normalize();
}

RatFunc RatFunc::var(const std::string& name, int exp) {
  if (exp >= 0) return RatFunc(Poly::var(name, exp));
  return RatFunc(Poly(Rat(1)), Poly::var(name, -exp));
}

void RatFunc::normalize() {
  if (num_.is_zero()) {
    den_ = Poly(Rat(1));
    return;
  }
  Poly g = gcd(num_, den_);
  if (!g.is_constant()) {
    num_ = num_.divided_by(g);
    den_ = den_.divided_by(g);
  }
  // Scale so the denominator is integer-primitive with positive lead.
  Rat c = den_.content();
  if (den_.lead_coeff() < 0) c = -c;
  den_ = den_.scaled(c);
  num_ = num_.scaled(c);
}

RatFunc RatFunc::operator-() const {
  RatFunc r = *this;
  r.num_ = -r.num_;
  return r;
}

RatFunc RatFunc::operator+(const RatFunc& o) const {
  return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RatFunc RatFunc::operator-(const RatFunc& o) const {
  return RatFunc(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

RatFunc RatFunc::operator*(const RatFunc& o) const {
  return RatFunc(num_ * o.num_, den_ * o.den_);
}

RatFunc RatFunc::operator/(const RatFunc& o) const {
  if (o.num_.is_zero()) throw std::domain_error("RatFunc division by zero");
  return RatFunc(num_ * o.den_, den_ * o.num_);
}

RatFunc RatFunc::pow(int e) const {
  if (e >= 0) return RatFunc(num_.pow(e), den_.pow(e));
  if (num_.is_zero()) throw std::domain_error("RatFunc: negative power of zero");
  return RatFunc(den_.pow(-e), num_.pow(-e));
}

Cx RatFunc::eval(const std::map<int, Cx>& env) const {
  Cx d = den_.eval(env);
  if (std::abs(d) < 1e-300) throw std::domain_error("RatFunc::eval at pole");
  return num_.eval(env) / d;
}

RatFunc RatFunc::subst(int vid, const RatFunc& value) const {
  auto apply = [&](const Poly& p) {
    // Horner over the coefficients of vid.
    std::map<int, Poly> u;
    for (auto& [m, c] : p.terms()) {
      Mono rest = m;
      int e = 0;
      auto it = rest.find(vid);
      if (it != rest.end()) {
        e = it->second;
        rest.erase(vid);
      }
      u[e].add_term(rest, c);
    }
    RatFunc acc;
    int prev = -1;
    for (auto it = u.rbegin(); it != u.rend(); ++it) {
      if (prev >= 0) acc = acc * value.pow(prev - it->first);
      acc = acc + RatFunc(it->second);
      prev = it->first;
    }
    if (prev > 0) acc = acc * value.pow(prev);
    return acc;
  };
  RatFunc n = apply(num_), d = apply(den_);
  return n / d;
}

std::string RatFunc::str() const {
  if (den_.is_constant() && den_.constant() == 1) return num_.str();
  std::string n = num_.str(), d = den_.str();
  if (num_.terms().size() > 1) n = "(" + n + ")";
  if (den_.terms().size() > 1) d = "(" + d + ")";
  return n + " / " + d;
}

} // namespace qca
