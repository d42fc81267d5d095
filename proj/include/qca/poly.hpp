#pragma once

#include "qca/rat.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace qca {

// Interned formal-variable names. Ids are stable for the process lifetime.
namespace vars {
int id(const std::string& name);
const std::string& name(int id);
} // namespace vars

// Monomial: variable id -> positive exponent.
using Mono = std::map<int, int>;

// Multivariate polynomial over Rat, canonical (no zero coefficients).
class Poly {
public:
  Poly() = default;
  explicit Poly(const Rat& c);
  static Poly var(const std::string& name, int exp = 1);
  static Poly var(int vid, int exp = 1);

  bool is_zero() const { return t_.empty(); }
  bool is_constant() const;
  // Requires is_constant().
  Rat constant() const;

  const std::map<Mono, Rat>& terms() const { return t_; }

  Poly operator-() const;
  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly pow(int e) const; // e >= 0

  bool operator==(const Poly& o) const { return t_ == o.t_; }

  int degree(int vid) const;      // -1 for the zero polynomial
  std::vector<int> vars_used() const;

  Cx eval(const std::map<int, Cx>& env) const;

  // gcd of coefficients (positive), 0 for the zero polynomial.
  Rat content() const;
  // this / c exactly (c != 0).
  Poly scaled(const Rat& c) const;

  // Leading coefficient in the map's monomial order.
  Rat lead_coeff() const;

  // Exact division; throws std::domain_error if not divisible.
  Poly divided_by(const Poly& d) const;

  std::string str() const;

  void add_term(const Mono& m, const Rat& c); // builder; keeps canonical form

private:
  std::map<Mono, Rat> t_;
};

Poly gcd(const Poly& a, const Poly& b);

} // namespace qca
