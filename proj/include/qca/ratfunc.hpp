#pragma once

#include "qca/poly.hpp"

namespace qca {

// Rational function num/den in canonical form: gcd(num, den) trivial, den
// primitive with integer coefficients and positive leading coefficient, so
// structural equality is mathematical equality.
class RatFunc {
public:
  RatFunc() : num_(Rat(0)), den_(Rat(1)) {}
  RatFunc(const Rat& c) : num_(c), den_(Rat(1)) {}
  RatFunc(Poly num, Poly den);
  explicit RatFunc(const Poly& p) : num_(p), den_(Rat(1)) {}
  static RatFunc var(const std::string& name, int exp = 1);

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  Rat constant() const { return num_.constant() / den_.constant(); }

  RatFunc operator-() const;
  RatFunc operator+(const RatFunc& o) const;
  RatFunc operator-(const RatFunc& o) const;
  RatFunc operator*(const RatFunc& o) const;
  RatFunc operator/(const RatFunc& o) const;
  RatFunc pow(int e) const; // any sign; negative needs nonzero

  bool operator==(const RatFunc& o) const {
    return num_ == o.num_ && den_ == o.den_;
  }

  Cx eval(const std::map<int, Cx>& env) const;

  // Substitutes a rational function for one variable.
  RatFunc subst(int vid, const RatFunc& value) const;

  std::string str() const;

private:
  void normalize();
  Poly num_, den_;
};

} // namespace qca
