#pragma once

#include "qca/symexpr.hpp"

#include <map>
#include <string>

namespace qca {

// Exact scalar in a zero-mode exponent: a rational linear form over
//   { 1,  i*pi/2,  ln(sym) ... }.
// This is the coefficient domain of P/Q exponents in the vertex operators
// (e.g. -(ln z + i pi/2) or plain 2).
struct ZmValue {
  Rat one;                        // rational part
  Rat ipi2;                       // multiples of i*pi/2
  std::map<std::string, Rat> logs; // sym -> coefficient of ln(sym)

  bool is_zero() const { return one == 0 && ipi2 == 0 && logs.empty(); }
  bool is_rational() const { return ipi2 == 0 && logs.empty(); }

  ZmValue& operator+=(const ZmValue& o);
  ZmValue operator+(const ZmValue& o) const;
  ZmValue operator-() const;
  ZmValue scaled(const Rat& k) const;
  bool operator==(const ZmValue& o) const;

  // Product, defined when either side is a plain rational.
  ZmValue mul(const ZmValue& o) const; // throws std::domain_error otherwise

  // ln(sym) -> sum_t e_t ln(t) for sym := prod t^{e_t} (monomial rebase).
  void subst_log(const std::string& sym, const std::map<std::string, Rat>& powers);

  Cx eval(const SymEnv& env) const; // principal logs
  std::string str() const;
};

// Structural conversion of a coefficient AST; throws std::domain_error on
// anything outside the linear form (ln of a non-atom, stray i, pi alone, ...).
ZmValue zm_value_from_expr(const SymPtr& e);

// Linear form over zero-mode symbols: sum_s coeff[s] * s.
struct ZmLinearForm {
  std::map<std::string, ZmValue> coeff;

  ZmValue at(const std::string& s) const; // zero when absent
  ZmLinearForm& operator+=(const ZmLinearForm& o);
  void scale(const Rat& k);
  void subst_log(const std::string& sym, const std::map<std::string, Rat>& powers);
  bool operator==(const ZmLinearForm& o) const;
};

// Exact multiplicative scalar exp(ZmValue):
//   e^{r} * i^{m} * prod sym^{p_sym}.
struct ZmFactor {
  Rat rexp;   // leftover plain exponent, value contributes e^{rexp}
  Rat ipow;   // power of i (from i*pi/2 multiples)
  std::map<std::string, Rat> powers;

  static ZmFactor exp_of(const ZmValue& v);
  ZmFactor operator*(const ZmFactor& o) const;
  bool is_one() const { return rexp == 0 && ipow == 0 && powers.empty(); }
  Cx eval(const SymEnv& env) const; // principal branch powers
  std::string str() const;
};

// Central commutator [A, B] for exponents A, B over pairs (P, Q) with
// [P, Q] = 1 and distinct pairs commuting:
//   [A, B] = sum_pairs A[P]*B[Q] - A[Q]*B[P].
ZmValue zero_mode_commutator(const ZmLinearForm& A, const ZmLinearForm& B,
                             const std::vector<std::pair<std::string, std::string>>& pairs);

// Reordering scalar: e^A e^B = scalar * e^B e^A, scalar = exp([A, B]).
ZmFactor zero_mode_reorder(const ZmLinearForm& A, const ZmLinearForm& B,
                           const std::vector<std::pair<std::string, std::string>>& pairs);

// Normal-ordering contraction scalar when merging e^A e^B into :e^{A+B}:
// with Q's ordered left of P's: exp(sum_pairs A[P]*B[Q]).
ZmFactor zero_mode_contract(const ZmLinearForm& A, const ZmLinearForm& B,
                            const std::vector<std::pair<std::string, std::string>>& pairs);

} // namespace qca
