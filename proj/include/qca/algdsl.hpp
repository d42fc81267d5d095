#pragma once

#include "qca/symexpr.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qca {

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(int l, int c, const std::string& m)
      : std::runtime_error("line " + std::to_string(l) + ":" + std::to_string(c) +
                           ": " + m),
        line(l), col(c) {}
};

enum class VarKind { rapidity, multiplicative };

struct CurrentSpec {
  std::string name;
  std::string variable; // declared spectral variable (u -> rapidity, z -> multiplicative)
  int parity = 0;       // 0 even, 1 odd
  VarKind kind = VarKind::multiplicative;
};

struct DeltaTerm {
  bool additive = true; // delta_add vs delta_mult
  SymPtr support;       // argument of the delta
  SymPtr coeff;
  std::string target;   // current name
  SymPtr target_arg;
  int sign = +1;        // joining sign in the two-term bracket
};

struct RelationSpec {
  enum Kind { exchange, delta_bracket } kind = exchange;
  std::string left, right; // X(a) Y(b) = f(a,b) Y(b) X(a)
  std::string lvar, rvar;
  SymPtr factor;           // exchange: signed structure function
  bool anticommutator = false; // bracket symmetry, set from parities
  std::vector<DeltaTerm> deltas;
};

struct ParamSpec {
  std::string name;
  SymPtr derived; // null for free parameters
};

struct RealField {
  std::string name;
  std::string var;
  std::vector<std::pair<std::string, SymPtr>> osc; // (mode family, weight)
  std::vector<std::pair<std::string, SymPtr>> zm;  // (zero-mode symbol, coefficient)
};

struct RealOp {
  std::string name;
  std::string var;
  enum Kind { vexp, fuse } kind = vexp;
  std::string ref1, ref2; // vexp: field name in ref1; fuse: two op names
  SymPtr arg1, arg2;      // arguments at the reference sites
};

struct RealizationSpec {
  std::string name;
  std::vector<std::pair<std::string, SymPtr>> lets;
  std::vector<std::string> modes;
  struct MBracket {
    std::string m1, m2;
    std::vector<std::pair<Rat, SymPtr>> geom; // (alpha, ratio)
  };
  std::vector<MBracket> mbrackets;
  std::vector<std::pair<std::string, std::string>> zeromode_pairs; // (P, Q)
  std::vector<RealField> fields;
  std::vector<RealOp> ops;
};

struct AlgebraSpec {
  std::string name;
  std::vector<ParamSpec> params;
  std::vector<std::string> centrals;
  std::vector<CurrentSpec> currents;
  std::vector<RelationSpec> relations;
  std::vector<RealizationSpec> realizations;

  const CurrentSpec* current(const std::string& n) const;
  const RealizationSpec* realization(const std::string& n) const;
  // Relation as declared, if any.
  const RelationSpec* exchange_decl(const std::string& x, const std::string& y) const;
  // Structure function for the ordered pair (x, y), deriving the reciprocal
  // of a declared reverse relation when needed (graded sign included, since
  // it inverts along with the factor).  lvar/rvar name the evaluation slots.
  std::optional<SymPtr> exchange_factor(const std::string& x, const std::string& y,
                                        std::string* lvar, std::string* rvar) const;
  // Distinct relation families: unordered current-class pairs with the +/-
  // partners of a multiplet collapsed, brackets counted once per pair.
  int family_count() const;
  // Free + derived parameter environment over the given direct bindings.
  ParamEnv param_env() const;
};

bool operator==(const AlgebraSpec& a, const AlgebraSpec& b);

// Parses a .qalg source.  Runs the load-time checks: declared-name
// resolution, reciprocity of paired/self exchange factors (numeric), and
// parity/leading-sign consistency.  Throws ParseError.
AlgebraSpec parse_qalg(const std::string& text);

// Canonical text form; parse_qalg(print_qalg(s)) is structurally equal to s.
std::string print_qalg(const AlgebraSpec& s);

} // namespace qca
