#pragma once

#include "qca/algdsl.hpp"
#include "qca/checkresult.hpp"
#include "qca/fock.hpp"
#include "qca/zeromode.hpp"

#include <map>
#include <string>
#include <vector>

namespace qca {

// Monomial in named symbols with rational exponents (arguments like z*h^2).
using PowerMono = std::map<std::string, Rat>;

// Normal-ordered exponential of free-boson modes.  Every constituent
// oscillator tower ("leg") carries its own argument monomial; the zero-mode
// exponent is one combined linear form.  The operator's spectral variable is
// always the symbol "z" internally; instances at other arguments are made by
// monomial substitution.
struct VertexOp {
  std::string label;
  struct Leg {
    std::string mode;
    Rat weight;
    PowerMono arg;
  };
  std::vector<Leg> legs;
  ZmLinearForm zm;

  VertexOp at(const PowerMono& m) const; // substitute z -> m
  bool same_operator(const VertexOp& o) const; // legs (canonicalized) and zm equal
};

// Normal-ordered product: legs concatenated, zero-mode exponents added.
VertexOp vertex_product(const VertexOp& a, const VertexOp& b);

// Closed-form two-point contraction <V1(z) V2(w)> : scalar prefactor times
// prod_j (1 - rho_j x)^{-beta_j} in x = w/z (|x| < 1 side).
struct Contraction {
  ZmFactor zm; // i^m e^r z^a w^b h^c
  struct Binom {
    RatFunc rho; // function of h
    int beta;
  };
  std::vector<Binom> binoms;

  RatFunc factor(const std::string& xvar = "x") const;
  // simple-pole positions x0 = 1/rho (beta == 1) and flags for higher order
  std::vector<RatFunc> simple_poles() const;
  bool has_higher_pole() const;
};

// Loaded realization: every current as a VertexOp over one mode table, with
// the deformation parameter rebased to h (q = h^2) so that all argument
// monomials have integer exponents.
struct RepTable {
  std::vector<std::pair<std::string, std::string>> zm_pairs;
  ModeTable modes;
  std::map<std::string, VertexOp> ops;
  std::map<std::string, RatFunc> param_rf; // q -> h^2, plus realization lets

  static RepTable load(const AlgebraSpec& alg, const std::string& realization);

  const VertexOp& op(const std::string& current) const;
  VertexOp op_at(const std::string& current, const PowerMono& m) const;
  // argument expression (monomial in spectral variables and rebased
  // parameters) -> power monomial; var_map renames spectral variables
  PowerMono arg_monomial(const SymPtr& e,
                         const std::map<std::string, std::string>& var_map) const;
};

// <first(z) second(w)>, exact.  Throws std::domain_error when a closed form
// does not exist (non-integer effective exponent).
Contraction contract(const RepTable& rep, const VertexOp& first,
                     const VertexOp& second);

// Multiplicative delta support of the inner-minus-outer expansion difference:
// S = Laurent part + sum_k c_k / (1 - x/x_k)  =>  pairs (x_k, c_k).
// Requires the listed poles to be simple.
std::vector<std::pair<RatFunc, RatFunc>> delta_decompose(
    const RatFunc& S, const std::vector<RatFunc>& poles,
    const std::string& xvar = "x");

// Exchange relation X(z) Y(w) = f(z, w) Y(w) X(z) as an exact identity of
// rational functions: contraction ratio against the declared factor.
CheckResult verify_exchange(const RepTable& rep, const RelationSpec& rel);

// Bracket relation with multiplicative deltas: pole positions, fused
// operators, residue coefficients, one shared normalization constant, and a
// finite q -> 1 limit of the residue data.
CheckResult verify_delta_bracket(const RepTable& rep, const RelationSpec& rel);

} // namespace qca
