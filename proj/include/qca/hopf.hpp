#pragma once

#include "qca/algdsl.hpp"
#include "qca/checkresult.hpp"
#include "qca/tensorword.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace qca {

// Discrete family of deformed current algebras connected by level shifts.
// The member at level m carries central charge cs[m] and deformation
// eta^{(m)}, tied together by the recursion
//
//     1/eta^{(m+1)} - 1/eta^{(m)} = hbar * cs[m],
//
// with eta^{(anchor)} equal to the free parameter eta itself.  eta_at
// returns the closed form as an expression tree; it is defined one step past
// the charge window (that last member only ever appears as the second
// deformation of the window's top level).
struct FamilyIndexing {
  std::vector<int> cs;
  int anchor = 1;

  int c_at(int level) const;       // throws outside [0, cs.size())
  SymPtr eta_at(int level) const;  // valid on [0, cs.size()]
  void validate() const;           // checks the recursion on random samples
};

// Coalgebra structure of the family, acting on tensor words.
//
// Both comultiplication directions are one table written with per-slot
// central references (<S> abbreviates i*hbar*c_S, the central charge owned
// by slot S; L and R are the child slots):
//
//   D H+(u) = H+(u + <R>/4) (x) H+(u - <L>/4)
//   D H-(u) = H-(u - <R>/4) (x) H-(u + <L>/4)
//   D E(u)  = E(u) (x) 1  +  H-(u + <L>/4) (x) E(u + <L>/2)
//   D F(u)  = 1 (x) F(u)  +  F(u + <R>/2) (x) H+(u + <R>/4)
//   D c     = c (x) 1  +  1 (x) c
//
// Direction '+' refines a level-n slot into levels (n, n+1), direction '-'
// into (n-1, n).  The level-shift morphisms tau+/- are read off the counit
// axiom, and because the counit kills a central reference along with the
// central charge itself, no rapidity displacement survives: tau is a plain
// level reindexing.  Constructing the family with naive_shift_maps = true
// instead bakes in the displaced variant obtained by misreading the
// references as plain numbers; the counit and shift-inverse checks then
// fail at nonzero charge, which is what the knob is for.
class HopfFamily {
 public:
  HopfFamily(const AlgebraSpec* alg, FamilyIndexing idx, bool naive_shift_maps = false);

  const FamilyIndexing& indexing() const { return idx_; }

  // One-slot words over the family member at `level`.
  TensorWord current_word(const std::string& name, const std::string& var, int level) const;
  TensorWord central_word(int level) const;
  // Left and right sides of the k-th declared exchange relation (0-based),
  // as one-slot words.  The structure function keeps eta, etap and the
  // central charge symbolic: both deformations depend on the charge, so a
  // coalgebra map substitutes the image member's values for all three.
  std::pair<TensorWord, TensorWord> relation_words(int k, int level) const;
  const RelationSpec& exchange_rel(int k) const;

  // Coalgebra maps.  `n` is the level of the slot being refined (checked).
  TensorWord apply_coproduct(char dir, int n, const TensorWord& w, int slot_pos = 0) const;
  TensorWord apply_counit(const TensorWord& w, int slot_pos) const;
  TensorWord apply_antipode(char dir, const TensorWord& w, int slot_pos) const;
  TensorWord apply_shift(char dir, const TensorWord& w, int slot_pos) const;
  // Multiplies the slots at (slot_pos, slot_pos + 1); levels must agree.
  TensorWord multiply_slots(const TensorWord& w, int slot_pos) const;

  // Canonical form: resolves central references, turns central symbols into
  // numeric factors, orders each slot E < F < H+ < H- (then by variable and
  // shift) while accumulating exchange factors, cancels adjacent inverse
  // pairs, merges equal terms, and drops literal zeros.  Idempotent.
  // Throws when a slot holds both E and F: their exchange away from
  // coincident rapidities is distributional, not a structure function.
  TensorWord normal_order(const TensorWord& w) const;

  // Verifies one coalgebra axiom over the charge window `charges`
  // (charges[m] is the central charge at level m; the refined slot sits at
  // level 1).  Axioms: counit+, counit-, antipode+, antipode-,
  // shift-inverse, cocommute, twisted-coassoc+, twisted-coassoc-,
  // delta-hom+, delta-hom-, bracket-compat, antipode-antihom+,
  // antipode-antihom-.  Both sides are normal-ordered and compared term by
  // term, coefficients by randomized evaluation unless structurally equal.
  CheckResult verify_family_axiom(const std::string& axiom, const std::vector<int>& charges,
                                  int samples = 50, double tol = 1e-8,
                                  std::uint64_t seed = 20817) const;

  // Default axiom set, and the experimental extras kept out of it.
  static const std::vector<std::string>& axiom_names();
  static const std::vector<std::string>& experimental_axiom_names();

 private:
  const AlgebraSpec* alg_;
  FamilyIndexing idx_;
  bool naive_;

  int parity_of(const std::string& name) const;
  SymPtr swap_factor(const TSym& x, const TSym& y, int level) const;
};

}  // namespace qca
