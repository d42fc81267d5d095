#pragma once

#include "qca/symexpr.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace qca {

// Words in an iterated graded tensor product of current algebras.
//
// Each tensor slot carries a family level; each symbol remembers the slot it
// occupies by id (not by position, so slots can be split and merged without
// renumbering everything).  A rapidity argument is stored as
//
//     var + (base + sum_s ref[s] * c_s) * i*hbar,
//
// with the central multiples kept per slot id.  Keeping the central content
// of an argument referential is what lets the coalgebra maps act locally: a
// coproduct splits a reference into the two child slots, a counit erases it,
// an antipode negates it while retargeting the slot.  Only at the very end
// are references folded into plain shifts using the concrete charges.

struct RapArg {
  Rat base;                // multiple of i*hbar
  std::map<int, Rat> ref;  // slot id -> multiple of i*hbar*c_slot
};

struct TSlot {
  int id = 0;
  int level = 0;
};

struct TSym {
  std::string name;       // E, F, H+, H-, c
  bool inverted = false;  // only H+/H- invert
  int parity = 0;
  int slot = 0;           // slot id
  std::string var;        // base rapidity variable; empty for the central
  RapArg arg;
};

struct TTerm {
  SymPtr coeff;
  std::vector<TSym> syms;  // grouped by slot position, left to right
};

struct TensorWord {
  std::vector<TSlot> slots;
  std::vector<TTerm> terms;
  int next_id = 0;  // id generator for freshly created slots

  int slot_pos(int id) const;  // -1 when the id is not present
  int level_of(int id) const;  // throws std::out_of_range on a bad id
};

// Coefficient arithmetic that folds rational literals and elides units, so
// coefficients that stay trivial remain literally `1` (or vanish to a
// literal `0`) instead of growing a tree of no-op products.
SymPtr coeff_mul(const SymPtr& x, const SymPtr& y);
SymPtr coeff_add(const SymPtr& x, const SymPtr& y);
bool coeff_is_zero(const SymPtr& x);

bool expr_uses_name(const SymPtr& e, const std::string& name);

// Simultaneous substitution of named leaves (parameters and variables) in a
// single pass, so one replacement tree is never rewritten by a later rule.
SymPtr subst_names(const SymPtr& e, const std::map<std::string, SymPtr>& table);

// Product of two words over the same slot layout.  Regrouping the merged
// symbol list slot by slot moves each symbol of `b` past the symbols of `a`
// that sit in later slots; every odd-odd crossing contributes one sign.
TensorWord tensor_mul(const TensorWord& a, const TensorWord& b);

// Folds every central reference into the base multiple, using the slot
// levels and the supplied level -> charge assignment.
void resolve_refs(TensorWord& w, const std::function<int(int level)>& charge);

// Canonical text key of a term: slot positions plus symbol data, coefficient
// excluded.  Two resolved words match structurally iff their key sets agree.
std::string term_key(const TensorWord& w, const TTerm& t);

std::string word_str(const TensorWord& w);

}  // namespace qca
