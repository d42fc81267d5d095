#pragma once

#include "qca/geom.hpp"
#include "qca/keyhole.hpp"
#include "qca/symexpr.hpp"

#include <functional>
#include <string>
#include <vector>

namespace qca {

// One Heisenberg mode family.  Discrete families carry integer modes n != 0
// with bracket data in geometric-sum form: [a_n, a_-n] = (1/n) sum alpha r^n
// at n > 0, and n < 0 follows by antisymmetry.  Continuum families carry a
// label lambda != 0 and a kernel K with
// [alpha(l), alpha(m)] = K(l) delta(l+m), K odd.
struct ModeFamily {
  std::string name;
  bool discrete = true;
  SymPtr kernel; // continuum only
};

// Unordered bracket table between families of one realization.
struct ModeTable {
  std::vector<ModeFamily> families;
  // key = (family, family) in either order
  std::vector<std::tuple<std::string, std::string, GeomBracket>> brackets;

  const GeomBracket* find(const std::string& f1, const std::string& f2) const;
  // [a_{f1,n}, a_{f2,-n}] as a rational function of the stored ratio
  // variables; antisymmetric under n -> -n by convention.
  RatFunc bracket_value(const std::string& f1, const std::string& f2, long n) const;
};

// Smeared creation entry of a Fock vector.
struct SmearHandle {
  std::function<Cx(Cx)> fn; // smearing function, simple pole at 0 allowed
  std::string family;
  int parity = 0; // 0 even, 1 odd
};

// Ordered creation list applied to the vacuum; `dual` marks the conjugate
// space (pairs from the left).
struct FockVector {
  std::vector<SmearHandle> parts;
  bool dual = false;
};

// Graded Wick sum over complete matchings of word positions, given the
// pairwise contraction values P(i, j) (upper triangle used) and parities.
// The sign of a matching is the product over crossing chord pairs of
// (-1)^{parity * parity}.
Cx graded_wick_sum(const std::vector<int>& parities,
                   const std::function<Cx(int, int)>& pair_value);

// Pairing <bra | ket>: only bra-ket contractions survive; each one is the
// regularized contour pairing of the two smearing functions against the
// kernel x(bra-family, ket-family).  Sizes must agree (otherwise 0).
Cx fock_pairing(const FockVector& bra, const FockVector& ket,
                const std::function<std::function<Cx(Cx)>(const std::string&,
                                                          const std::string&)>& xkernel,
                const Keyhole& kh = {});

} // namespace qca
