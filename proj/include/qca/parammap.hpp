#pragma once

#include "qca/algdsl.hpp"
#include "qca/checkresult.hpp"

namespace qca {

// A homomorphism candidate between two algebra presentations: current
// renaming with optional scalar prefactors, images of the destination
// parameters/centrals as expressions over source names, and the image of
// the spectral variable (written in the placeholder "u"; prefactors are
// written in the destination variable "z" plus shared parameters).
struct ParamMap {
  std::string name;
  const AlgebraSpec* src = nullptr;
  const AlgebraSpec* dst = nullptr;
  std::map<std::string, std::string> currents;
  std::map<std::string, SymPtr> dst_params;
  SymPtr var_image;
  std::map<std::string, Cx> src_fixed; // pinned source centrals
  std::map<std::string, SymPtr> prefactors;
};

// The three standard maps between the built-in presentations:
//  - raising_branch: e^{2 pi eta u} -> z, e^{2 pi i eta hbar} -> q on the
//    raising-current subalgebra;
//  - lowering_branch: the same with the second deformation parameter;
//  - central_collapse: the full current family at central charge 0 onto
//    the multiplicative presentation at unit central element, carrying
//    the stated prefactors.
ParamMap raising_branch();
ParamMap lowering_branch();
ParamMap central_collapse();

// Checks, on random draws, that every source exchange relation between
// mapped currents transports onto the declared destination structure
// function, and (when the map covers a bracket pair) that the two delta
// terms transport with one shared scalar -- the additive-vs-multiplicative
// delta convention factor, reported as constants["delta_scale"].
CheckResult verify_param_map(const ParamMap& map, int samples, double tol,
                             std::uint64_t seed);

} // namespace qca
