#pragma once

#include "qca/algdsl.hpp"

namespace qca::builtin {

// Embedded .qalg sources.
const char* def1_text();
const char* uq_osp22_text();

// Parsed presentations, loaded once (load-time checks included).
const AlgebraSpec& def1();
const AlgebraSpec& uq_osp22();

} // namespace qca::builtin
