#include "qca/builtin.hpp"

#include "qca/builtin_specs.hpp"

namespace qca::builtin {

const char* def1_text() { return def1_qalg; }
const char* uq_osp22_text() { return uq_osp22_qalg; }

const AlgebraSpec& def1() {
  static const AlgebraSpec s = parse_qalg(def1_qalg);
  return s;
}

const AlgebraSpec& uq_osp22() {
  static const AlgebraSpec s = parse_qalg(uq_osp22_qalg);
  return s;
}

} // namespace qca::builtin
