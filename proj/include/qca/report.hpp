#pragma once

#include "qca/checkresult.hpp"
#include "qca/suite.hpp"

#include <string>
#include <vector>

namespace qca {

// JSON document: {version, config, results: [...]}.  Exact-mode passes
// serialize max_error as the string "0 (exact)"; numeric results keep the
// number.  With `stable` set, runtime_ms is zeroed so a fixed config yields
// a byte-identical document.
std::string report_json(const std::vector<CheckResult>& results,
                        const SuiteConfig& cfg, bool stable = false);

// One table per suite (grouped by the id prefix before '/'), with
// not-checked reasons listed under each table.
std::string report_markdown(const std::vector<CheckResult>& results,
                            const SuiteConfig& cfg);

} // namespace qca
