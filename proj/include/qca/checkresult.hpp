#pragma once

#include <complex>
#include <map>
#include <string>

namespace qca {

enum class Status { pass, fail, not_checked, order_limited };
enum class Mode { exact, numeric };

const char* status_str(Status s);
const char* mode_str(Mode m);

// One verified (or deliberately skipped) identity.  `anchor` holds the
// formula text the check certifies, so reports are readable on their own.
struct CheckResult {
  std::string id;
  Status status = Status::not_checked;
  Mode mode = Mode::numeric;
  double max_error = 0.0;
  bool exact_zero = false; // exact-mode pass: error is identically zero
  double tolerance = 0.0;
  int samples = 0;
  std::map<std::string, std::complex<double>> constants;
  long long runtime_ms = 0;
  std::string anchor;
  std::string note; // reason for not-checked / counterexample description

  bool ok() const { return status != Status::fail; }
};

} // namespace qca
