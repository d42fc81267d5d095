#pragma once

#include "qca/checkresult.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qca {

// One reproducible verification run.  A fixed config pins every random draw:
// each check derives its own stream from `seed` and its registry position,
// so results do not depend on scheduling or on which subset was selected.
struct SuiteConfig {
  std::vector<std::string> suites; // empty selects nothing; see suite_names()
  std::uint64_t seed = 20817;
  int order = 24;   // series truncation for OPE printing; checks that need a
                    // series order read it from here
  int samples = 0;  // > 0 overrides every check's default sample count
  double tol = 0.0; // > 0 overrides every check's default tolerance
  int trunc_k = 200; // Gamma-product truncation for the continuum background
  int threads = 0;   // worker pool size; 0 = hardware concurrency
};

// The default suites, in report order.  "hopf-experimental" (the antipode
// anti-homomorphism probes) is selectable by name but deliberately not part
// of this set.
const std::vector<std::string>& suite_names();

// Every registered check id, in registry order, for the given suites.
std::vector<std::string> check_ids(const std::vector<std::string>& suites);

// Run all checks of cfg.suites on a worker pool; results come back in
// registry order.  Throws std::invalid_argument for an unknown suite name
// before any check runs.
std::vector<CheckResult> run_suite(const SuiteConfig& cfg);

// Run a single check by id (any suite, including experimental ones).
// Throws std::out_of_range for an unknown id.
CheckResult run_check(const std::string& id, const SuiteConfig& cfg);

} // namespace qca
