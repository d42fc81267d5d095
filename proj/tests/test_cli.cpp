#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qca/report.hpp"
#include "qca/suite.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <sys/wait.h>

using namespace qca;
using njson = nlohmann::json;

namespace {

SuiteConfig small_cfg() {
  SuiteConfig cfg;
  cfg.suites = {"param-maps", "dsl-roundtrip"};
  cfg.seed = 4711;
  return cfg;
}

int run_cli(const std::string& args) {
  int rc = std::system(("./qca " + args + " >/dev/null 2>&1").c_str());
  REQUIRE(rc != -1);
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

} // namespace

TEST_CASE("fixed config reproduces the stable report byte for byte") {
  SuiteConfig cfg = small_cfg();
  auto r1 = run_suite(cfg);
  auto r2 = run_suite(cfg);
  CHECK(report_json(r1, cfg, true) == report_json(r2, cfg, true));

  // scheduling must not leak into results
  SuiteConfig serial = cfg;
  serial.threads = 1;
  SuiteConfig wide = cfg;
  wide.threads = 4;
  CHECK(report_json(run_suite(serial), serial, true) ==
        report_json(run_suite(wide), wide, true));

  // a different seed draws different samples somewhere
  SuiteConfig other = cfg;
  other.seed = 4712;
  CHECK(report_json(run_suite(other), cfg, true) != report_json(r1, cfg, true));
}

TEST_CASE("json schema matches the frozen shape") {
  SuiteConfig cfg = small_cfg();
  auto results = run_suite(cfg);
  njson doc = njson::parse(report_json(results, cfg, true));

  CHECK(doc.at("version") == 1);
  auto keys = [](const njson& o) {
    std::vector<std::string> ks;
    for (auto it = o.begin(); it != o.end(); ++it) ks.push_back(it.key());
    std::sort(ks.begin(), ks.end());
    std::string j;
    for (const auto& k : ks) j += k + ",";
    return j;
  };
  CHECK(keys(doc.at("config")) == "order,samples,seed,suites,tol,trunc_k,");
  REQUIRE(!doc.at("results").empty());
  const std::string required =
      "anchor,constants,id,max_error,mode,runtime_ms,samples,status,"
      "tolerance,";
  const std::string with_note =
      "anchor,constants,id,max_error,mode,note,runtime_ms,samples,status,"
      "tolerance,";
  for (const auto& r : doc.at("results")) {
    std::string ks = keys(r);
    CHECK((ks == required || ks == with_note)); // note is the only optional key
    CHECK(r.at("status").is_string());
    CHECK(r.at("runtime_ms") == 0); // stable mode
  }
  CHECK(doc.at("config").at("seed") == 4711);
}

TEST_CASE("exact passes serialize their error as the exact-zero string") {
  SuiteConfig cfg;
  CheckResult r = run_check("dsl-roundtrip/builtin:def1", cfg);
  REQUIRE(r.status == Status::pass);
  CHECK(r.mode == Mode::exact);
  njson doc = njson::parse(report_json({r}, cfg, true));
  CHECK(doc.at("results").at(0).at("max_error") == "0 (exact)");
}

TEST_CASE("deliberately unchecked identities carry reason strings") {
  SuiteConfig cfg;
  for (const char* id : {"continuum-numeric/bracket", "hopf/bracket-compat"}) {
    CheckResult r = run_check(id, cfg);
    INFO(id);
    CHECK(r.status == Status::not_checked);
    CHECK(!r.note.empty());
    njson doc = njson::parse(report_json({r}, cfg, true));
    CHECK(doc.at("results").at(0).at("status") == "not-checked");
    CHECK(doc.at("results").at(0).contains("note"));
  }
}

TEST_CASE("empty suite selection yields an empty, valid report") {
  SuiteConfig cfg;
  cfg.suites = {};
  auto results = run_suite(cfg);
  CHECK(results.empty());
  njson doc = njson::parse(report_json(results, cfg, true));
  CHECK(doc.at("results").is_array());
  CHECK(doc.at("results").empty());
}

TEST_CASE("unknown names are rejected up front") {
  SuiteConfig cfg;
  cfg.suites = {"param-maps", "no-such-suite"};
  CHECK_THROWS_AS(run_suite(cfg), std::invalid_argument);
  CHECK_THROWS_AS(run_check("no/such-check", SuiteConfig{}), std::out_of_range);
}

TEST_CASE("markdown renders one table per suite with skip reasons") {
  SuiteConfig cfg;
  cfg.suites = {"hopf", "param-maps"};
  auto results = run_suite(cfg);
  std::string md = report_markdown(results, cfg);
  CHECK(md.find("## hopf —") != std::string::npos);
  CHECK(md.find("## param-maps —") != std::string::npos);
  CHECK(md.find("| counit+ | pass |") != std::string::npos);
  CHECK(md.find("not-checked: `bracket-compat`") != std::string::npos);
  // the table escape keeps cell layout intact
  CHECK(md.find("0 (exact)") != std::string::npos);
}

TEST_CASE("driver exit codes separate clean, failing and misconfigured runs") {
  CHECK(run_cli("verify --suite dsl-roundtrip") == 0);
  // not-checked entries never fail a run
  CHECK(run_cli("verify --suite hopf") == 0);
  // an impossible tolerance turns numeric passes into failures
  CHECK(run_cli("verify --suite param-maps --tol 1e-22") == 1);
  CHECK(run_cli("verify --suite no-such-suite") == 2);
  CHECK(run_cli("check-id param-maps/raising-branch") == 0);
  CHECK(run_cli("check-id no/such-check") == 2);
  CHECK(run_cli("ope --pair X+,X-") == 0);
  CHECK(run_cli("ope --pair bogus,X-") == 2);
  CHECK(run_cli("frobnicate") == 2);
}
