#include <CLI11.hpp>

#include "qca/builtin.hpp"
#include "qca/report.hpp"
#include "qca/series.hpp"
#include "qca/suite.hpp"
#include "qca/vertexop.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>

namespace {

using namespace qca;

std::string err_str(const CheckResult& r) {
  if (r.mode == Mode::exact && r.exact_zero) return "0 (exact)";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", r.max_error);
  return buf;
}

std::string cx_str(std::complex<double> v) {
  char buf[64];
  if (std::abs(v.imag()) < 1e-12)
    std::snprintf(buf, sizeof buf, "%.6g", v.real());
  else
    std::snprintf(buf, sizeof buf, "%.6g %c %.6gi", v.real(),
                  v.imag() < 0 ? '-' : '+', std::abs(v.imag()));
  return buf;
}

void print_result_line(const CheckResult& r) {
  std::printf("[%-11s] %-55s max %s", status_str(r.status), r.id.c_str(),
              err_str(r).c_str());
  if (r.samples > 0) std::printf("  (%d samples)", r.samples);
  std::printf("\n");
}

int cmd_verify(const std::vector<std::string>& suites_arg, SuiteConfig cfg,
               const std::string& report_path, const std::string& format,
               bool stable) {
  cfg.suites.clear();
  for (const auto& s : suites_arg) {
    if (s == "all") {
      for (const auto& n : suite_names()) cfg.suites.push_back(n);
    } else {
      cfg.suites.push_back(s);
    }
  }

  std::vector<CheckResult> results;
  try {
    results = run_suite(cfg);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  int pass = 0, fail = 0, skip = 0;
  for (const auto& r : results) {
    print_result_line(r);
    if (r.status == Status::pass)
      ++pass;
    else if (r.status == Status::fail)
      ++fail;
    else
      ++skip;
  }
  std::printf("%zu checks: %d pass, %d fail, %d not checked\n", results.size(),
              pass, fail, skip);

  if (!report_path.empty()) {
    std::string doc = format == "md" ? report_markdown(results, cfg)
                                     : report_json(results, cfg, stable);
    std::ofstream out(report_path, std::ios::binary);
    if (!out) {
      std::fprintf(stderr, "error: cannot write '%s'\n", report_path.c_str());
      return 2;
    }
    out << doc;
  }
  return fail > 0 ? 1 : 0;
}

int cmd_check_id(const std::string& id, bool list, const SuiteConfig& cfg) {
  if (list) {
    std::vector<std::string> all = suite_names();
    all.push_back("hopf-experimental");
    for (const auto& cid : check_ids(all)) std::printf("%s\n", cid.c_str());
    return 0;
  }
  CheckResult r;
  try {
    r = run_check(id, cfg);
  } catch (const std::out_of_range& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  print_result_line(r);
  std::printf("  identity:  %s\n", r.anchor.c_str());
  if (r.tolerance > 0) std::printf("  tolerance: %g\n", r.tolerance);
  for (const auto& [k, v] : r.constants)
    std::printf("  constant:  %s = %s\n", k.c_str(), cx_str(v).c_str());
  if (!r.note.empty()) std::printf("  note: %s\n", r.note.c_str());
  std::printf("  runtime: %lld ms\n", r.runtime_ms);
  return r.status == Status::fail ? 1 : 0;
}

// (1 - rho x)^(-beta) as a truncated series in x.
TruncSeries expand_binom(const RatFunc& rho, int beta, int order) {
  TruncSeries out = TruncSeries::constant(RatFunc(Rat(1)), order);
  if (beta > 0) {
    TruncSeries geo(order);
    RatFunc p{Rat(1)};
    for (int k = 0; k <= order; ++k) {
      geo.set_coeff(k, p);
      p = p * rho;
    }
    for (int i = 0; i < beta; ++i) out = out * geo;
  } else if (beta < 0) {
    TruncSeries lin(order);
    lin.set_coeff(0, RatFunc(Rat(1)));
    if (order >= 1) lin.set_coeff(1, RatFunc(Rat(-1)) * rho);
    for (int i = 0; i < -beta; ++i) out = out * lin;
  }
  return out;
}

int cmd_ope(const std::string& rep_name, const std::string& pair, int order) {
  if (rep_name != "gamma_q") {
    std::fprintf(stderr, "error: unknown realization '%s' (have: gamma_q)\n",
                 rep_name.c_str());
    return 2;
  }
  auto comma = pair.find(',');
  if (comma == std::string::npos) {
    std::fprintf(stderr, "error: --pair wants \"X,Y\"\n");
    return 2;
  }
  std::string left = pair.substr(0, comma), right = pair.substr(comma + 1);

  const AlgebraSpec& alg = builtin::uq_osp22();
  if (!alg.current(left) || !alg.current(right)) {
    std::fprintf(stderr, "error: unknown current in pair '%s'\n", pair.c_str());
    return 2;
  }
  RepTable rep = RepTable::load(alg, rep_name);

  Contraction c;
  try {
    c = contract(rep, rep.op(left), rep.op(right));
  } catch (const std::exception& e) {
    std::fprintf(stderr, "no closed-form contraction: %s\n", e.what());
    return 1;
  }

  std::printf("<%s(z) %s(w)>  (x = w/z)\n", left.c_str(), right.c_str());
  std::printf("  prefactor: %s\n", c.zm.str().c_str());
  for (const auto& b : c.binoms)
    std::printf("  * (1 - (%s) x)^%d\n", b.rho.str().c_str(), -b.beta);
  std::printf("  rational form: %s\n", c.factor("x").str().c_str());

  TruncSeries s = TruncSeries::constant(RatFunc(Rat(1)), order);
  for (const auto& b : c.binoms) s = s * expand_binom(b.rho, b.beta, order);
  std::printf("  series: ");
  for (int k = 0; k <= order; ++k) {
    std::string ck = s.coeff(k).str();
    if (ck == "0") continue;
    std::printf("%s(%s) x^%d", k ? " + " : "", ck.c_str(), k);
  }
  std::printf("   [order %d]\n", order);

  auto poles = c.simple_poles();
  if (!poles.empty()) {
    std::printf("  simple poles at x = {");
    for (std::size_t i = 0; i < poles.size(); ++i)
      std::printf("%s%s", i ? ", " : "", poles[i].str().c_str());
    std::printf("}\n");
  }
  if (c.has_higher_pole()) std::printf("  (higher-order pole present)\n");

  std::string lv, rv;
  auto f = alg.exchange_factor(left, right, &lv, &rv);
  if (f)
    std::printf("exchange ratio %s(%s) %s(%s) -> %s\n", left.c_str(),
                lv.c_str(), right.c_str(), rv.c_str(), sym_str(*f).c_str());
  else
    std::printf("no exchange relation declared for this pair%s\n",
                alg.exchange_decl(left, right) ||
                        alg.exchange_decl(right, left)
                    ? ""
                    : " (bracket pair: see the discrete suite)");
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"verification driver for a two-parameter deformed current "
               "superalgebra and its free-boson realizations"};
  app.require_subcommand(1);

  SuiteConfig cfg;
  std::vector<std::string> suites{"all"};
  std::string report_path, format = "json", id, rep_name = "gamma_q", pair;
  bool stable = false, list = false;
  int ope_order = 8;

  CLI::App* verify = app.add_subcommand("verify", "run check suites");
  verify->add_option("--suite", suites,
                     "suite name or 'all' (repeatable); names: discrete-exact, "
                     "continuum-numeric, hopf, param-maps, dsl-roundtrip, "
                     "hopf-experimental");
  verify->add_option("--seed", cfg.seed, "base seed for all random draws");
  verify->add_option("--order", cfg.order, "series truncation order");
  verify->add_option("--samples", cfg.samples, "override per-check sample counts");
  verify->add_option("--tol", cfg.tol, "override per-check tolerances");
  verify->add_option("--trunc", cfg.trunc_k, "Gamma-product truncation K");
  verify->add_option("--threads", cfg.threads, "worker pool size (0 = auto)");
  verify->add_option("--report", report_path, "write a report to this path");
  verify->add_option("--format", format, "report format")
      ->check(CLI::IsMember({"json", "md"}));
  verify->add_flag("--stable", stable, "zero runtimes in the JSON report");

  CLI::App* ope = app.add_subcommand(
      "ope", "print the two-point contraction and exchange ratio of a pair");
  ope->add_option("--rep", rep_name, "realization name");
  ope->add_option("--pair", pair, "current pair \"X,Y\"")->required();
  ope->add_option("--order", ope_order, "series order to print");

  CLI::App* one = app.add_subcommand("check-id", "run a single check by id");
  one->add_option("id", id, "check id (see --list)");
  one->add_flag("--list", list, "list every check id");
  one->add_option("--seed", cfg.seed, "base seed");
  one->add_option("--samples", cfg.samples, "override sample count");
  one->add_option("--tol", cfg.tol, "override tolerance");
  one->add_option("--trunc", cfg.trunc_k, "Gamma-product truncation K");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (verify->parsed()) return cmd_verify(suites, cfg, report_path, format, stable);
  if (ope->parsed()) return cmd_ope(rep_name, pair, ope_order);
  if (one->parsed()) {
    if (id.empty() && !list) {
      std::fprintf(stderr, "error: give a check id or --list\n");
      return 2;
    }
    return cmd_check_id(id, list, cfg);
  }
  return 2;
}
