#include "qca/suite.hpp"

#include "qca/algdsl.hpp"
#include "qca/builtin.hpp"
#include "qca/gammaid.hpp"
#include "qca/gcontr.hpp"
#include "qca/hopf.hpp"
#include "qca/kernels.hpp"
#include "qca/parammap.hpp"
#include "qca/vertexop.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace qca {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

int eff_samples(const SuiteConfig& cfg, int def) {
  return cfg.samples > 0 ? cfg.samples : def;
}
double eff_tol(const SuiteConfig& cfg, double def) {
  return cfg.tol > 0 ? cfg.tol : def;
}

const RepTable& discrete_rep() {
  static RepTable r = RepTable::load(builtin::uq_osp22(), "gamma_q");
  return r;
}

struct CheckDef {
  std::string id;
  std::string suite;
  std::uint64_t salt = 0;
  std::function<CheckResult(const SuiteConfig&, std::uint64_t)> fn;
};

// ---- synthesized checks (the ones without a dedicated engine entry point)

CheckResult continuum_bracket_stub() {
  CheckResult r;
  r.id = "continuum-numeric/bracket";
  r.status = Status::not_checked;
  r.mode = Mode::numeric;
  r.anchor =
      "{E(u), F(v)} = (2*pi/hbar) * (delta_add(u - v - i*hbar*c/2) "
      "H+(u - i*hbar*c/4) - delta_add(u - v + i*hbar*c/2) H-(v - i*hbar*c/4))";
  r.note =
      "distributional identity: both sides are formal delta densities in the "
      "rapidity difference, which pointwise sampling cannot certify; the "
      "discrete suite verifies the exact multiplicative-delta counterpart";
  return r;
}

CheckResult builtin_roundtrip(const char* text, const std::string& label) {
  auto t0 = std::chrono::steady_clock::now();
  CheckResult r;
  r.id = "dsl-roundtrip/builtin:" + label;
  r.mode = Mode::exact;
  r.anchor = "parse(print(S)) == S and print is a fixed point of the pair";
  r.samples = 1;
  AlgebraSpec s1 = parse_qalg(text);
  std::string canon = print_qalg(s1);
  AlgebraSpec s2 = parse_qalg(canon);
  bool ok = s2 == s1 && print_qalg(s2) == canon;
  r.status = ok ? Status::pass : Status::fail;
  r.exact_zero = ok;
  if (!ok) r.note = "canonical text diverged:\n" + canon.substr(0, 400);
  r.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - t0)
                     .count();
  return r;
}

CheckResult load_checks() {
  auto t0 = std::chrono::steady_clock::now();
  CheckResult r;
  r.id = "dsl-roundtrip/load-checks";
  r.mode = Mode::exact;
  r.anchor =
      "declared exchange pairs satisfy f_XY(u,v) * f_YX(v,u) = 1 with the "
      "graded sign convention; violations are rejected at parse time";
  r.samples = 2;
  const AlgebraSpec& a = parse_qalg(builtin::def1_text());
  const AlgebraSpec& b = parse_qalg(builtin::uq_osp22_text());
  int ea = 0, eb = 0;
  for (const auto& rel : a.relations) ea += rel.kind == RelationSpec::exchange;
  for (const auto& rel : b.relations) eb += rel.kind == RelationSpec::exchange;
  bool ok = ea == 9 && eb == 9 && a.family_count() == b.family_count();
  r.status = ok ? Status::pass : Status::fail;
  r.exact_zero = ok;
  if (!ok) {
    std::ostringstream os;
    os << "exchange counts " << ea << "/" << eb << ", families "
       << a.family_count() << "/" << b.family_count();
    r.note = os.str();
  }
  r.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - t0)
                     .count();
  return r;
}

// Random presentations with reciprocity by construction: every factor is
// sign * g(u,v)/g(v,u) for one shared head g.
std::string fuzz_presentation(std::mt19937_64& rng) {
  auto pick = [&rng](int n) { return static_cast<int>(rng() % n); };
  std::ostringstream os;
  os << "algebra rt" << pick(997) << " {\n";
  int nparams = 1 + pick(2);
  for (int i = 0; i < nparams; ++i) os << "  param s" << i << ";\n";
  if (pick(3) == 0) os << "  param t = 1/(s0 + 2);\n";
  int ncur = 2 + pick(2);
  std::vector<int> parity(ncur);
  for (int i = 0; i < ncur; ++i) {
    parity[i] = pick(2);
    os << "  current G" << i << "(u) " << (parity[i] ? "odd" : "even") << ";\n";
  }
  auto head = [&](int which, const std::string& arg) {
    switch (which % 3) {
      case 0: return "cosh(" + arg + ")";
      case 1: return "exp(" + arg + ")";
      default: return "sinh(" + arg + " + 7)";
    }
  };
  for (int i = 0; i < ncur; ++i)
    for (int j = i; j < ncur; ++j) {
      if (pick(4) == 0) continue;
      int h = pick(3), a = 1 + pick(4), b = 1 + pick(4), ps = pick(nparams);
      auto lin = [&](const char* x, const char* y) {
        std::ostringstream g;
        g << a << "*" << x << " - " << b << "*" << y << " + s" << ps;
        return g.str();
      };
      bool minus = parity[i] == 1 && parity[j] == 1;
      os << "  G" << i << "(u) G" << j << "(v) = " << (minus ? "- " : "")
         << head(h, lin("u", "v")) << " / " << head(h, lin("v", "u")) << " G"
         << j << "(v) G" << i << "(u);\n";
    }
  if (pick(2) == 0)
    os << "  bracket G0(u) G1(v) = delta_add(u - v) * (2*pi/s0) G0(u)"
       << " - delta_add(u + v) * (2*pi/s0) G1(v);\n";
  os << "}\n";
  return os.str();
}

CheckResult fuzz_roundtrips(const SuiteConfig& cfg, std::uint64_t seed) {
  auto t0 = std::chrono::steady_clock::now();
  CheckResult r;
  r.id = "dsl-roundtrip/fuzz";
  r.mode = Mode::exact;
  r.anchor = "random reciprocal presentations survive parse -> print -> parse";
  int n = eff_samples(cfg, 20);
  r.samples = n;
  std::mt19937_64 rng(seed);
  r.status = Status::pass;
  r.exact_zero = true;
  for (int i = 0; i < n; ++i) {
    std::string text = fuzz_presentation(rng);
    try {
      AlgebraSpec s1 = parse_qalg(text);
      std::string canon = print_qalg(s1);
      AlgebraSpec s2 = parse_qalg(canon);
      if (!(s2 == s1) || print_qalg(s2) != canon) {
        r.status = Status::fail;
        r.exact_zero = false;
        r.note = "round-trip diverged at draw " + std::to_string(i) + ":\n" +
                 canon.substr(0, 400);
        break;
      }
    } catch (const std::exception& e) {
      r.status = Status::fail;
      r.exact_zero = false;
      r.note = "draw " + std::to_string(i) + " rejected: " + e.what() + "\n" +
               text.substr(0, 400);
      break;
    }
  }
  r.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - t0)
                     .count();
  return r;
}

// ---- registry

const std::vector<CheckDef>& registry() {
  static const std::vector<CheckDef> defs = [] {
    std::vector<CheckDef> v;
    auto add = [&v](std::string suite, std::string tail,
                    std::function<CheckResult(const SuiteConfig&, std::uint64_t)> fn) {
      CheckDef d;
      d.id = suite + "/" + std::move(tail);
      d.suite = std::move(suite);
      d.fn = std::move(fn);
      v.push_back(std::move(d));
    };

    // discrete-exact: the multiplicative realization, exact rational identities
    {
      const AlgebraSpec& alg = builtin::uq_osp22();
      for (const auto& rel : alg.relations) {
        std::string tail = (rel.kind == RelationSpec::exchange ? "exchange:" : "bracket:") +
                           rel.left + "," + rel.right;
        add("discrete-exact", tail, [&rel](const SuiteConfig&, std::uint64_t) {
          return rel.kind == RelationSpec::exchange
                     ? verify_exchange(discrete_rep(), rel)
                     : verify_delta_bracket(discrete_rep(), rel);
        });
      }
    }

    // continuum-numeric: kernels, Gamma identities, contraction exchange
    for (auto variant : {KernelVariant::coupled, KernelVariant::self_dual}) {
      std::string vn = kernel_variant_name(variant);
      add("continuum-numeric", "kernels:" + vn,
          [variant](const SuiteConfig& cfg, std::uint64_t seed) {
            KernelSet ks = KernelSet::make(variant, 0.22, 0.8);
            return verify_derived_brackets(ks, eff_samples(cfg, 200),
                                           eff_tol(cfg, 1e-10), seed);
          });
      add("continuum-numeric", "slopes:" + vn,
          [variant](const SuiteConfig& cfg, std::uint64_t) {
            KernelSet ks = KernelSet::make(variant, 0.22, 0.8);
            return verify_asymptotics(ks, eff_tol(cfg, 1e-6));
          });
    }
    add("continuum-numeric", "gamma-identities",
        [](const SuiteConfig& cfg, std::uint64_t seed) {
          return verify_gamma_identities(eff_samples(cfg, 24), eff_tol(cfg, 1e-6),
                                         seed);
        });
    for (auto variant : {KernelVariant::coupled, KernelVariant::self_dual}) {
      std::string vn = kernel_variant_name(variant);
      const AlgebraSpec& alg = variant == KernelVariant::coupled
                                   ? builtin::def1()
                                   : builtin::uq_osp22();
      for (const auto& rel : alg.relations) {
        if (rel.kind != RelationSpec::exchange) continue;
        add("continuum-numeric",
            "exchange:" + vn + ":" + rel.left + "," + rel.right,
            [variant, &alg, &rel](const SuiteConfig& cfg, std::uint64_t seed) {
              return verify_continuum_exchange(alg, variant, rel,
                                               eff_samples(cfg, 50),
                                               eff_tol(cfg, 1e-6), cfg.trunc_k,
                                               seed);
            });
      }
    }
    add("continuum-numeric", "eta-redundancy",
        [](const SuiteConfig& cfg, std::uint64_t) {
          return verify_eta_redundancy(eff_tol(cfg, 1e-8));
        });
    add("continuum-numeric", "bracket",
        [](const SuiteConfig&, std::uint64_t) { return continuum_bracket_stub(); });

    // hopf: coalgebra axioms over the level window with charges {0, 1, 2}
    for (const std::string& ax : HopfFamily::axiom_names())
      add("hopf", ax, [ax](const SuiteConfig& cfg, std::uint64_t seed) {
        HopfFamily fam(&builtin::def1(), FamilyIndexing{{0, 1, 2}, 1});
        return fam.verify_family_axiom(ax, {0, 1, 2}, eff_samples(cfg, 50),
                                       eff_tol(cfg, 1e-8), seed);
      });
    for (const std::string& ax : HopfFamily::experimental_axiom_names())
      add("hopf-experimental", ax,
          [ax](const SuiteConfig& cfg, std::uint64_t seed) {
            HopfFamily fam(&builtin::def1(), FamilyIndexing{{0, 1, 2}, 1});
            return fam.verify_family_axiom(ax, {0, 1, 2}, eff_samples(cfg, 50),
                                           eff_tol(cfg, 1e-8), seed);
          });

    // param-maps: substitution morphisms onto the multiplicative presentations
    add("param-maps", "raising-branch",
        [](const SuiteConfig& cfg, std::uint64_t seed) {
          return verify_param_map(raising_branch(), eff_samples(cfg, 100),
                                  eff_tol(cfg, 1e-10), seed);
        });
    add("param-maps", "lowering-branch",
        [](const SuiteConfig& cfg, std::uint64_t seed) {
          return verify_param_map(lowering_branch(), eff_samples(cfg, 100),
                                  eff_tol(cfg, 1e-10), seed);
        });
    add("param-maps", "central-collapse",
        [](const SuiteConfig& cfg, std::uint64_t seed) {
          return verify_param_map(central_collapse(), eff_samples(cfg, 100),
                                  eff_tol(cfg, 1e-10), seed);
        });

    // dsl-roundtrip
    add("dsl-roundtrip", "builtin:def1", [](const SuiteConfig&, std::uint64_t) {
      return builtin_roundtrip(builtin::def1_text(), "def1");
    });
    add("dsl-roundtrip", "builtin:uq_osp22",
        [](const SuiteConfig&, std::uint64_t) {
          return builtin_roundtrip(builtin::uq_osp22_text(), "uq_osp22");
        });
    add("dsl-roundtrip", "load-checks",
        [](const SuiteConfig&, std::uint64_t) { return load_checks(); });
    add("dsl-roundtrip", "fuzz", fuzz_roundtrips);

    for (std::size_t i = 0; i < v.size(); ++i) v[i].salt = splitmix64(i + 1);
    return v;
  }();
  return defs;
}

CheckResult run_one(const CheckDef& d, const SuiteConfig& cfg) {
  CheckResult r;
  try {
    r = d.fn(cfg, splitmix64(cfg.seed ^ d.salt));
  } catch (const std::exception& e) {
    r.status = Status::fail;
    r.note = std::string("exception: ") + e.what();
  }
  r.id = d.id;
  return r;
}

} // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "discrete-exact", "continuum-numeric", "hopf", "param-maps",
      "dsl-roundtrip"};
  return names;
}

std::vector<std::string> check_ids(const std::vector<std::string>& suites) {
  std::vector<std::string> out;
  for (const auto& d : registry())
    if (std::find(suites.begin(), suites.end(), d.suite) != suites.end())
      out.push_back(d.id);
  return out;
}

std::vector<CheckResult> run_suite(const SuiteConfig& cfg) {
  std::vector<std::string> known = suite_names();
  known.push_back("hopf-experimental");
  for (const auto& s : cfg.suites)
    if (std::find(known.begin(), known.end(), s) == known.end())
      throw std::invalid_argument("unknown suite '" + s + "'");

  std::vector<const CheckDef*> jobs;
  for (const auto& d : registry())
    if (std::find(cfg.suites.begin(), cfg.suites.end(), d.suite) !=
        cfg.suites.end())
      jobs.push_back(&d);

  // Shared lazily-built tables are forced before the pool starts.
  if (!jobs.empty()) {
    builtin::def1();
    builtin::uq_osp22();
    discrete_rep();
  }

  std::vector<CheckResult> results(jobs.size());
  unsigned want = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                  : std::thread::hardware_concurrency();
  unsigned nthreads =
      std::max(1u, std::min<unsigned>(want, static_cast<unsigned>(jobs.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) break;
      results[i] = run_one(*jobs[i], cfg);
    }
  };
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return results;
}

CheckResult run_check(const std::string& id, const SuiteConfig& cfg) {
  for (const auto& d : registry())
    if (d.id == id) return run_one(d, cfg);
  throw std::out_of_range("unknown check id '" + id + "'");
}

} // namespace qca
