#include "qca/parammap.hpp"

#include "qca/builtin.hpp"
#include "qca/numeval.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace qca {

namespace {

using S = SymPtr;

S operator*(S a, S b) { return SymExpr::mul(std::move(a), std::move(b)); }
S operator/(S a, S b) { return SymExpr::div(std::move(a), std::move(b)); }
S operator-(S a, S b) { return SymExpr::sub(std::move(a), std::move(b)); }

S rc(long n, long d = 1) { return SymExpr::rc(Rat(n, d)); }
S expf(S x) { return SymExpr::fn(SymKind::exp_fn, std::move(x)); }

// e^{2 pi s u} with s a parameter name, u the slot placeholder.
S exp_image(const char* scale) {
  return expf(rc(2) * SymExpr::pi() * SymExpr::param(scale) *
              SymExpr::var("u"));
}
S exp_image_i(const char* scale) {
  return expf(rc(2) * SymExpr::pi() * SymExpr::imag() *
              SymExpr::param(scale) * SymExpr::param("hbar"));
}

} // namespace

ParamMap raising_branch() {
  ParamMap m;
  m.name = "raising-branch";
  m.src = &builtin::def1();
  m.dst = &builtin::uq_osp22();
  m.currents = {{"E", "X+"}};
  m.var_image = exp_image("eta");
  m.dst_params["q"] = exp_image_i("eta");
  m.src_fixed = {{"c", Cx{0.37, 0.0}}};
  return m;
}

ParamMap lowering_branch() {
  ParamMap m;
  m.name = "lowering-branch";
  m.src = &builtin::def1();
  m.dst = &builtin::uq_osp22();
  m.currents = {{"F", "X-"}};
  m.var_image = exp_image("etap");
  m.dst_params["q"] = exp_image_i("etap");
  m.src_fixed = {{"c", Cx{0.37, 0.0}}};
  return m;
}

ParamMap central_collapse() {
  ParamMap m;
  m.name = "central-collapse";
  m.src = &builtin::def1();
  m.dst = &builtin::uq_osp22();
  m.currents = {{"E", "X+"}, {"F", "X-"}, {"H+", "psi+"}, {"H-", "psi-"}};
  m.var_image = exp_image("eta");
  m.dst_params["q"] = exp_image_i("eta");
  m.dst_params["gamma"] = rc(1);
  m.src_fixed = {{"c", Cx{0.0, 0.0}}};
  S sqrt2 = SymExpr::pow(rc(2), Rat(1, 2));
  S zq = SymExpr::param("q");
  S hco = SymExpr::param("hbar") /
          (rc(2) * SymExpr::pi() * (zq - rc(1) / zq));
  m.prefactors = {{"E", sqrt2 * SymExpr::var("z")},
                  {"F", sqrt2 * SymExpr::var("z")},
                  {"H+", hco},
                  {"H-", hco}};
  return m;
}

namespace {

struct DrawCtx {
  std::mt19937_64 rng;
  const ParamMap& map;
  explicit DrawCtx(const ParamMap& m, std::uint64_t seed)
      : rng(seed), map(m) {}

  // Source environment: free params drawn, centrals pinned, derived rules
  // resolved; the two slot values are returned separately.
  SymEnv draw(Cx& a, Cx& b, bool coincident) {
    ParamEnv pe = map.src->param_env();
    for (const auto& p : map.src->params)
      if (!p.derived) pe.set(p.name, random_modulus(rng, 0.2, 0.9));
    for (const auto& c : map.src->centrals) {
      auto it = map.src_fixed.find(c);
      if (it == map.src_fixed.end())
        throw std::invalid_argument("param map leaves central '" + c +
                                    "' unbound");
      pe.set(c, it->second);
    }
    a = random_modulus(rng, 0.2, 0.9);
    b = coincident ? a : random_modulus(rng, 0.2, 0.9);
    return pe.resolve();
  }
};

Cx eval_with(const SymEnv& base, std::initializer_list<std::pair<std::string, Cx>> extra,
             const SymPtr& e) {
  SymEnv env = base;
  for (const auto& [k, v] : extra) env[k] = v;
  return sym_eval(e, env);
}

// Destination parameter/central values induced by a source draw.
SymEnv dst_env_from(const ParamMap& map, const SymEnv& src_env) {
  SymEnv out;
  for (const auto& [name, expr] : map.dst_params)
    out[name] = sym_eval(expr, src_env);
  return out;
}

Cx slot_image(const ParamMap& map, const SymEnv& src_env, Cx slot) {
  return eval_with(src_env, {{"u", slot}}, map.var_image);
}

Cx prefactor_value(const ParamMap& map, const std::string& current,
                   const SymEnv& merged, Cx own_z) {
  auto it = map.prefactors.find(current);
  if (it == map.prefactors.end()) return Cx{1.0, 0.0};
  return eval_with(merged, {{"z", own_z}}, it->second);
}

} // namespace

CheckResult verify_param_map(const ParamMap& map, int samples, double tol,
                             std::uint64_t seed) {
  CheckResult r;
  r.id = "parammap:" + map.name;
  r.mode = Mode::numeric;
  r.status = Status::pass;
  r.tolerance = tol;
  r.anchor = "transported structure functions equal destination factors";
  DrawCtx ctx(map, seed);
  std::ostringstream note;
  int n_exchange = 0;
  bool did_bracket = false;

  auto fail = [&](const std::string& why) {
    r.status = Status::fail;
    r.note = why;
    return r;
  };

  for (const auto& rel : map.src->relations) {
    auto li = map.currents.find(rel.left);
    auto ri = map.currents.find(rel.right);
    if (li == map.currents.end() || ri == map.currents.end()) continue;

    if (rel.kind == RelationSpec::exchange) {
      std::string lv, rv;
      auto df = map.dst->exchange_factor(li->second, ri->second, &lv, &rv);
      if (!df)
        return fail("no destination relation for " + li->second + "," +
                    ri->second);
      ++n_exchange;
      int got = 0, tries = 0;
      while (got < samples && tries < 20 * samples + 100) {
        ++tries;
        try {
          Cx a, b;
          SymEnv senv = ctx.draw(a, b, false);
          senv[rel.lvar] = a;
          senv[rel.rvar] = b;
          Cx sval = sym_eval(rel.factor, senv);
          SymEnv denv = dst_env_from(map, senv);
          denv[lv] = slot_image(map, senv, a);
          denv[rv] = slot_image(map, senv, b);
          Cx dval = sym_eval(*df, denv);
          double err = std::abs(sval - dval) /
                       std::max({1.0, std::abs(sval), std::abs(dval)});
          r.max_error = std::max(r.max_error, err);
          ++got;
          ++r.samples;
          if (err > tol)
            return fail(rel.left + "," + rel.right +
                        " transport mismatch, error " + std::to_string(err));
        } catch (const EvalError&) {
          // singular draw; redraw
        }
      }
      if (got < samples) return fail("sampling starved on " + rel.left);
      continue;
    }

    // Delta bracket: supports must coincide at the pinned centrals, the
    // per-term targets must agree, and one scalar must reconcile both
    // declared coefficient pairs.  A bracket whose targets fall outside
    // the mapped subalgebra is not transportable and is skipped.
    bool targets_mapped = true;
    for (const auto& d : rel.deltas)
      if (!map.currents.count(d.target)) targets_mapped = false;
    if (!targets_mapped) continue;
    const RelationSpec* drel = nullptr;
    for (const auto& cand : map.dst->relations)
      if (cand.kind == RelationSpec::delta_bracket &&
          cand.left == li->second && cand.right == ri->second)
        drel = &cand;
    if (!drel)
      return fail("no destination bracket for " + li->second + "," +
                  ri->second);
    if (rel.deltas.size() != 2 || drel->deltas.size() != 2)
      return fail("bracket term count mismatch");
    for (int k = 0; k < 2; ++k) {
      if (rel.deltas[k].sign != drel->deltas[k].sign)
        return fail("bracket term signs disagree");
      if (map.currents.at(rel.deltas[k].target) != drel->deltas[k].target)
        return fail("bracket targets disagree");
    }
    did_bracket = true;

    Cx nu_num{0.0, 0.0}, nu_den{1.0, 0.0};
    int got = 0, tries = 0;
    while (got < samples && tries < 20 * samples + 100) {
      ++tries;
      try {
        Cx a, b;
        SymEnv senv = ctx.draw(a, b, true); // coincident slots: on support
        senv[rel.lvar] = a;
        senv[rel.rvar] = b;
        SymEnv denv = dst_env_from(map, senv);
        Cx za = slot_image(map, senv, a);
        denv[drel->lvar] = za;
        denv[drel->rvar] = za;
        SymEnv merged = denv;
        for (const auto& [k, v] : senv) merged[k] = v;

        // Coincident support both sides, each in its own convention
        // (additive deltas sit at 0, multiplicative ones at 1).
        for (int k = 0; k < 2; ++k) {
          Cx ss = sym_eval(rel.deltas[k].support, senv);
          Cx s0 = rel.deltas[k].additive ? Cx{0.0, 0.0} : Cx{1.0, 0.0};
          if (std::abs(ss - s0) > 1e-9)
            return fail("source delta support not coincident");
          Cx ds = sym_eval(drel->deltas[k].support, denv);
          Cx d0 = drel->deltas[k].additive ? Cx{0.0, 0.0} : Cx{1.0, 0.0};
          if (std::abs(ds - d0) > 1e-9)
            return fail("destination delta support not coincident");
        }

        Cx pre_l = prefactor_value(map, rel.left, merged, za);
        Cx pre_r = prefactor_value(map, rel.right, merged, za);
        // nu_k = num_k / den_k; compared cross-multiplied so algebraically
        // equal terms come out with error exactly zero.
        Cx num[2], den[2];
        for (int k = 0; k < 2; ++k) {
          // Target arguments must transport onto each other.
          Cx starg = sym_eval(rel.deltas[k].target_arg, senv);
          Cx simg = slot_image(map, senv, starg);
          Cx dtarg = sym_eval(drel->deltas[k].target_arg, denv);
          if (std::abs(simg - dtarg) > tol * std::max(1.0, std::abs(dtarg)))
            return fail("bracket target argument does not transport");
          Cx scoeff = sym_eval(rel.deltas[k].coeff, senv);
          Cx dcoeff = sym_eval(drel->deltas[k].coeff, denv);
          Cx pre_t = prefactor_value(map, rel.deltas[k].target, merged, dtarg);
          num[k] = pre_l * pre_r * dcoeff;
          den[k] = scoeff * pre_t;
        }
        double mism = std::abs(num[0] * den[1] - num[1] * den[0]) /
                      std::max(1.0, std::abs(num[0] * den[1]));
        r.max_error = std::max(r.max_error, mism);
        if (mism > tol)
          return fail("bracket terms need different scale factors");
        if (got == 0) {
          nu_num = num[0];
          nu_den = den[0];
        } else {
          double drift = std::abs(num[0] * nu_den - nu_num * den[0]) /
                         std::max(1.0, std::abs(num[0] * nu_den));
          r.max_error = std::max(r.max_error, drift);
          if (drift > tol)
            return fail("bracket scale factor is not constant");
        }
        ++got;
        ++r.samples;
      } catch (const EvalError&) {
      }
    }
    if (got < samples) return fail("sampling starved on bracket");
    r.constants["delta_scale"] = nu_num / nu_den;
  }

  if (n_exchange == 0 && !did_bracket)
    return fail("map covers no source relation");
  note << n_exchange << " exchange relation(s)";
  if (did_bracket) note << " + delta bracket";
  note << " transported";
  r.note = note.str();
  return r;
}

} // namespace qca
