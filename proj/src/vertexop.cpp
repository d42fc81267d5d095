#include "qca/vertexop.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace qca {

namespace {

long long to_int(const Rat& r, const char* what) {
  if (!is_integer(r))
    throw std::domain_error(std::string(what) + ": non-integer value " + rat_str(r));
  return rat_num(r).convert_to<long long>();
}

void mono_add(PowerMono& m, const std::string& s, const Rat& e) {
  Rat v = m.count(s) ? m[s] + e : e;
  if (v == 0)
    m.erase(s);
  else
    m[s] = v;
}

PowerMono mono_scaled(const PowerMono& m, const Rat& k) {
  PowerMono out;
  if (k == 0) return out;
  for (auto& [s, e] : m) out[s] = e * k;
  return out;
}

PowerMono mono_subst(const PowerMono& m, const std::string& sym, const PowerMono& repl) {
  PowerMono out;
  for (auto& [s, e] : m) {
    if (s == sym)
      for (auto& [t, f] : repl) mono_add(out, t, e * f);
    else
      mono_add(out, s, e);
  }
  return out;
}

Rat mono_get(const PowerMono& m, const std::string& s) {
  auto it = m.find(s);
  return it == m.end() ? Rat(0) : it->second;
}

std::string mono_str(const PowerMono& m) {
  std::ostringstream os;
  for (auto& [s, e] : m) os << s << "^" << rat_str(e) << " ";
  return os.str();
}

RatFunc hpow(long long e) {
  if (e == 0) return RatFunc(Rat(1));
  return RatFunc::var("h", static_cast<int>(e));
}

// Extracts a pure power product from a rational function (both sides single
// monomials, unit coefficient).
PowerMono rf_to_mono(const RatFunc& f, const char* what) {
  auto side = [&](const Poly& p, int sgn, PowerMono& out) {
    if (p.terms().size() != 1)
      throw std::domain_error(std::string(what) + ": not a monomial: " + f.str());
    auto& [mono, coeff] = *p.terms().begin();
    if (coeff != Rat(1))
      throw std::domain_error(std::string(what) + ": non-unit coefficient: " + f.str());
    for (auto& [vid, e] : mono) mono_add(out, vars::name(vid), Rat(sgn * e));
  };
  PowerMono out;
  side(f.num(), +1, out);
  side(f.den(), -1, out);
  return out;
}

} // namespace

VertexOp VertexOp::at(const PowerMono& m) const {
  VertexOp out = *this;
  for (auto& leg : out.legs) leg.arg = mono_subst(leg.arg, "z", m);
  out.zm.subst_log("z", m);
  return out;
}

VertexOp vertex_product(const VertexOp& a, const VertexOp& b) {
  VertexOp out = a;
  out.label = a.label + " " + b.label;
  out.legs.insert(out.legs.end(), b.legs.begin(), b.legs.end());
  out.zm += b.zm;
  return out;
}

bool VertexOp::same_operator(const VertexOp& o) const {
  auto canon = [](const VertexOp& v) {
    std::map<std::pair<std::string, std::string>, Rat> m;
    for (auto& l : v.legs) {
      auto key = std::make_pair(l.mode, mono_str(l.arg));
      Rat w = (m.count(key) ? m[key] : Rat(0)) + l.weight;
      if (w == 0)
        m.erase(key);
      else
        m[key] = w;
    }
    return m;
  };
  auto zcanon = [](const ZmLinearForm& f) {
    ZmLinearForm out;
    for (auto& [s, v] : f.coeff)
      if (!v.is_zero()) out.coeff.emplace(s, v);
    return out;
  };
  return canon(*this) == canon(o) && zcanon(zm) == zcanon(o.zm);
}

RatFunc Contraction::factor(const std::string& xvar) const {
  RatFunc f(Rat(1));
  RatFunc x = RatFunc::var(xvar);
  for (auto& b : binoms) f = f * (RatFunc(Rat(1)) - b.rho * x).pow(-b.beta);
  return f;
}

std::vector<RatFunc> Contraction::simple_poles() const {
  std::vector<RatFunc> out;
  for (auto& b : binoms)
    if (b.beta == 1) out.push_back(b.rho.pow(-1));
  return out;
}

bool Contraction::has_higher_pole() const {
  for (auto& b : binoms)
    if (b.beta > 1) return true;
  return false;
}

PowerMono RepTable::arg_monomial(const SymPtr& e,
                                 const std::map<std::string, std::string>& var_map) const {
  switch (e->kind) {
    case SymKind::rat_const:
      if (e->value == 1) return {};
      throw std::domain_error("argument monomial: constant " + rat_str(e->value));
    case SymKind::var:
    case SymKind::param: {
      auto vit = var_map.find(e->name);
      if (vit != var_map.end()) return {{vit->second, Rat(1)}};
      auto pit = param_rf.find(e->name);
      if (pit != param_rf.end()) return rf_to_mono(pit->second, "argument parameter");
      throw std::domain_error("argument monomial: unknown symbol " + e->name);
    }
    case SymKind::mul: {
      PowerMono a = arg_monomial(e->a, var_map);
      for (auto& [s, x] : arg_monomial(e->b, var_map)) mono_add(a, s, x);
      return a;
    }
    case SymKind::div: {
      PowerMono a = arg_monomial(e->a, var_map);
      for (auto& [s, x] : arg_monomial(e->b, var_map)) mono_add(a, s, -x);
      return a;
    }
    case SymKind::pow:
      return mono_scaled(arg_monomial(e->a, var_map), e->value);
    default:
      throw std::domain_error("argument monomial: unsupported head in " + sym_str(e));
  }
}

RepTable RepTable::load(const AlgebraSpec& alg, const std::string& rname) {
  const RealizationSpec* r = alg.realization(rname);
  if (!r) throw std::domain_error("unknown realization " + rname);
  RepTable rep;
  rep.zm_pairs = r->zeromode_pairs;

  // Rebase the single free deformation parameter as h^2 so that half-integer
  // powers in arguments become integer exponents of h.
  std::vector<std::string> free_params;
  for (auto& p : alg.params)
    if (!p.derived) free_params.push_back(p.name);
  if (free_params.size() != 1)
    throw std::domain_error("realization loader expects one free parameter, got " +
                            std::to_string(free_params.size()));
  rep.param_rf[free_params[0]] = RatFunc::var("h", 2);
  for (auto& p : alg.params)
    if (p.derived) {
      try {
        rep.param_rf[p.name] = sym_to_ratfunc(p.derived, rep.param_rf);
      } catch (const std::exception&) {
        // non-rational derived parameter: simply not available in arguments
      }
    }
  for (auto& [n, expr] : r->lets) rep.param_rf[n] = sym_to_ratfunc(expr, rep.param_rf);

  for (auto& m : r->modes) rep.modes.families.push_back({m, true, nullptr});
  for (auto& mb : r->mbrackets) {
    GeomBracket b;
    for (auto& [alpha, ratio] : mb.geom)
      b.push_back({alpha, sym_to_ratfunc(ratio, rep.param_rf)});
    rep.modes.brackets.emplace_back(mb.m1, mb.m2, geom_canonical(b));
  }

  for (auto& f : r->fields) {
    VertexOp v;
    v.label = f.name;
    for (auto& [mode, wexpr] : f.osc) {
      RatFunc w = sym_to_ratfunc(wexpr, rep.param_rf);
      if (!w.is_constant())
        throw std::domain_error("oscillator weight must be constant: " + f.name);
      v.legs.push_back({mode, w.constant(), {{"z", Rat(1)}}});
    }
    for (auto& [sym, cexpr] : f.zm) {
      ZmValue c = zm_value_from_expr(cexpr);
      if (f.var != "z") c.subst_log(f.var, {{"z", Rat(1)}});
      ZmValue acc = v.zm.at(sym) + c;
      if (acc.is_zero())
        v.zm.coeff.erase(sym);
      else
        v.zm.coeff[sym] = acc;
    }
    rep.ops[f.name] = v;
  }

  for (auto& o : r->ops) {
    std::map<std::string, std::string> vmap{{o.var, "z"}};
    auto instance = [&](const std::string& ref, const SymPtr& arg) {
      auto it = rep.ops.find(ref);
      if (it == rep.ops.end())
        throw std::domain_error("operator references unknown name " + ref);
      return it->second.at(rep.arg_monomial(arg, vmap));
    };
    VertexOp v = instance(o.ref1, o.arg1);
    if (o.kind == RealOp::fuse) v = vertex_product(v, instance(o.ref2, o.arg2));
    v.label = o.name;
    rep.ops[o.name] = v;
  }
  return rep;
}

const VertexOp& RepTable::op(const std::string& current) const {
  auto it = ops.find(current);
  if (it == ops.end()) throw std::domain_error("no realization of " + current);
  return it->second;
}

VertexOp RepTable::op_at(const std::string& current, const PowerMono& m) const {
  return op(current).at(m);
}

Contraction contract(const RepTable& rep, const VertexOp& first,
                     const VertexOp& second) {
  VertexOp sw = second.at({{"w", Rat(1)}});
  Contraction c;
  c.zm = zero_mode_contract(first.zm, sw.zm, rep.zm_pairs);

  auto push = [&](const RatFunc& rho, int beta) {
    for (auto& b : c.binoms)
      if (b.rho == rho) {
        b.beta += beta;
        return;
      }
    c.binoms.push_back({rho, beta});
  };

  for (auto& l1 : first.legs) {
    if (l1.weight == 0) continue;
    for (auto& l2 : sw.legs) {
      if (l2.weight == 0) continue;
      const GeomBracket* gb = rep.modes.find(l1.mode, l2.mode);
      if (!gb) continue; // commuting families
      if (mono_get(l1.arg, "z") != 1 || mono_get(l2.arg, "w") != 1)
        throw std::domain_error("contraction: argument must be linear in the spectral variable");
      // ratio of arguments w/z * h^dh
      Rat dh = mono_get(l2.arg, "h") - mono_get(l1.arg, "h");
      for (auto& [s, e] : l1.arg)
        if (s != "z" && s != "h")
          throw std::domain_error("contraction: unexpected argument symbol " + s);
      for (auto& [s, e] : l2.arg)
        if (s != "w" && s != "h")
          throw std::domain_error("contraction: unexpected argument symbol " + s);
      long long dhi = to_int(dh, "contraction: relative argument h-power");
      for (auto& t : *gb) {
        Rat beta = t.alpha * l1.weight * l2.weight;
        if (!is_integer(beta))
          throw std::domain_error(
              "contraction has no closed form: non-integer exponent " + rat_str(beta));
        int bi = static_cast<int>(rat_num(beta).convert_to<long long>());
        if (bi == 0) continue;
        push(t.r * hpow(dhi), bi);
      }
    }
  }
  std::erase_if(c.binoms, [](const Contraction::Binom& b) { return b.beta == 0; });
  return c;
}

std::vector<std::pair<RatFunc, RatFunc>> delta_decompose(
    const RatFunc& S, const std::vector<RatFunc>& poles, const std::string& xvar) {
  int xid = vars::id(xvar);
  RatFunc x = RatFunc::var(xvar);
  std::vector<std::pair<RatFunc, RatFunc>> out;
  for (auto& x0 : poles) {
    RatFunc c = (S * (RatFunc(Rat(1)) - x / x0)).subst(xid, x0);
    out.emplace_back(x0, c);
  }
  return out;
}

namespace {

// Contraction as sign * z^zdeg * S(x, h) with x = w/z of the *relation*
// ordering; `swapped` marks a contraction taken in the opposite operator
// order, whose own (z, w, x) are the relation's (w, z, 1/x).
struct XFormed {
  Rat zdeg;
  RatFunc S;
};

XFormed xform(const Contraction& c, bool swapped) {
  if (c.zm.rexp != 0)
    throw std::domain_error("contraction scalar has non-rational magnitude");
  long long ip = to_int(c.zm.ipow, "contraction i-power");
  if (ip % 2 != 0)
    throw std::domain_error("contraction scalar has an unpaired factor of i");
  int sign = (((ip / 2) % 2) + 2) % 2 == 0 ? 1 : -1;
  Rat az = 0, aw = 0, ah = 0;
  for (auto& [s, e] : c.zm.powers) {
    if (s == "z")
      az = e;
    else if (s == "w")
      aw = e;
    else if (s == "h")
      ah = e;
    else
      throw std::domain_error("contraction scalar carries unexpected symbol " + s);
  }
  if (swapped) std::swap(az, aw);
  XFormed out;
  out.zdeg = az + aw;
  RatFunc S = RatFunc(Rat(sign)) * hpow(to_int(ah, "contraction h-power")) *
              RatFunc::var("x", static_cast<int>(to_int(aw, "contraction w-power")));
  RatFunc x = RatFunc::var("x");
  for (auto& b : c.binoms) {
    if (!swapped) {
      S = S * (RatFunc(Rat(1)) - b.rho * x).pow(-b.beta);
    } else {
      // (1 - rho/x)^{-beta} = x^{beta} (x - rho)^{-beta}
      S = S * RatFunc::var("x", b.beta) * (x - b.rho).pow(-b.beta);
    }
  }
  out.S = S;
  return out;
}

std::string render_exchange(const RelationSpec& rel) {
  std::ostringstream os;
  os << rel.left << "(" << rel.lvar << ") " << rel.right << "(" << rel.rvar
     << ") = " << sym_str(rel.factor) << " " << rel.right << "(" << rel.rvar
     << ") " << rel.left << "(" << rel.lvar << ")";
  return os.str();
}

std::string render_bracket(const RelationSpec& rel) {
  std::ostringstream os;
  os << (rel.anticommutator ? "{" : "[") << rel.left << "(" << rel.lvar << "), "
     << rel.right << "(" << rel.rvar << ")" << (rel.anticommutator ? "}" : "]")
     << " =";
  for (size_t i = 0; i < rel.deltas.size(); ++i) {
    auto& d = rel.deltas[i];
    os << (i ? (d.sign > 0 ? " + " : " - ") : (d.sign > 0 ? " " : " - "));
    os << "delta(" << sym_str(d.support) << ") " << sym_str(d.coeff) << " "
       << d.target << "(" << sym_str(d.target_arg) << ")";
  }
  return os.str();
}

double sample_abs(const RatFunc& f) {
  try {
    std::map<int, Cx> env{{vars::id("x"), Cx(0.31, 0.07)},
                          {vars::id("h"), Cx(1.13, 0.0)},
                          {vars::id("z"), Cx(0.83, 0.21)}};
    return std::abs(f.eval(env));
  } catch (const std::exception&) {
    return std::nan("");
  }
}

} // namespace

CheckResult verify_exchange(const RepTable& rep, const RelationSpec& rel) {
  auto t0 = std::chrono::steady_clock::now();
  CheckResult res;
  res.id = "ope-exchange:" + rel.left + "," + rel.right;
  res.anchor = render_exchange(rel);
  res.mode = Mode::exact;
  try {
    if (rel.kind != RelationSpec::exchange)
      throw std::domain_error("relation is not an exchange relation");
    Contraction c12 = contract(rep, rep.op(rel.left), rep.op(rel.right));
    Contraction c21 = contract(rep, rep.op(rel.right), rep.op(rel.left));
    XFormed f12 = xform(c12, false);
    XFormed f21 = xform(c21, true);
    if (f12.zdeg != f21.zdeg)
      throw std::domain_error("contraction orders differ in total degree: " +
                              rat_str(f12.zdeg) + " vs " + rat_str(f21.zdeg));
    RatFunc ratio = f12.S / f21.S;

    // Declared factor, z -> y, w -> y x; degree-0 homogeneity means y drops out.
    std::map<std::string, RatFunc> table = rep.param_rf;
    table[rel.lvar] = RatFunc::var("y");
    table[rel.rvar] = RatFunc::var("y") * RatFunc::var("x");
    RatFunc target = sym_to_ratfunc(rel.factor, table);
    int yid = vars::id("y");
    if (target.num().degree(yid) > 0 || target.den().degree(yid) > 0)
      throw std::domain_error("declared factor is not homogeneous of degree zero");

    if (ratio == target) {
      res.status = Status::pass;
      res.exact_zero = true;
    } else {
      res.status = Status::fail;
      res.note = "ratio " + ratio.str() + " != declared " + target.str();
      res.max_error = sample_abs(ratio - target);
    }
  } catch (const std::exception& e) {
    res.status = Status::fail;
    res.note = e.what();
  }
  res.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  return res;
}

CheckResult verify_delta_bracket(const RepTable& rep, const RelationSpec& rel) {
  auto t0 = std::chrono::steady_clock::now();
  CheckResult res;
  res.id = "ope-bracket:" + rel.left + "," + rel.right;
  res.anchor = render_bracket(rel);
  res.mode = Mode::exact;
  int xid = vars::id("x"), hid = vars::id("h"), zid = vars::id("z");
  try {
    if (rel.kind != RelationSpec::delta_bracket)
      throw std::domain_error("relation is not a delta bracket");
    Contraction c12 = contract(rep, rep.op(rel.left), rep.op(rel.right));
    Contraction c21 = contract(rep, rep.op(rel.right), rep.op(rel.left));
    if (c12.has_higher_pole() || c21.has_higher_pole())
      throw std::domain_error("contraction has a higher-order pole");
    XFormed f12 = xform(c12, false);
    XFormed f21 = xform(c21, true);
    if (f12.zdeg != f21.zdeg)
      throw std::domain_error("contraction orders differ in total degree");

    // Bracket = inner expansion + sigma * outer expansion; the rational forms
    // must cancel up to that sign for the difference to be pure deltas.
    RatFunc expect = rel.anticommutator ? -f12.S : f12.S;
    if (!(f21.S == expect))
      throw std::domain_error("regular parts do not cancel between orderings: " +
                              f21.S.str() + " vs " + expect.str());

    std::vector<RatFunc> poles = c12.simple_poles();
    if (poles.size() != rel.deltas.size())
      throw std::domain_error("pole count " + std::to_string(poles.size()) +
                              " does not match declared delta count " +
                              std::to_string(rel.deltas.size()));
    auto decomp = delta_decompose(f12.S, poles);

    // Every pole accounted for: remainder must be a Laurent polynomial.
    RatFunc rem = f12.S;
    RatFunc x = RatFunc::var("x");
    for (auto& [x0, c] : decomp) rem = rem - c / (RatFunc(Rat(1)) - x / x0);
    int d = rem.den().degree(xid);
    if (d > 0 && (rem * RatFunc::var("x", d)).den().degree(xid) > 0)
      throw std::domain_error("expansion difference has unaccounted poles");

    long long zdeg = to_int(f12.zdeg, "bracket z-degree");
    std::vector<RatFunc> norms;
    std::vector<bool> used(decomp.size(), false);
    int k = 0;
    for (auto& dt : rel.deltas) {
      ++k;
      if (dt.additive)
        throw std::domain_error("additive delta in a multiplicative realization");
      // support = 1 picks the pole position
      std::map<std::string, RatFunc> table = rep.param_rf;
      table[rel.lvar] = RatFunc::var("y");
      table[rel.rvar] = RatFunc::var("y") * RatFunc::var("x");
      RatFunc srf = sym_to_ratfunc(dt.support, table);
      int yid = vars::id("y");
      if (srf.num().degree(yid) > 0 || srf.den().degree(yid) > 0)
        throw std::domain_error("delta support is not homogeneous of degree zero");
      PowerMono smono = rf_to_mono(srf, "delta support");
      long long xe = to_int(mono_get(smono, "x"), "delta support x-power");
      long long he = to_int(mono_get(smono, "h"), "delta support h-power");
      for (auto& [s, e] : smono)
        if (s != "x" && s != "h")
          throw std::domain_error("delta support carries unexpected symbol " + s);
      if (xe != 1 && xe != -1)
        throw std::domain_error("delta support must be linear in the variable ratio");
      long long x0h = xe == 1 ? -he : he; // x0 = h^{x0h}
      RatFunc x0 = hpow(x0h);

      size_t idx = decomp.size();
      for (size_t i = 0; i < decomp.size(); ++i)
        if (!used[i] && decomp[i].first == x0) {
          idx = i;
          break;
        }
      if (idx == decomp.size())
        throw std::domain_error("declared delta support h^" + std::to_string(x0h) +
                                " is not a contraction pole");
      used[idx] = true;
      const RatFunc& ck = decomp[idx].second;

      // Fused operator at the pole vs the declared target current.
      PowerMono x0mono{{"h", Rat(x0h)}};
      PowerMono second_arg{{"z", Rat(1)}};
      mono_add(second_arg, "h", Rat(x0h));
      VertexOp fused = vertex_product(rep.op(rel.left), rep.op(rel.right).at(second_arg));
      PowerMono tmono = rep.arg_monomial(
          dt.target_arg, {{rel.lvar, "z"}, {rel.rvar, "w"}});
      tmono = mono_subst(tmono, "w", {{"z", Rat(1)}, {"h", Rat(x0h)}});
      VertexOp target = rep.op_at(dt.target, tmono);
      if (!fused.same_operator(target))
        throw std::domain_error("fused operator at pole h^" + std::to_string(x0h) +
                                " does not match " + dt.target);

      // Normalization: computed coefficient of the delta against the declared
      // one, which must be the same constant for every term.
      std::map<std::string, RatFunc> ctable = rep.param_rf;
      ctable[rel.lvar] = RatFunc::var("z");
      ctable[rel.rvar] = RatFunc::var("z") * x0;
      RatFunc declared = sym_to_ratfunc(dt.coeff, ctable) * RatFunc(Rat(dt.sign));
      RatFunc computed = RatFunc::var("z", static_cast<int>(zdeg)) * ck;
      RatFunc norm = computed / declared;
      if (norm.num().degree(zid) > 0 || norm.den().degree(zid) > 0)
        throw std::domain_error("normalization constant depends on the variable");
      norms.push_back(norm);

      // Residue data must stay finite as the deformation is switched off
      // (q -> 1, i.e. h -> 1): multiply by the vanishing bracket prefactor.
      RatFunc g = ck * (hpow(2) - hpow(-2));
      auto evalq = [&](double q) {
        return g.eval({{hid, Cx(std::sqrt(q), 0.0)}});
      };
      Cx v6 = evalq(1.0 + 1e-6), v8 = evalq(1.0 + 1e-8);
      if (!(std::abs(v6) < 1e6) || !(std::abs(v8) < 1e6))
        throw std::domain_error("delta coefficient diverges in the q -> 1 limit");
      if (std::abs(v6 - v8) > 1e-5)
        throw std::domain_error("delta coefficient drifts in the q -> 1 limit");
      res.constants["q_limit[" + std::to_string(k - 1) + "]"] = v8;
      res.constants["residue[" + std::to_string(k - 1) + "]"] =
          ck.eval({{hid, Cx(1.13, 0.0)}});
    }

    for (size_t i = 1; i < norms.size(); ++i)
      if (!(norms[i] == norms[0]))
        throw std::domain_error("normalization constants differ between delta terms: " +
                                norms[0].str() + " vs " + norms[i].str());
    if (!norms.empty())
      res.constants["normalization"] = norms[0].eval({{hid, Cx(1.13, 0.0)}});

    res.status = Status::pass;
    res.exact_zero = true;
  } catch (const std::exception& e) {
    res.status = Status::fail;
    res.note = e.what();
  }
  res.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  return res;
}

} // namespace qca
