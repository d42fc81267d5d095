#include "qca/algdsl.hpp"

#include "qca/numeval.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace qca {

namespace {

enum class Tok {
  ident, number, lbrace, rbrace, lparen, rparen, semi, comma, eq,
  plus, minus, star, slash, caret, end
};

struct Token {
  Tok k;
  std::string text;
  int line = 1, col = 1;
  bool glued = false; // no whitespace between this token and the previous one
};

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  bool glued = false;
  size_t i = 0;
  auto push = [&](Tok k, std::string t, int l, int c) {
    out.push_back({k, std::move(t), l, c, glued});
    glued = true;
  };
  while (i < s.size()) {
    char ch = s[i];
    if (ch == '\n') {
      ++line;
      col = 1;
      ++i;
      glued = false;
      continue;
    }
    if (ch == ' ' || ch == '\t' || ch == '\r') {
      ++i;
      ++col;
      glued = false;
      continue;
    }
    if (ch == '#') {
      while (i < s.size() && s[i] != '\n') ++i;
      glued = false;
      continue;
    }
    int l = line, c = col;
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      size_t j = i;
      while (j < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
        ++j;
      push(Tok::ident, s.substr(i, j - i), l, c);
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      push(Tok::number, s.substr(i, j - i), l, c);
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    Tok k;
    switch (ch) {
      case '{': k = Tok::lbrace; break;
      case '}': k = Tok::rbrace; break;
      case '(': k = Tok::lparen; break;
      case ')': k = Tok::rparen; break;
      case ';': k = Tok::semi; break;
      case ',': k = Tok::comma; break;
      case '=': k = Tok::eq; break;
      case '+': k = Tok::plus; break;
      case '-': k = Tok::minus; break;
      case '*': k = Tok::star; break;
      case '/': k = Tok::slash; break;
      case '^': k = Tok::caret; break;
      default:
        throw ParseError(l, c, std::string("unexpected character '") + ch + "'");
    }
    push(k, std::string(1, ch), l, c);
    ++col;
    ++i;
  }
  out.push_back({Tok::end, "", line, col, false});
  return out;
}

// Does the factor carry a leading minus sign?  The sign lives on the left
// spine of the mul/div tree after parsing (e.g. -cosh(..)/cosh(..)).
bool is_neg_factor(const SymPtr& f) {
  if (f->kind == SymKind::rat_const) return f->value < 0;
  if (f->kind == SymKind::mul || f->kind == SymKind::div) return is_neg_factor(f->a);
  return false;
}

// Scalar product for linear-form coefficients: folds rational constants and
// drops unit factors so round-tripped coefficients stay structurally stable.
SymPtr smul(const SymPtr& a, const SymPtr& b) {
  if (a->kind == SymKind::rat_const && b->kind == SymKind::rat_const)
    return SymExpr::rc(a->value * b->value);
  if (a->kind == SymKind::rat_const && a->value == Rat(1)) return b;
  if (b->kind == SymKind::rat_const && b->value == Rat(1)) return a;
  if (b->kind == SymKind::rat_const) return SymExpr::mul(b, a);
  return SymExpr::mul(a, b);
}

class Parser {
public:
  explicit Parser(const std::string& text) : ts_(lex(text)) {}

  AlgebraSpec run() {
    expect_kw("algebra");
    spec_.name = expect(Tok::ident, "algebra name").text;
    expect(Tok::lbrace, "'{'");
    while (!peek_is(Tok::rbrace)) parse_item();
    expect(Tok::rbrace, "'}'");
    expect(Tok::end, "end of input");
    validate_names();
    return std::move(spec_);
  }

private:
  std::vector<Token> ts_;
  size_t p_ = 0;
  AlgebraSpec spec_;
  std::vector<std::string> scope_vars_;
  std::set<std::string> zm_symbols_; // in-scope zero modes while parsing fields

  [[noreturn]] void fail(const std::string& m) const {
    const Token& t = ts_[p_ < ts_.size() ? p_ : ts_.size() - 1];
    throw ParseError(t.line, t.col, m);
  }
  const Token& cur() const { return ts_[p_]; }
  const Token& la(size_t n) const {
    return ts_[std::min(p_ + n, ts_.size() - 1)];
  }
  bool peek_is(Tok k) const { return cur().k == k; }
  bool peek_kw(const std::string& w) const {
    return cur().k == Tok::ident && cur().text == w;
  }
  Token expect(Tok k, const std::string& what) {
    if (cur().k != k) fail("expected " + what + ", found '" + cur().text + "'");
    return ts_[p_++];
  }
  void expect_kw(const std::string& w) {
    if (!peek_kw(w)) fail("expected '" + w + "'");
    ++p_;
  }

  bool declared_current(const std::string& n) const {
    return spec_.current(n) != nullptr;
  }

  // A declared current followed by '(' begins here (with sign merging).
  bool current_app_ahead() const {
    if (cur().k != Tok::ident) return false;
    if (la(1).k == Tok::lparen && declared_current(cur().text)) return true;
    if ((la(1).k == Tok::plus || la(1).k == Tok::minus) && la(1).glued &&
        la(2).k == Tok::lparen && la(2).glued &&
        declared_current(cur().text + la(1).text))
      return true;
    return false;
  }

  // Name that may absorb a glued +/- when followed by '('.
  std::string parse_signed_name() {
    std::string n = expect(Tok::ident, "name").text;
    if ((cur().k == Tok::plus || cur().k == Tok::minus) && cur().glued &&
        la(1).k == Tok::lparen && la(1).glued) {
      n += cur().text;
      ++p_;
    }
    return n;
  }

  // ---- expressions ----

  SymPtr parse_expr() {
    SymPtr e = parse_mul();
    while (peek_is(Tok::plus) || peek_is(Tok::minus)) {
      bool add = peek_is(Tok::plus);
      ++p_;
      SymPtr r = parse_mul();
      e = add ? SymExpr::add(e, r) : SymExpr::sub(e, r);
    }
    return e;
  }

  SymPtr parse_mul() {
    SymPtr e = parse_unary();
    while (peek_is(Tok::star) || peek_is(Tok::slash)) {
      bool mul = peek_is(Tok::star);
      ++p_;
      SymPtr r = parse_unary();
      e = mul ? SymExpr::mul(e, r) : SymExpr::div(e, r);
    }
    return e;
  }

  SymPtr parse_unary() {
    if (peek_is(Tok::minus)) {
      ++p_;
      SymPtr x = parse_unary();
      if (x->kind == SymKind::rat_const) return SymExpr::rc(-x->value);
      return SymExpr::mul(SymExpr::rc(Rat(-1)), x);
    }
    if (peek_is(Tok::plus)) {
      ++p_;
      return parse_unary();
    }
    return parse_postfix();
  }

  SymPtr parse_postfix() {
    SymPtr e = parse_primary();
    while (peek_is(Tok::caret)) {
      ++p_;
      expect(Tok::lparen, "'(' after '^'");
      Rat ex = parse_rational();
      expect(Tok::rparen, "')'");
      e = SymExpr::pow(e, ex);
    }
    return e;
  }

  Rat parse_rational() {
    Rat sign(1);
    if (peek_is(Tok::minus)) {
      sign = -1;
      ++p_;
    } else if (peek_is(Tok::plus)) {
      ++p_;
    }
    Rat n = rat_parse(expect(Tok::number, "number").text);
    if (peek_is(Tok::slash)) {
      ++p_;
      Rat d = rat_parse(expect(Tok::number, "number").text);
      if (d == 0) fail("zero denominator in exponent");
      n /= d;
    }
    return sign * n;
  }

  SymPtr parse_primary() {
    if (peek_is(Tok::number))
      return SymExpr::rc(rat_parse(ts_[p_++].text));
    if (peek_is(Tok::lparen)) {
      ++p_;
      SymPtr e = parse_expr();
      expect(Tok::rparen, "')'");
      return e;
    }
    if (!peek_is(Tok::ident)) fail("expected an expression");
    std::string n = cur().text;
    if (n == "pi") {
      ++p_;
      return SymExpr::pi();
    }
    if (n == "i") {
      ++p_;
      return SymExpr::imag();
    }
    if (n == "euler_gamma") {
      ++p_;
      return SymExpr::euler();
    }
    static const std::map<std::string, SymKind> fns{
        {"cosh", SymKind::cosh_fn}, {"sinh", SymKind::sinh_fn},
        {"csch", SymKind::csch_fn}, {"exp", SymKind::exp_fn},
        {"ln", SymKind::ln_fn}};
    auto fit = fns.find(n);
    if (fit != fns.end() && la(1).k == Tok::lparen) {
      ++p_;
      ++p_;
      SymPtr a = parse_expr();
      expect(Tok::rparen, "')'");
      return SymExpr::fn(fit->second, a);
    }
    if (n == "osc" && !zm_symbols_.empty() && la(1).k == Tok::lparen) {
      // oscillator reference inside a field body: osc(mode, weight)
      ++p_;
      ++p_;
      std::string mode = expect(Tok::ident, "mode name").text;
      expect(Tok::comma, "','");
      SymPtr w = parse_expr();
      expect(Tok::rparen, "')'");
      return SymExpr::mul(w, SymExpr::param("__osc__" + mode));
    }
    if (current_app_ahead())
      fail("current '" + cur().text + "' cannot appear inside an expression");
    ++p_;
    if (std::find(scope_vars_.begin(), scope_vars_.end(), n) != scope_vars_.end())
      return SymExpr::var(n);
    return SymExpr::param(n);
  }

  // ---- items ----

  void parse_item() {
    if (peek_kw("param")) {
      ++p_;
      ParamSpec ps;
      ps.name = expect(Tok::ident, "parameter name").text;
      if (peek_is(Tok::eq)) {
        ++p_;
        scope_vars_.clear();
        ps.derived = parse_expr();
      }
      expect(Tok::semi, "';'");
      spec_.params.push_back(std::move(ps));
      return;
    }
    if (peek_kw("central")) {
      ++p_;
      spec_.centrals.push_back(expect(Tok::ident, "central name").text);
      expect(Tok::semi, "';'");
      return;
    }
    if (peek_kw("current")) {
      ++p_;
      CurrentSpec cs;
      cs.name = parse_signed_name();
      expect(Tok::lparen, "'('");
      cs.variable = expect(Tok::ident, "spectral variable").text;
      expect(Tok::rparen, "')'");
      std::string par = expect(Tok::ident, "parity (even|odd)").text;
      if (par != "even" && par != "odd") fail("parity must be 'even' or 'odd'");
      cs.parity = par == "odd" ? 1 : 0;
      cs.kind = (cs.variable == "u" || cs.variable == "v")
                    ? VarKind::rapidity
                    : VarKind::multiplicative;
      expect(Tok::semi, "';'");
      if (declared_current(cs.name)) fail("duplicate current " + cs.name);
      spec_.currents.push_back(std::move(cs));
      return;
    }
    if (peek_kw("bracket")) {
      ++p_;
      parse_bracket();
      return;
    }
    if (peek_kw("realization")) {
      ++p_;
      parse_realization();
      return;
    }
    if (current_app_ahead()) {
      parse_exchange();
      return;
    }
    fail("expected an item (param, central, current, relation, bracket, realization)");
  }

  std::pair<std::string, std::string> parse_app_var() {
    std::string n = parse_signed_name();
    if (!declared_current(n)) fail("unknown current '" + n + "'");
    expect(Tok::lparen, "'('");
    std::string v = expect(Tok::ident, "variable").text;
    expect(Tok::rparen, "')'");
    return {n, v};
  }

  void parse_exchange() {
    RelationSpec rel;
    rel.kind = RelationSpec::exchange;
    auto [x, a] = parse_app_var();
    auto [y, b] = parse_app_var();
    if (a == b) fail("exchange relation needs two distinct variables");
    rel.left = x;
    rel.right = y;
    rel.lvar = a;
    rel.rvar = b;
    expect(Tok::eq, "'='");
    scope_vars_ = {a, b};
    rel.factor = current_app_ahead() ? SymExpr::rc(Rat(1)) : parse_expr();
    auto [y2, b2] = parse_app_var();
    auto [x2, a2] = parse_app_var();
    if (y2 != y || x2 != x || b2 != b || a2 != a)
      fail("exchange relation must close as " + y + "(" + b + ") " + x + "(" + a + ")");
    expect(Tok::semi, "';'");
    spec_.relations.push_back(std::move(rel));
  }

  DeltaTerm parse_delta_term() {
    DeltaTerm dt;
    if (peek_kw("delta_add"))
      dt.additive = true;
    else if (peek_kw("delta_mult"))
      dt.additive = false;
    else
      fail("expected delta_add or delta_mult");
    ++p_;
    expect(Tok::lparen, "'('");
    dt.support = parse_expr();
    expect(Tok::rparen, "')'");
    expect(Tok::star, "'*'");
    dt.coeff = parse_expr();
    std::string tgt = parse_signed_name();
    if (!declared_current(tgt)) fail("unknown current '" + tgt + "'");
    dt.target = tgt;
    expect(Tok::lparen, "'('");
    dt.target_arg = parse_expr();
    expect(Tok::rparen, "')'");
    return dt;
  }

  void parse_bracket() {
    RelationSpec rel;
    rel.kind = RelationSpec::delta_bracket;
    auto [x, a] = parse_app_var();
    auto [y, b] = parse_app_var();
    rel.left = x;
    rel.right = y;
    rel.lvar = a;
    rel.rvar = b;
    rel.anticommutator =
        spec_.current(x)->parity == 1 && spec_.current(y)->parity == 1;
    expect(Tok::eq, "'='");
    scope_vars_ = {a, b};
    DeltaTerm t1 = parse_delta_term();
    t1.sign = +1;
    rel.deltas.push_back(std::move(t1));
    if (peek_is(Tok::plus) || peek_is(Tok::minus)) {
      int sg = peek_is(Tok::plus) ? +1 : -1;
      ++p_;
      DeltaTerm t2 = parse_delta_term();
      t2.sign = sg;
      rel.deltas.push_back(std::move(t2));
    }
    expect(Tok::semi, "';'");
    spec_.relations.push_back(std::move(rel));
  }

  void parse_realization() {
    RealizationSpec rs;
    rs.name = expect(Tok::ident, "realization name").text;
    expect(Tok::lbrace, "'{'");
    while (!peek_is(Tok::rbrace)) {
      if (peek_kw("let")) {
        ++p_;
        std::string n = expect(Tok::ident, "name").text;
        expect(Tok::eq, "'='");
        scope_vars_.clear();
        rs.lets.emplace_back(n, parse_expr());
        expect(Tok::semi, "';'");
      } else if (peek_kw("mode")) {
        ++p_;
        rs.modes.push_back(expect(Tok::ident, "mode name").text);
        expect(Tok::semi, "';'");
      } else if (peek_kw("mbracket")) {
        ++p_;
        RealizationSpec::MBracket mb;
        mb.m1 = expect(Tok::ident, "mode").text;
        mb.m2 = expect(Tok::ident, "mode").text;
        expect(Tok::eq, "'='");
        while (true) {
          expect_kw("geom");
          expect(Tok::lparen, "'('");
          scope_vars_.clear();
          SymPtr alpha = parse_expr();
          expect(Tok::comma, "','");
          SymPtr r = parse_expr();
          expect(Tok::rparen, "')'");
          RatFunc af = sym_to_ratfunc(alpha, {});
          if (!af.is_constant()) fail("geom weight must be rational");
          mb.geom.emplace_back(af.constant(), r);
          if (!peek_is(Tok::comma)) break;
          ++p_;
        }
        expect(Tok::semi, "';'");
        rs.mbrackets.push_back(std::move(mb));
      } else if (peek_kw("zeromodes")) {
        ++p_;
        std::string P = expect(Tok::ident, "momentum symbol").text;
        std::string Q = expect(Tok::ident, "coordinate symbol").text;
        expect(Tok::semi, "';'");
        rs.zeromode_pairs.emplace_back(P, Q);
      } else if (peek_kw("field")) {
        ++p_;
        RealField f;
        f.name = expect(Tok::ident, "field name").text;
        expect(Tok::lparen, "'('");
        f.var = expect(Tok::ident, "variable").text;
        expect(Tok::rparen, "')'");
        expect(Tok::eq, "'='");
        scope_vars_ = {f.var};
        zm_symbols_.clear();
        for (auto& [P, Q] : rs.zeromode_pairs) {
          zm_symbols_.insert(P);
          zm_symbols_.insert(Q);
        }
        for (auto& m : rs.modes) zm_symbols_.insert("__osc__" + m);
        SymPtr body = parse_expr();
        expect(Tok::semi, "';'");
        split_field(body, rs, f);
        zm_symbols_.clear();
        rs.fields.push_back(std::move(f));
      } else if (peek_kw("op")) {
        ++p_;
        RealOp op;
        op.name = parse_signed_name();
        expect(Tok::lparen, "'('");
        op.var = expect(Tok::ident, "variable").text;
        expect(Tok::rparen, "')'");
        expect(Tok::eq, "'='");
        scope_vars_ = {op.var};
        if (peek_kw("vexp")) {
          ++p_;
          op.kind = RealOp::vexp;
          expect(Tok::lparen, "'('");
          op.ref1 = expect(Tok::ident, "field name").text;
          expect(Tok::lparen, "'('");
          op.arg1 = parse_expr();
          expect(Tok::rparen, "')'");
          expect(Tok::rparen, "')'");
        } else if (peek_kw("fuse")) {
          ++p_;
          op.kind = RealOp::fuse;
          expect(Tok::lparen, "'('");
          op.ref1 = parse_signed_name();
          expect(Tok::lparen, "'('");
          op.arg1 = parse_expr();
          expect(Tok::rparen, "')'");
          expect(Tok::comma, "','");
          op.ref2 = parse_signed_name();
          expect(Tok::lparen, "'('");
          op.arg2 = parse_expr();
          expect(Tok::rparen, "')'");
          expect(Tok::rparen, "')'");
        } else {
          fail("expected vexp(...) or fuse(...)");
        }
        expect(Tok::semi, "';'");
        rs.ops.push_back(std::move(op));
      } else {
        fail("unexpected item in realization block");
      }
    }
    expect(Tok::rbrace, "'}'");
    spec_.realizations.push_back(std::move(rs));
  }

  // Splits a field body into oscillator references and a zero-mode linear
  // form; a leftover scalar part is rejected.
  void split_field(const SymPtr& body, const RealizationSpec& rs, RealField& f) {
    std::map<std::string, SymPtr> coeffs;
    SymPtr rem = linear_expand(body, coeffs);
    if (rem) fail("field body has a scalar part: " + sym_str(rem));
    for (auto& [sym, coeff] : coeffs) {
      if (sym.rfind("__osc__", 0) == 0) {
        std::string mode = sym.substr(7);
        if (std::find(rs.modes.begin(), rs.modes.end(), mode) == rs.modes.end())
          fail("unknown mode '" + mode + "'");
        f.osc.emplace_back(mode, coeff);
      } else {
        f.zm.emplace_back(sym, coeff);
      }
    }
  }

  bool contains_zm(const SymPtr& e) const {
    if ((e->kind == SymKind::param || e->kind == SymKind::var) &&
        zm_symbols_.count(e->name))
      return true;
    if (e->a && contains_zm(e->a)) return true;
    if (e->b && contains_zm(e->b)) return true;
    return false;
  }

  // Returns the scalar remainder (null when none); fills coeffs.
  SymPtr linear_expand(const SymPtr& e, std::map<std::string, SymPtr>& coeffs) {
    if (!contains_zm(e)) return e;
    switch (e->kind) {
      case SymKind::param:
      case SymKind::var: {
        add_coeff(coeffs, e->name, SymExpr::rc(Rat(1)));
        return nullptr;
      }
      case SymKind::add:
      case SymKind::sub: {
        std::map<std::string, SymPtr> cb;
        SymPtr ra = linear_expand(e->a, coeffs);
        SymPtr rb = linear_expand(e->b, cb);
        bool sub = e->kind == SymKind::sub;
        for (auto& [n, c] : cb)
          add_coeff(coeffs, n, sub ? smul(SymExpr::rc(Rat(-1)), c) : c);
        if (!ra && !rb) return nullptr;
        if (ra && rb) return sub ? SymExpr::sub(ra, rb) : SymExpr::add(ra, rb);
        if (ra) return ra;
        return sub ? smul(SymExpr::rc(Rat(-1)), rb) : rb;
      }
      case SymKind::mul: {
        bool za = contains_zm(e->a), zb = contains_zm(e->b);
        if (za && zb) fail("zero-mode exponent is nonlinear: " + sym_str(e));
        const SymPtr& lin = za ? e->a : e->b;
        const SymPtr& scal = za ? e->b : e->a;
        std::map<std::string, SymPtr> cl;
        SymPtr rl = linear_expand(lin, cl);
        for (auto& [n, c] : cl) add_coeff(coeffs, n, smul(scal, c));
        return rl ? smul(scal, rl) : nullptr;
      }
      case SymKind::div: {
        if (contains_zm(e->b))
          fail("zero-mode symbol in a denominator: " + sym_str(e));
        std::map<std::string, SymPtr> cl;
        SymPtr rl = linear_expand(e->a, cl);
        for (auto& [n, c] : cl) add_coeff(coeffs, n, SymExpr::div(c, e->b));
        return rl ? SymExpr::div(rl, e->b) : nullptr;
      }
      default:
        fail("zero-mode symbol under a nonlinear head: " + sym_str(e));
    }
  }

  static void add_coeff(std::map<std::string, SymPtr>& coeffs, const std::string& n,
                        const SymPtr& c) {
    auto it = coeffs.find(n);
    if (it == coeffs.end())
      coeffs.emplace(n, c);
    else
      it->second = SymExpr::add(it->second, c);
  }

  // ---- post-parse validation ----

  void validate_names() const {
    std::set<std::string> known;
    for (auto& p : spec_.params) known.insert(p.name);
    for (auto& c : spec_.centrals) known.insert(c);
    for (auto& p : spec_.params)
      if (p.derived) check_expr_names(p.derived, known, {});
    for (auto& r : spec_.relations) {
      std::set<std::string> vs{r.lvar, r.rvar};
      if (r.kind == RelationSpec::exchange) {
        check_expr_names(r.factor, known, vs);
      } else {
        for (auto& d : r.deltas) {
          check_expr_names(d.support, known, vs);
          check_expr_names(d.coeff, known, vs);
          check_expr_names(d.target_arg, known, vs);
        }
      }
    }
  }

  void check_expr_names(const SymPtr& e, const std::set<std::string>& params,
                        const std::set<std::string>& vars) const {
    if (e->kind == SymKind::param || e->kind == SymKind::var) {
      if (!params.count(e->name) && !vars.count(e->name))
        throw ParseError(1, 1, "unknown symbol '" + e->name + "'");
    }
    if (e->a) check_expr_names(e->a, params, vars);
    if (e->b) check_expr_names(e->b, params, vars);
  }
};

} // namespace

const CurrentSpec* AlgebraSpec::current(const std::string& n) const {
  for (auto& c : currents)
    if (c.name == n) return &c;
  return nullptr;
}

const RealizationSpec* AlgebraSpec::realization(const std::string& n) const {
  for (auto& r : realizations)
    if (r.name == n) return &r;
  return nullptr;
}

const RelationSpec* AlgebraSpec::exchange_decl(const std::string& x,
                                               const std::string& y) const {
  for (auto& r : relations)
    if (r.kind == RelationSpec::exchange && r.left == x && r.right == y) return &r;
  return nullptr;
}

std::optional<SymPtr> AlgebraSpec::exchange_factor(const std::string& x,
                                                   const std::string& y,
                                                   std::string* lvar,
                                                   std::string* rvar) const {
  if (const RelationSpec* r = exchange_decl(x, y)) {
    if (lvar) *lvar = r->lvar;
    if (rvar) *rvar = r->rvar;
    return r->factor;
  }
  if (const RelationSpec* r = exchange_decl(y, x)) {
    // Y(b)X(a) = f(b,a) X(a)Y(b)  =>  X(a)Y(b) = f(b,a)^{-1} Y(b)X(a);
    // swap the variable roles so the caller's (lvar, rvar) still reads
    // (variable of x, variable of y).
    if (lvar) *lvar = r->rvar;
    if (rvar) *rvar = r->lvar;
    return SymExpr::div(SymExpr::rc(Rat(1)), r->factor);
  }
  return std::nullopt;
}

namespace {

// Collapses the +/- partners of an even multiplet (H+/H-, psi+/psi-).
std::string current_class(const AlgebraSpec& s, const std::string& n) {
  const CurrentSpec* c = s.current(n);
  if (!c || c->parity == 1 || n.empty()) return n;
  char last = n.back();
  if (last != '+' && last != '-') return n;
  std::string partner = n.substr(0, n.size() - 1) + (last == '+' ? "-" : "+");
  if (s.current(partner)) return n.substr(0, n.size() - 1);
  return n;
}

} // namespace

int AlgebraSpec::family_count() const {
  std::set<std::string> keys;
  for (auto& r : relations) {
    std::string ca = current_class(*this, r.left), cb = current_class(*this, r.right);
    std::string extra;
    if (ca == cb && r.left != r.right) extra = ":cross";
    if (ca == cb && r.left == r.right && current_class(*this, r.left) != r.left)
      extra = ":same";
    std::string lo = std::min(ca, cb), hi = std::max(ca, cb);
    keys.insert((r.kind == RelationSpec::exchange ? "x:" : "b:") + lo + "|" + hi +
                extra);
  }
  return static_cast<int>(keys.size());
}

ParamEnv AlgebraSpec::param_env() const {
  ParamEnv pe;
  for (auto& p : params)
    if (p.derived) pe.add_rule(p.name, p.derived);
  return pe;
}

namespace {

void load_time_checks(const AlgebraSpec& s) {
  // Parity / leading-sign consistency.
  for (auto& r : s.relations) {
    if (r.kind != RelationSpec::exchange) continue;
    bool odd_odd = s.current(r.left)->parity == 1 && s.current(r.right)->parity == 1;
    if (is_neg_factor(r.factor) != odd_odd)
      throw ParseError(1, 1,
                       "parity violation: relation " + r.left + "," + r.right +
                           (odd_odd ? " needs" : " forbids") +
                           " a leading minus sign");
  }

  // Reciprocity f_XY(a,b) * f_YX(b,a) = 1 for self pairs and two-way pairs.
  auto eval_factor = [&s](const RelationSpec& r, bool swapped, const NumEnv& e) {
    ParamEnv pe = s.param_env();
    SymEnv env;
    for (auto& p : s.params)
      if (!p.derived) env[p.name] = e.at(p.name);
    for (auto& c : s.centrals) env[c] = e.at(c);
    {
      ParamEnv pe2 = pe;
      for (auto& [k, v] : env) pe2.set(k, v);
      env = pe2.resolve();
    }
    env[r.lvar] = e.at(swapped ? "__b" : "__a");
    env[r.rvar] = e.at(swapped ? "__a" : "__b");
    return sym_eval(r.factor, env);
  };

  std::vector<std::string> names{"__a", "__b"};
  for (auto& p : s.params)
    if (!p.derived) names.push_back(p.name);
  for (auto& c : s.centrals) names.push_back(c);

  auto check_pair = [&](const RelationSpec& fwd, const RelationSpec& rev,
                        const std::string& what) {
    auto lhs = [&](const NumEnv& e) {
      return eval_factor(fwd, false, e) * eval_factor(rev, true, e);
    };
    auto one = [](const NumEnv&) { return Cx(1.0, 0.0); };
    SampleDomain dom{names, 0.3, 1.1};
    auto res = rand_ident_test(lhs, one, dom, 25, 1e-8, 0xA1B2C3);
    if (!res.pass)
      throw ParseError(1, 1,
                       "reciprocity violation for " + what +
                           " (worst error " + std::to_string(res.max_error) + ")");
  };

  for (auto& r : s.relations) {
    if (r.kind != RelationSpec::exchange) continue;
    if (r.left == r.right) {
      check_pair(r, r, r.left + "," + r.right);
    } else if (const RelationSpec* rev = s.exchange_decl(r.right, r.left)) {
      if (&r < rev) check_pair(r, *rev, r.left + "," + r.right);
    }
  }
}

} // namespace

AlgebraSpec parse_qalg(const std::string& text) {
  Parser p(text);
  AlgebraSpec s = p.run();
  load_time_checks(s);
  return s;
}

namespace {

void print_expr_or_one(std::ostream& os, const SymPtr& f) {
  if (f->kind == SymKind::rat_const && f->value == Rat(1)) return;
  os << sym_str(f) << " ";
}

} // namespace

std::string print_qalg(const AlgebraSpec& s) {
  std::ostringstream os;
  os << "algebra " << s.name << " {\n";
  for (auto& p : s.params) {
    os << "  param " << p.name;
    if (p.derived) os << " = " << sym_str(p.derived);
    os << ";\n";
  }
  for (auto& c : s.centrals) os << "  central " << c << ";\n";
  for (auto& c : s.currents)
    os << "  current " << c.name << "(" << c.variable << ") "
       << (c.parity ? "odd" : "even") << ";\n";
  for (auto& r : s.relations) {
    if (r.kind == RelationSpec::exchange) {
      os << "  " << r.left << "(" << r.lvar << ") " << r.right << "(" << r.rvar
         << ") = ";
      print_expr_or_one(os, r.factor);
      os << r.right << "(" << r.rvar << ") " << r.left << "(" << r.lvar << ");\n";
    } else {
      os << "  bracket " << r.left << "(" << r.lvar << ") " << r.right << "("
         << r.rvar << ") =";
      bool first = true;
      for (auto& d : r.deltas) {
        os << (first ? " " : d.sign > 0 ? " + " : " - ");
        os << (d.additive ? "delta_add(" : "delta_mult(") << sym_str(d.support)
           << ") * (" << sym_str(d.coeff) << ") " << d.target << "("
           << sym_str(d.target_arg) << ")";
        first = false;
      }
      os << ";\n";
    }
  }
  for (auto& rz : s.realizations) {
    os << "  realization " << rz.name << " {\n";
    for (auto& [n, e] : rz.lets) os << "    let " << n << " = " << sym_str(e) << ";\n";
    for (auto& m : rz.modes) os << "    mode " << m << ";\n";
    for (auto& mb : rz.mbrackets) {
      os << "    mbracket " << mb.m1 << " " << mb.m2 << " = ";
      bool first = true;
      for (auto& [a, r] : mb.geom) {
        if (!first) os << ", ";
        os << "geom(" << rat_str(a) << ", " << sym_str(r) << ")";
        first = false;
      }
      os << ";\n";
    }
    for (auto& [P, Q] : rz.zeromode_pairs)
      os << "    zeromodes " << P << " " << Q << ";\n";
    for (auto& f : rz.fields) {
      os << "    field " << f.name << "(" << f.var << ") = ";
      bool first = true;
      for (auto& [m, w] : f.osc) {
        if (!first) os << " + ";
        os << "osc(" << m << ", " << sym_str(w) << ")";
        first = false;
      }
      for (auto& [sym, c] : f.zm) {
        os << (first ? "" : " + ") << "(" << sym_str(c) << ")*" << sym;
        first = false;
      }
      os << ";\n";
    }
    for (auto& op : rz.ops) {
      os << "    op " << op.name << "(" << op.var << ") = ";
      if (op.kind == RealOp::vexp) {
        os << "vexp(" << op.ref1 << "(" << sym_str(op.arg1) << "))";
      } else {
        os << "fuse(" << op.ref1 << "(" << sym_str(op.arg1) << "), " << op.ref2
           << "(" << sym_str(op.arg2) << "))";
      }
      os << ";\n";
    }
    os << "  }\n";
  }
  os << "}\n";
  return os.str();
}

namespace {

bool sym_eq_opt(const SymPtr& a, const SymPtr& b) {
  if (!a && !b) return true;
  if (!a || !b) return false;
  return sym_equal(a, b);
}

} // namespace

bool operator==(const AlgebraSpec& a, const AlgebraSpec& b) {
  if (a.name != b.name || a.centrals != b.centrals) return false;
  if (a.params.size() != b.params.size() || a.currents.size() != b.currents.size() ||
      a.relations.size() != b.relations.size() ||
      a.realizations.size() != b.realizations.size())
    return false;
  for (size_t i = 0; i < a.params.size(); ++i)
    if (a.params[i].name != b.params[i].name ||
        !sym_eq_opt(a.params[i].derived, b.params[i].derived))
      return false;
  for (size_t i = 0; i < a.currents.size(); ++i) {
    const auto& x = a.currents[i];
    const auto& y = b.currents[i];
    if (x.name != y.name || x.variable != y.variable || x.parity != y.parity ||
        x.kind != y.kind)
      return false;
  }
  for (size_t i = 0; i < a.relations.size(); ++i) {
    const auto& x = a.relations[i];
    const auto& y = b.relations[i];
    if (x.kind != y.kind || x.left != y.left || x.right != y.right ||
        x.lvar != y.lvar || x.rvar != y.rvar ||
        x.anticommutator != y.anticommutator ||
        x.deltas.size() != y.deltas.size())
      return false;
    if (x.kind == RelationSpec::exchange && !sym_eq_opt(x.factor, y.factor))
      return false;
    for (size_t j = 0; j < x.deltas.size(); ++j) {
      const auto& dx = x.deltas[j];
      const auto& dy = y.deltas[j];
      if (dx.additive != dy.additive || dx.sign != dy.sign ||
          dx.target != dy.target || !sym_equal(dx.support, dy.support) ||
          !sym_equal(dx.coeff, dy.coeff) ||
          !sym_equal(dx.target_arg, dy.target_arg))
        return false;
    }
  }
  for (size_t i = 0; i < a.realizations.size(); ++i) {
    const auto& x = a.realizations[i];
    const auto& y = b.realizations[i];
    if (x.name != y.name || x.modes != y.modes ||
        x.zeromode_pairs != y.zeromode_pairs || x.lets.size() != y.lets.size() ||
        x.mbrackets.size() != y.mbrackets.size() ||
        x.fields.size() != y.fields.size() || x.ops.size() != y.ops.size())
      return false;
    for (size_t j = 0; j < x.lets.size(); ++j)
      if (x.lets[j].first != y.lets[j].first ||
          !sym_equal(x.lets[j].second, y.lets[j].second))
        return false;
    for (size_t j = 0; j < x.mbrackets.size(); ++j) {
      const auto& mx = x.mbrackets[j];
      const auto& my = y.mbrackets[j];
      if (mx.m1 != my.m1 || mx.m2 != my.m2 || mx.geom.size() != my.geom.size())
        return false;
      for (size_t k = 0; k < mx.geom.size(); ++k)
        if (mx.geom[k].first != my.geom[k].first ||
            !sym_equal(mx.geom[k].second, my.geom[k].second))
          return false;
    }
    for (size_t j = 0; j < x.fields.size(); ++j) {
      const auto& fx = x.fields[j];
      const auto& fy = y.fields[j];
      if (fx.name != fy.name || fx.var != fy.var ||
          fx.osc.size() != fy.osc.size() || fx.zm.size() != fy.zm.size())
        return false;
      for (size_t k = 0; k < fx.osc.size(); ++k)
        if (fx.osc[k].first != fy.osc[k].first ||
            !sym_equal(fx.osc[k].second, fy.osc[k].second))
          return false;
      for (size_t k = 0; k < fx.zm.size(); ++k)
        if (fx.zm[k].first != fy.zm[k].first ||
            !sym_equal(fx.zm[k].second, fy.zm[k].second))
          return false;
    }
    for (size_t j = 0; j < x.ops.size(); ++j) {
      const auto& ox = x.ops[j];
      const auto& oy = y.ops[j];
      if (ox.name != oy.name || ox.var != oy.var || ox.kind != oy.kind ||
          ox.ref1 != oy.ref1 || ox.ref2 != oy.ref2 ||
          !sym_eq_opt(ox.arg1, oy.arg1) || !sym_eq_opt(ox.arg2, oy.arg2))
        return false;
    }
  }
  return true;
}

} // namespace qca
