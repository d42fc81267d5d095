#include "qca/tensorword.hpp"

#include <sstream>
#include <stdexcept>

namespace qca {

int TensorWord::slot_pos(int id) const {
  for (std::size_t i = 0; i < slots.size(); ++i)
    if (slots[i].id == id) return static_cast<int>(i);
  return -1;
}

int TensorWord::level_of(int id) const {
  for (const auto& s : slots)
    if (s.id == id) return s.level;
  throw std::out_of_range("tensor word has no slot with id " + std::to_string(id));
}

static bool is_rat(const SymPtr& x) { return x && x->kind == SymKind::rat_const; }

SymPtr coeff_mul(const SymPtr& x, const SymPtr& y) {
  if (!x) return y;
  if (!y) return x;
  if (is_rat(x) && is_rat(y)) return SymExpr::rc(x->value * y->value);
  if (is_rat(x)) {
    if (x->value == 0) return SymExpr::rc(0);
    if (x->value == 1) return y;
  }
  if (is_rat(y)) {
    if (y->value == 0) return SymExpr::rc(0);
    if (y->value == 1) return x;
  }
  return SymExpr::mul(x, y);
}

SymPtr coeff_add(const SymPtr& x, const SymPtr& y) {
  if (!x) return y;
  if (!y) return x;
  if (is_rat(x) && is_rat(y)) return SymExpr::rc(x->value + y->value);
  if (is_rat(x) && x->value == 0) return y;
  if (is_rat(y) && y->value == 0) return x;
  return SymExpr::add(x, y);
}

bool coeff_is_zero(const SymPtr& x) { return is_rat(x) && x->value == 0; }

bool expr_uses_name(const SymPtr& e, const std::string& name) {
  if (!e) return false;
  if ((e->kind == SymKind::param || e->kind == SymKind::var) && e->name == name) return true;
  return expr_uses_name(e->a, name) || expr_uses_name(e->b, name);
}

SymPtr subst_names(const SymPtr& e, const std::map<std::string, SymPtr>& table) {
  if (!e) return e;
  if (e->kind == SymKind::param || e->kind == SymKind::var) {
    auto it = table.find(e->name);
    return it == table.end() ? e : it->second;
  }
  SymPtr a = subst_names(e->a, table);
  SymPtr b = subst_names(e->b, table);
  if (a == e->a && b == e->b) return e;
  auto n = std::make_shared<SymExpr>(*e);
  n->a = a;
  n->b = b;
  return n;
}

TensorWord tensor_mul(const TensorWord& a, const TensorWord& b) {
  if (a.slots.size() != b.slots.size())
    throw std::logic_error("tensor_mul: words live over different slot layouts");
  for (std::size_t i = 0; i < a.slots.size(); ++i)
    if (a.slots[i].id != b.slots[i].id || a.slots[i].level != b.slots[i].level)
      throw std::logic_error("tensor_mul: words live over different slot layouts");

  TensorWord r;
  r.slots = a.slots;
  r.next_id = std::max(a.next_id, b.next_id);
  for (const auto& ta : a.terms) {
    for (const auto& tb : b.terms) {
      // Sign: each symbol of tb crosses the symbols of ta that live in
      // strictly later slots.
      long cross = 0;
      for (const auto& sy : tb.syms) {
        if (!sy.parity) continue;
        int py = r.slot_pos(sy.slot);
        for (const auto& sx : ta.syms)
          if (sx.parity && r.slot_pos(sx.slot) > py) ++cross;
      }
      TTerm t;
      t.coeff = coeff_mul(ta.coeff, tb.coeff);
      if (cross % 2) t.coeff = coeff_mul(SymExpr::rc(-1), t.coeff);
      for (const auto& sl : r.slots) {
        for (const auto& sx : ta.syms)
          if (sx.slot == sl.id) t.syms.push_back(sx);
        for (const auto& sy : tb.syms)
          if (sy.slot == sl.id) t.syms.push_back(sy);
      }
      r.terms.push_back(std::move(t));
    }
  }
  return r;
}

void resolve_refs(TensorWord& w, const std::function<int(int level)>& charge) {
  for (auto& t : w.terms)
    for (auto& s : t.syms) {
      for (const auto& [sid, mult] : s.arg.ref)
        s.arg.base += mult * charge(w.level_of(sid));
      s.arg.ref.clear();
    }
}

std::string term_key(const TensorWord& w, const TTerm& t) {
  std::ostringstream os;
  for (const auto& s : t.syms) {
    os << w.slot_pos(s.slot) << ':' << s.name;
    if (s.inverted) os << '~';
    os << ':' << s.var << ':' << rat_str(s.arg.base);
    for (const auto& [sid, mult] : s.arg.ref)
      os << "<" << w.slot_pos(sid) << ">" << rat_str(mult);
    os << ';';
  }
  return os.str();
}

static std::string sym_disp(const TensorWord& w, const TSym& s) {
  std::ostringstream os;
  os << s.name;
  if (s.inverted) os << "^-1";
  os << '@' << w.slot_pos(s.slot);
  if (!s.var.empty() || s.arg.base != 0 || !s.arg.ref.empty()) {
    os << '(' << s.var;
    if (s.arg.base != 0) os << '+' << rat_str(s.arg.base) << "*ih";
    for (const auto& [sid, mult] : s.arg.ref)
      os << '+' << rat_str(mult) << "*ih*c<" << w.slot_pos(sid) << '>';
    os << ')';
  }
  return os.str();
}

std::string word_str(const TensorWord& w) {
  std::ostringstream os;
  os << "slots[";
  for (std::size_t i = 0; i < w.slots.size(); ++i)
    os << (i ? "," : "") << w.slots[i].level;
  os << "]";
  for (const auto& t : w.terms) {
    std::string c = t.coeff ? sym_str(t.coeff) : std::string("1");
    if (c.size() > 60) c = c.substr(0, 57) + "...";
    os << "  +  (" << c << ")";
    for (const auto& s : t.syms) os << ' ' << sym_disp(w, s);
    if (t.syms.empty()) os << " 1";
  }
  if (w.terms.empty()) os << "  (zero)";
  return os.str();
}

}  // namespace qca
