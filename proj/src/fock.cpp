#include "qca/fock.hpp"

#include <stdexcept>

namespace qca {

const GeomBracket* ModeTable::find(const std::string& f1,
                                   const std::string& f2) const {
  for (auto& [a, b, g] : brackets)
    if ((a == f1 && b == f2) || (a == f2 && b == f1)) return &g;
  return nullptr;
}

RatFunc ModeTable::bracket_value(const std::string& f1, const std::string& f2,
                                 long n) const {
  const GeomBracket* g = find(f1, f2);
  if (!g) throw std::domain_error("no bracket stored for " + f1 + "," + f2);
  return geom_bracket_value(*g, n);
}

namespace {

// Positions i < j < k < l with chords (i,k),(j,l) cross.
bool chords_cross(const std::pair<int, int>& c1, const std::pair<int, int>& c2) {
  auto [a, b] = c1;
  auto [c, d] = c2;
  return (a < c && c < b && b < d) || (c < a && a < d && d < b);
}

void wick_rec(const std::vector<int>& parities,
              const std::function<Cx(int, int)>& pv, std::vector<int>& open,
              std::vector<std::pair<int, int>>& chords, Cx acc, Cx& total) {
  if (open.empty()) {
    int sign = 1;
    for (size_t i = 0; i < chords.size(); ++i)
      for (size_t j = i + 1; j < chords.size(); ++j)
        if (chords_cross(chords[i], chords[j]) &&
            parities[chords[i].first] == 1 && parities[chords[j].first] == 1)
          sign = -sign;
    total += double(sign) * acc;
    return;
  }
  int first = open.front();
  for (size_t k = 1; k < open.size(); ++k) {
    int mate = open[k];
    if (parities[first] != parities[mate]) continue; // mixed pairings vanish
    Cx v = pv(first, mate);
    if (v == Cx{}) continue;
    std::vector<int> rest;
    rest.reserve(open.size() - 2);
    for (size_t m = 1; m < open.size(); ++m)
      if (m != k) rest.push_back(open[m]);
    chords.emplace_back(first, mate);
    wick_rec(parities, pv, rest, chords, acc * v, total);
    chords.pop_back();
  }
}

} // namespace

Cx graded_wick_sum(const std::vector<int>& parities,
                   const std::function<Cx(int, int)>& pair_value) {
  if (parities.size() % 2 != 0) return {};
  std::vector<int> open(parities.size());
  for (size_t i = 0; i < open.size(); ++i) open[i] = static_cast<int>(i);
  std::vector<std::pair<int, int>> chords;
  Cx total{};
  wick_rec(parities, pair_value, open, chords, Cx(1.0, 0.0), total);
  return total;
}

Cx fock_pairing(const FockVector& bra, const FockVector& ket,
                const std::function<std::function<Cx(Cx)>(const std::string&,
                                                          const std::string&)>& xkernel,
                const Keyhole& kh) {
  if (bra.parts.size() != ket.parts.size()) return {};
  const size_t n = bra.parts.size();
  if (n == 0) return Cx(1.0, 0.0);

  // Word order: bra entries reversed (innermost next to the ket), then ket.
  std::vector<const SmearHandle*> word;
  std::vector<int> parities;
  for (size_t i = 0; i < n; ++i) {
    word.push_back(&bra.parts[n - 1 - i]);
    parities.push_back(bra.parts[n - 1 - i].parity);
  }
  for (size_t i = 0; i < n; ++i) {
    word.push_back(&ket.parts[i]);
    parities.push_back(ket.parts[i].parity);
  }

  auto pv = [&](int i, int j) -> Cx {
    // only bra-ket contractions survive
    bool i_bra = i < static_cast<int>(n), j_bra = j < static_cast<int>(n);
    if (i_bra == j_bra) return {};
    const SmearHandle* b = i_bra ? word[i] : word[j];
    const SmearHandle* k = i_bra ? word[j] : word[i];
    return pairing_regularized(b->fn, k->fn, xkernel(b->family, k->family), kh).value;
  };
  return graded_wick_sum(parities, pv);
}

} // namespace qca
