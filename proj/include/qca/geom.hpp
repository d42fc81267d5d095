#pragma once

#include "qca/series.hpp"

namespace qca {

// Mode bracket in geometric-sum form: [x_n, y_{-n}] = (1/n) sum_j alpha_j r_j^n
// for n > 0, with the n < 0 branch fixed by antisymmetry.
struct GeomTerm {
  Rat alpha;
  RatFunc r;
};
using GeomBracket = std::vector<GeomTerm>;

// Merges equal ratios, drops zero weights.
GeomBracket geom_canonical(const GeomBracket& b);

// Value of (1/n) sum_j alpha_j r_j^n for n != 0 (negative n uses antisymmetry:
// bracket(n) = -bracket(-n) with r -> r, i.e. the closed form below).
RatFunc geom_bracket_value(const GeomBracket& b, int n);

struct GeomClosedForm {
  bool closed = true;   // false: series fallback (non-integer weight)
  RatFunc rf;           // valid when closed
  TruncSeries series;   // valid when !closed
};

// Contraction exponent sum_{n>=1} x^n/n * sum_j alpha_j r_j^n exponentiates to
// prod_j (1 - r_j x)^{-alpha_j}.  Integer alpha gives the exact rational form;
// otherwise the truncated exponential series is returned, flagged non-closed.
// Throws std::domain_error if the requested order exceeds `order_cap`.
GeomClosedForm geom_closed_form(const GeomBracket& b, const std::string& xvar,
                                int series_order = kDefaultSeriesOrder,
                                int order_cap = 256);

} // namespace qca
