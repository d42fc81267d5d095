#include "qca/geom.hpp"

#include <stdexcept>

namespace qca {

GeomBracket geom_canonical(const GeomBracket& b) {
  GeomBracket out;
  for (const auto& t : b) {
    bool merged = false;
    for (auto& u : out)
      if (u.r == t.r) {
        u.alpha += t.alpha;
        merged = true;
        break;
      }
    if (!merged) out.push_back(t);
  }
  std::erase_if(out, [](const GeomTerm& t) { return t.alpha == 0; });
  return out;
}

RatFunc geom_bracket_value(const GeomBracket& b, int n) {
  if (n == 0) throw std::domain_error("geom_bracket_value at n = 0");
  int m = n > 0 ? n : -n;
  RatFunc acc;
  for (const auto& t : b) acc = acc + RatFunc(t.alpha) * t.r.pow(m);
  acc = acc * RatFunc(Rat(1, m));
  return n > 0 ? acc : -acc;
}

GeomClosedForm geom_closed_form(const GeomBracket& b0, const std::string& xvar,
                                int series_order, int order_cap) {
  if (series_order > order_cap)
    throw std::domain_error("geom_closed_form: series order beyond cap");
  GeomBracket b = geom_canonical(b0);
  bool all_int = true;
  for (const auto& t : b)
    if (!is_integer(t.alpha)) all_int = false;

  GeomClosedForm out;
  if (all_int) {
    // exp(sum_n x^n/n sum_j a_j r_j^n) = prod_j (1 - r_j x)^{-a_j}
    RatFunc x = RatFunc::var(xvar);
    RatFunc acc(Rat(1));
    for (const auto& t : b) {
      RatFunc base = RatFunc(Rat(1)) - t.r * x;
      acc = acc * base.pow(-static_cast<int>(t.alpha.template convert_to<long long>()));
    }
    out.closed = true;
    out.rf = acc;
    return out;
  }

  // Non-integer weight: truncated exponential series, flagged non-closed.
  TruncSeries expo(series_order);
  for (int n = 1; n <= series_order; ++n) {
    RatFunc acc;
    for (const auto& t : b) acc = acc + RatFunc(t.alpha) * t.r.pow(n);
    expo.set_coeff(n, acc * RatFunc(Rat(1, n)));
  }
  out.closed = false;
  out.series = expo.exp_series();
  return out;
}

} // namespace qca
