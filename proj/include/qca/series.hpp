#pragma once

#include "qca/ratfunc.hpp"

#include <vector>

namespace qca {

inline constexpr int kDefaultSeriesOrder = 24;

// Truncated power series in one expansion variable with RatFunc coefficients.
// Arithmetic truncates to the smaller tracked order; the order travels with
// every result so downstream verdicts can report order-limited status.
class TruncSeries {
public:
  TruncSeries() : order_(kDefaultSeriesOrder), c_(1) {}
  explicit TruncSeries(int order) : order_(order), c_(order + 1) {}
  static TruncSeries constant(const RatFunc& c, int order);
  static TruncSeries x(int order); // the expansion variable itself

  int order() const { return order_; }
  const RatFunc& coeff(int n) const { return c_.at(n); }
  void set_coeff(int n, const RatFunc& v) { c_.at(n) = v; }

  TruncSeries operator+(const TruncSeries& o) const;
  TruncSeries operator-(const TruncSeries& o) const;
  TruncSeries operator*(const TruncSeries& o) const;
  TruncSeries scaled(const RatFunc& s) const;

  // exp of a series with zero constant term; throws std::domain_error else.
  TruncSeries exp_series() const;

  // Coefficient-wise equality up to the smaller order.
  bool agrees_with(const TruncSeries& o) const;

private:
  int order_;
  std::vector<RatFunc> c_;
};

} // namespace qca
