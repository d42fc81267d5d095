#include "qca/series.hpp"

#include <stdexcept>

namespace qca {

TruncSeries TruncSeries::constant(const RatFunc& c, int order) {
  TruncSeries s(order);
  s.c_[0] = c;
  return s;
}

TruncSeries TruncSeries::x(int order) {
  TruncSeries s(order);
  if (order >= 1) s.c_[1] = RatFunc(Rat(1));
  return s;
}

TruncSeries TruncSeries::operator+(const TruncSeries& o) const {
  TruncSeries r(std::min(order_, o.order_));
  for (int n = 0; n <= r.order_; ++n) r.c_[n] = c_[n] + o.c_[n];
  return r;
}

TruncSeries TruncSeries::operator-(const TruncSeries& o) const {
  TruncSeries r(std::min(order_, o.order_));
  for (int n = 0; n <= r.order_; ++n) r.c_[n] = c_[n] - o.c_[n];
  return r;
}

TruncSeries TruncSeries::operator*(const TruncSeries& o) const {
  TruncSeries r(std::min(order_, o.order_));
  for (int n = 0; n <= r.order_; ++n) {
    RatFunc acc;
    for (int k = 0; k <= n; ++k) acc = acc + c_[k] * o.c_[n - k];
    r.c_[n] = acc;
  }
  return r;
}

TruncSeries TruncSeries::scaled(const RatFunc& s) const {
  TruncSeries r(order_);
  for (int n = 0; n <= order_; ++n) r.c_[n] = c_[n] * s;
  return r;
}

TruncSeries TruncSeries::exp_series() const {
  if (!c_[0].is_zero())
    throw std::domain_error("TruncSeries::exp_series needs zero constant term");
  TruncSeries f(order_);
  f.c_[0] = RatFunc(Rat(1));
  // f' = g' f  =>  n f_n = sum_{k=1}^{n} k g_k f_{n-k}
  for (int n = 1; n <= order_; ++n) {
    RatFunc acc;
    for (int k = 1; k <= n; ++k) acc = acc + c_[k] * RatFunc(Rat(k)) * f.c_[n - k];
    f.c_[n] = acc * RatFunc(Rat(1, n));
  }
  return f;
}

bool TruncSeries::agrees_with(const TruncSeries& o) const {
  int n = std::min(order_, o.order_);
  for (int k = 0; k <= n; ++k)
    if (!(c_[k] == o.c_[k])) return false;
  return true;
}

} // namespace qca
