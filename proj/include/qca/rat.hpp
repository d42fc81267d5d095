#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <string>

namespace qca {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;
using Cx = std::complex<double>;

inline Rat rat(long long n, long long d = 1) { return Rat(n, d); }

inline Int rat_num(const Rat& r) { return numerator(r); }
inline Int rat_den(const Rat& r) { return denominator(r); }

inline bool is_integer(const Rat& r) { return denominator(r) == 1; }

// Exponent helper; negative exponents require a nonzero base.
Rat rat_pow(const Rat& base, long long e);

inline double rat_double(const Rat& r) { return r.template convert_to<double>(); }

std::string rat_str(const Rat& r);

// Parses "n" or "n/d"; throws std::invalid_argument on junk.
Rat rat_parse(const std::string& s);

} // namespace qca
