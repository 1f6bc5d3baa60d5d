#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace kuothom {

/// Exact rational coefficient. GMP keeps every arithmetic result in lowest
/// terms with a positive denominator; values built from a numerator and
/// denominator must go through make_rational.
using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  return make_rational(Integer(static_cast<long>(num)), Integer(static_cast<long>(den)));
}

/// "a" for integers, "a/b" otherwise.
inline std::string to_string(const Rational& q) { return q.get_str(); }

inline double to_double(const Rational& q) { return q.get_d(); }

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

}  // namespace kuothom
