#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace mvph {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "a", "a/b", or a plain decimal such as "-0.125" into a canonical
/// rational. Throws ParseError on anything else.
Rational parse_rational(std::string_view text);

/// Canonical "a/b" (or "a" when the denominator is one).
std::string to_string(const Rational& q);

/// Exact value of a finite double.
Rational exact_rational(double x);

inline double to_double(const Rational& q) { return q.get_d(); }

inline int sign(const Rational& q) { return sgn(q); }

/// True when q is the square of a rational; sets *root to the non-negative
/// square root in that case.
bool rational_sqrt(const Rational& q, Rational* root);

}  // namespace mvph
