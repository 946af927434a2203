#pragma once

#include <cstddef>
#include <vector>

#include "mvph/rational.hpp"

namespace mvph {

/// Dense univariate polynomial over Q, coefficients from degree 0 upward.
/// Trailing zeros are trimmed by every function here.
using UPoly = std::vector<Rational>;

void trim(UPoly& p);
/// -1 for the zero polynomial.
int degree(const UPoly& p);
UPoly derivative(const UPoly& p);

struct UDivision {
  UPoly quotient;
  UPoly remainder;
};
UDivision divmod(const UPoly& a, const UPoly& b);

/// Monic gcd; zero when both inputs are zero.
UPoly gcd(UPoly a, UPoly b);
UPoly squarefree_part(const UPoly& p);

/// Number of distinct real roots via a Sturm sequence. p must be nonzero.
int count_real_roots(const UPoly& p);

}  // namespace mvph
