#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mvph/rational.hpp"

namespace mvph {

/// Exponent vector s_1^{e_1} ... s_n^{e_n}.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::vector<unsigned> exponents);
  static Monomial one(std::size_t nvars);
  static Monomial unit(std::size_t nvars, std::size_t j);

  std::size_t nvars() const { return exps_.size(); }
  unsigned degree() const { return degree_; }
  unsigned operator[](std::size_t j) const { return exps_[j]; }
  const std::vector<unsigned>& exponents() const { return exps_; }

  bool divides(const Monomial& other) const;
  Monomial operator*(const Monomial& other) const;
  /// Requires divides(other) from the right: returns this / other.
  Monomial operator/(const Monomial& other) const;

  bool operator==(const Monomial& other) const = default;

 private:
  std::vector<unsigned> exps_;
  unsigned degree_ = 0;
};

/// Graded lexicographic order, largest first (s_1 > s_2 > ... > s_n).
struct GrlexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

/// Sparse multivariate polynomial over Q. Zero coefficients are never stored,
/// so two polynomials are equal iff their term maps are equal.
class Polynomial {
 public:
  using Terms = std::map<Monomial, Rational, GrlexGreater>;

  Polynomial() = default;
  explicit Polynomial(std::size_t nvars) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, const Rational& c);
  /// s_j (0-based j), optionally scaled.
  static Polynomial variable(std::size_t nvars, std::size_t j,
                             const Rational& c = 1);
  /// Parses expressions such as "1 + 2*s1 - 3/2 s2^2 s3". Variables are
  /// s1..sn (1-based, as customary in print).
  static Polynomial parse(std::string_view text, std::size_t nvars);

  std::size_t nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  /// Total degree; -1 for the zero polynomial.
  int degree() const;
  bool is_homogeneous() const;

  Rational coefficient(const Monomial& m) const;
  Rational constant_term() const;

  void add_term(const Monomial& m, const Rational& c);

  Rational evaluate(std::span<const Rational> point) const;
  double evaluate(std::span<const double> point) const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Rational& c);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
  friend bool operator==(const Polynomial& a, const Polynomial& b);

  std::string to_string() const;

 private:
  std::size_t nvars_ = 0;
  Terms terms_;
};

Polynomial pow(const Polynomial& p, unsigned k);

/// Homogeneous part of maximal total degree. Throws DomainError for zero.
Polynomial leading_part(const Polynomial& p);

struct DivisionResult {
  Polynomial quotient;
  Polynomial remainder;
};

/// Multivariate division of f by a single divisor g under grlex.
DivisionResult divide(const Polynomial& f, const Polynomial& g);

/// Returns h with f = g*h, or nullopt when g does not divide f. A single
/// divisor is a Groebner basis of its ideal, so a zero remainder decides
/// divisibility.
std::optional<Polynomial> poly_divides(const Polynomial& g, const Polynomial& f);

/// p(images[0], ..., images[n-1]); all images share one variable count.
Polynomial substitute(const Polynomial& p, const std::vector<Polynomial>& images);

/// A candidate joint Laplace transform p0 + num/den.
struct RationalTransform {
  Rational p0;
  Polynomial num;
  Polynomial den;
  bool coprime_declared = false;

  std::size_t nvars() const { return den.nvars(); }

  /// Checks the structural invariants: p0 in [0,1], den(0) != 0,
  /// num(0)/den(0) = 1 - p0, and deg num < deg den unless num = 0.
  /// Throws DomainError naming the first violation.
  void validate() const;
};

/// p0 + num(point)/den(point).
double rt_eval(const RationalTransform& t, std::span<const double> point);

}  // namespace mvph
