#include <doctest.h>

#include "mvph/error.hpp"
#include "mvph/json_io.hpp"
#include "mvph/polynomial.hpp"
#include "mvph/univariate.hpp"
#include "support.hpp"

using namespace mvph;
using namespace mvph::testing;

namespace {

const char* kWishartQ = "1 + 2*s1 + 4*s2 + 4*s3 + s1^2 + 4*s1*s2 + 4*s1*s3 + 3*s2^2 + 8*s2*s3 + 3*s3^2";

// det(I + s1 H1 + s2 H2 + s3 H3) written out by hand.
double wishart_det(double s1, double s2, double s3) {
  const double a = 1 + s1 + 2 * s2 + 3 * s3;
  const double b = s2;
  const double d = 1 + s1 + 2 * s2 + s3;
  return a * d - b * b;
}

}  // namespace

TEST_CASE("rational parsing accepts fractions and decimals") {
  CHECK(parse_rational("3/6") == Rational(1, 2));
  CHECK(parse_rational("-0.125") == Rational(-1, 8));
  CHECK(parse_rational("7") == Rational(7));
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("abc"), ParseError);
  CHECK(to_string(frac(-4, 6)) == "-2/3");
  CHECK(exact_rational(0.1) != Rational(1, 10));
  CHECK(to_double(exact_rational(0.1)) == 0.1);
}

TEST_CASE("poly_add examples") {
  CHECK((poly("s1", 1) + poly("-s1", 1)).is_zero());
  CHECK(poly("1 + s1", 2) + poly("s2", 2) == poly("1 + s1 + s2", 2));
  const Polynomial lin = poly("1 + 2*s1 + 4*s2 + 4*s3", 3);
  const Polynomial quad = poly("s1^2 + 4*s1*s2 + 4*s1*s3 + 3*s2^2 + 8*s2*s3 + 3*s3^2", 3);
  CHECK(lin + quad == poly(kWishartQ, 3));
  CHECK_THROWS_AS(poly("s1", 1) + poly("s1", 2), DomainError);
}

TEST_CASE("poly_mul examples") {
  const Polynomial Q = poly("1 + s1 + 2*s2 + 3*s3", 3) * poly("1 + s1 + 2*s2 + s3", 3) -
                       pow(poly("s2", 3), 2);
  CHECK(Q == poly(kWishartQ, 3));
  Rng rng(5);
  for (int k = 0; k < 20; ++k) {
    const double s1 = rng.uniform() * 3, s2 = rng.uniform() * 3, s3 = rng.uniform() * 3;
    CHECK(eval(Q, {s1, s2, s3}) == doctest::Approx(wishart_det(s1, s2, s3)).epsilon(1e-13));
  }
  const Polynomial p = poly("2 - s1 s2 + 3/4 s2^3", 2);
  CHECK(p * Polynomial::constant(2, 1) == p);
  const Polynomial prod = poly("s1 + s2", 2) * poly("s1 + 3*s2", 2);
  CHECK(prod == poly("s1^2 + 4*s1*s2 + 3*s2^2", 2));
  for (int k = 0; k < 10; ++k) {
    const auto x = random_point(rng, 2);
    CHECK(eval_q(prod, x) == (x[0] + x[1]) * (x[0] + 3 * x[1]));
  }
}

TEST_CASE("poly_eval examples") {
  const Polynomial Q = poly(kWishartQ, 3);
  CHECK(eval_q(Q, {0, 0, 0}) == 1);
  CHECK(eval_q(Q, {1, 0, 0}) == Rational(wishart_det(1, 0, 0)));
  CHECK(eval_q(Q, {1, 0, 0}) == 4);
  CHECK(eval_q(poly("s1^2*s3 + 4*s2^3", 3), {1, 1, 1}) == 5);
  CHECK(eval(poly("s1^2*s3 + 4*s2^3", 3), {1, 1, 1}) == 5.0);
  CHECK_THROWS_AS(eval(Q, {1, 2}), DomainError);
}

TEST_CASE("leading_part examples") {
  CHECK(leading_part(poly("2 + s1 - 3*s2 + s1^2*s3 + 4*s2^3", 3)) == poly("s1^2*s3 + 4*s2^3", 3));
  CHECK(leading_part(Polynomial::constant(2, 5)) == Polynomial::constant(2, 5));
  CHECK(leading_part(poly(kWishartQ, 3)) ==
        poly("s1^2 + 4*s1*s2 + 4*s1*s3 + 3*s2^2 + 8*s2*s3 + 3*s3^2", 3));
  CHECK_THROWS_AS(leading_part(Polynomial(3)), DomainError);
}

TEST_CASE("poly_divides examples") {
  const Polynomial g = poly("s1 + s2", 2);
  const auto h = poly_divides(g, g * g);
  REQUIRE(h.has_value());
  CHECK(*h == g);

  const Polynomial Q = poly(kWishartQ, 3);
  CHECK_FALSE(poly_divides(poly("1 + s1", 3), Q).has_value());
  // Oracle: 1 + s1 vanishes on s1 = -1 where Q does not.
  CHECK(eval_q(Q, {-1, 1, 0}) != 0);

  const auto one = poly_divides(Q, Q);
  REQUIRE(one.has_value());
  CHECK(*one == Polynomial::constant(3, 1));
  CHECK_THROWS_AS(poly_divides(Polynomial(3), Q), DomainError);
}

TEST_CASE("rt_eval examples") {
  RationalTransform t{0, Polynomial::constant(3, 1), poly(kWishartQ, 3), true};
  CHECK_NOTHROW(t.validate());
  const std::vector<double> origin{0, 0, 0}, e1{1, 0, 0};
  CHECK(rt_eval(t, origin) == 1.0);
  CHECK(rt_eval(t, e1) == 1.0 / wishart_det(1, 0, 0));
  CHECK(rt_eval(t, e1) == 0.25);

  RationalTransform point_mass{1, Polynomial(2), Polynomial::constant(2, 1), true};
  CHECK_NOTHROW(point_mass.validate());
  const std::vector<double> x{3.5, 0.25};
  CHECK(rt_eval(point_mass, x) == 1.0);

  RationalTransform pole{0, Polynomial::constant(1, 1), poly("1 + s1", 1), true};
  const std::vector<double> at_pole{-1};
  CHECK_THROWS_AS(rt_eval(pole, at_pole), DomainError);
}

TEST_CASE("transform invariants are enforced") {
  RationalTransform bad_origin{0, Polynomial::constant(1, 2), poly("1 + s1", 1), true};
  CHECK_THROWS_AS(bad_origin.validate(), DomainError);
  RationalTransform improper{0, poly("1 + s1", 1), poly("1 + s1", 1), true};
  CHECK_THROWS_AS(improper.validate(), DomainError);
  RationalTransform zero_den{0, Polynomial::constant(1, 1), poly("s1", 1), true};
  CHECK_THROWS_AS(zero_den.validate(), DomainError);
  RationalTransform atom{Rational(3, 10), Polynomial::constant(1, Rational(7, 10)), poly("1 + s1", 1), true};
  CHECK_NOTHROW(atom.validate());
}

TEST_CASE("ring axioms on random polynomials") {
  Rng rng(101);
  for (int k = 0; k < 20; ++k) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform_int(1, 4));
    const Polynomial a = random_polynomial(rng, n, 3, 5);
    const Polynomial b = random_polynomial(rng, n, 3, 5);
    const Polynomial c = random_polynomial(rng, n, 3, 5);
    CHECK((a * b) * c == a * (b * c));
    CHECK((a + b) + c == a + (b + c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a * b == b * a);
    CHECK(a + b == b + a);
    CHECK((a - a).is_zero());
  }
}

TEST_CASE("evaluation is a ring homomorphism") {
  Rng rng(202);
  for (int k = 0; k < 20; ++k) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform_int(1, 4));
    const Polynomial a = random_polynomial(rng, n, 3, 5);
    const Polynomial b = random_polynomial(rng, n, 3, 5);
    const auto x = random_point(rng, n);
    CHECK(eval_q(a * b, x) == eval_q(a, x) * eval_q(b, x));
    CHECK(eval_q(a + b, x) == eval_q(a, x) + eval_q(b, x));
  }
}

TEST_CASE("leading parts multiply") {
  Rng rng(303);
  for (int k = 0; k < 30; ++k) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform_int(1, 4));
    const Polynomial a = random_polynomial(rng, n, 3, 5);
    const Polynomial b = random_polynomial(rng, n, 3, 5);
    if (a.is_zero() || b.is_zero()) continue;
    CHECK(leading_part(a * b) == leading_part(a) * leading_part(b));
  }
}

TEST_CASE("divisibility answers are consistent") {
  Rng rng(404);
  for (int k = 0; k < 20; ++k) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform_int(1, 3));
    const Polynomial g = random_polynomial(rng, n, 2, 4);
    const Polynomial h = random_polynomial(rng, n, 2, 4);
    if (g.is_zero() || h.is_zero() || g.degree() == 0) continue;
    const auto q = poly_divides(g, g * h);
    REQUIRE(q.has_value());
    CHECK(g * *q == g * h);

    const Polynomial f = g * h + Polynomial::variable(n, 0) * pow(Polynomial::variable(n, 0), g.degree() - 1) +
                         Polynomial::constant(n, 1);
    const auto none = poly_divides(g, f);
    if (none) {
      CHECK(g * *none == f);
      continue;
    }
    // The remainder must be visibly nonzero somewhere.
    const Polynomial r = divide(f, g).remainder;
    CHECK_FALSE(r.is_zero());
    bool witnessed = false;
    for (int t = 0; t < 50 && !witnessed; ++t) witnessed = eval_q(r, random_point(rng, n)) != 0;
    CHECK(witnessed);
    const DivisionResult d = divide(f, g);
    CHECK(g * d.quotient + d.remainder == f);
  }
}

TEST_CASE("substitution composes with evaluation") {
  Rng rng(505);
  const Polynomial p = random_polynomial(rng, 3, 3, 6);
  const std::vector<Polynomial> images{poly("s1 + s2", 2), poly("2*s2", 2), poly("1 - s1", 2)};
  const Polynomial c = substitute(p, images);
  for (int k = 0; k < 10; ++k) {
    const auto x = random_point(rng, 2);
    CHECK(eval_q(c, x) == eval_q(p, {x[0] + x[1], 2 * x[1], 1 - x[0]}));
  }
}

TEST_CASE("polynomial JSON round trip is bit-exact") {
  Rng rng(606);
  for (int k = 0; k < 20; ++k) {
    const Polynomial p = random_polynomial(rng, 3, 4, 8);
    const Json j = to_json(p);
    CHECK(polynomial_from_json(j) == p);
    CHECK(to_json(polynomial_from_json(parse_json(j.dump()))).dump() == j.dump());
  }
  const Json expr = parse_json(R"({"n": 3, "expr": "s1^2*s3 + 4*s2^3"})");
  CHECK(polynomial_from_json(expr) == poly("s1^2*s3 + 4*s2^3", 3));
  const Json terms = parse_json(R"({"n": 3, "terms": [{"e": [2,0,1], "c": "1"}, {"e": [0,3,0], "c": "4"}]})");
  CHECK(polynomial_from_json(terms) == poly("s1^2*s3 + 4*s2^3", 3));
  CHECK_THROWS_AS(parse_json("{"), ParseError);
}

TEST_CASE("Sturm root counting") {
  // (x - 1)(x - 2)(x^2 + 1)
  const UPoly p{2, -3, 3, -3, 1};
  CHECK(count_real_roots(p) == 2);
  // (x - 1)^2 (x + 1) has square-free part of degree 2.
  const UPoly q{1, -1, -1, 1};
  CHECK(degree(squarefree_part(q)) == 2);
  CHECK(count_real_roots(q) == 2);
  CHECK(count_real_roots(UPoly{1, 0, 1}) == 0);
  CHECK(count_real_roots(UPoly{Rational(-1, 4), 0, 0, 1}) == 1);
}
