#include <doctest.h>

#include <algorithm>
#include <set>

#include "mvph/criterion.hpp"
#include "mvph/error.hpp"
#include "mvph/json_io.hpp"
#include "mvph/kulkarni.hpp"
#include "support.hpp"

using namespace mvph;
using namespace mvph::testing;

namespace {

const char* kQ = "1 + 2*s1 + 4*s2 + 4*s3 + s1^2 + 4*s1*s2 + 4*s1*s3 + 3*s2^2 + 8*s2*s3 + 3*s3^2";
const char* kQ2 = "s1^2 + 4*s1*s2 + 4*s1*s3 + 3*s2^2 + 8*s2*s3 + 3*s3^2";

QuadraticForm form(const char* text, std::size_t n) {
  return QuadraticForm::from_polynomial(poly(text, n));
}

Polynomial linear_form(const std::vector<Rational>& c) {
  Polynomial p(c.size());
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (sgn(c[j]) != 0) p += Polynomial::variable(c.size(), j, c[j]);
  }
  return p;
}

std::vector<Rational> random_coeffs(Rng& rng, std::size_t n, long lo, long hi) {
  std::vector<Rational> c(n);
  for (auto& v : c) v = frac(rng.uniform_int(lo, hi), rng.uniform_int(1, 3));
  return c;
}

// Checks a factor verdict by multiplying its factors back.
void check_factors(const CriterionVerdict& v, const Polynomial& qtop) {
  const auto* e = std::get_if<FactorEvidence>(&v.evidence);
  REQUIRE(e != nullptr);
  CHECK(expand_factors(*e, qtop.nvars()) == qtop);
  CHECK(verify(v, qtop));
}

}  // namespace

TEST_CASE("extract_qtop examples") {
  CHECK(extract_qtop(poly(kQ, 3)) == poly(kQ2, 3));
  CHECK(extract_qtop(Polynomial::constant(2, 3)) == Polynomial::constant(2, 3));
  CHECK(extract_qtop(poly("1 + s1 + s2 + s1*s2", 2)) == poly("s1*s2", 2));
  CHECK_THROWS_AS(extract_qtop(Polynomial(2)), DomainError);
}

TEST_CASE("factor_quadratic on the Wishart form") {
  const QuadraticForm qf = form(kQ2, 3);
  RationalMatrix M = RationalMatrix::from_rows({{1, 2, 2}, {2, 3, 4}, {2, 4, 3}});
  CHECK(qf.M == M);
  CHECK(determinant(M) == 1);
  const CriterionVerdict v = factor_quadratic(qf);
  CHECK(v.outcome == Outcome::IrreducibleCertified);
  const auto* e = std::get_if<RankEvidence>(&v.evidence);
  REQUIRE(e != nullptr);
  CHECK(e->kind == "rank");
  CHECK(e->minor == 1);
  CHECK(e->rows.size() == 3);
  CHECK(verify(v, poly(kQ2, 3)));
  const Json j = to_json(v);
  CHECK(j["outcome"] == "IRREDUCIBLE_CERTIFIED");
  CHECK(j["evidence"]["kind"] == "rank");
  CHECK(j["evidence"]["detM"] == "1");
}

TEST_CASE("factor_quadratic on split forms") {
  const Polynomial nonneg = poly("s1^2 + 4*s1*s2 + 3*s2^2", 2);
  const CriterionVerdict v = factor_quadratic(QuadraticForm::from_polynomial(nonneg));
  CHECK(v.outcome == Outcome::FactorsNonneg);
  check_factors(v, nonneg);
  const auto& e = std::get<FactorEvidence>(v.evidence);
  std::set<std::pair<double, double>> got;
  for (const auto& l : e.factors) {
    REQUIRE(l.size() == 2);
    const double r = std::sqrt(to_double(e.radicand));
    got.insert({to_double(l[0].a) + to_double(l[0].b) * r, to_double(l[1].a) + to_double(l[1].b) * r});
  }
  CHECK(got == std::set<std::pair<double, double>>{{1.0, 1.0}, {1.0, 3.0}});
  CHECK(e.c0 == 1);

  const Polynomial diff = poly("s1^2 - s2^2", 2);
  const CriterionVerdict d = factor_quadratic(QuadraticForm::from_polynomial(diff));
  CHECK(d.outcome == Outcome::FactorsMixedSigns);
  check_factors(d, diff);

  const Polynomial square = poly("s1^2 - 2*s1*s2 + s2^2", 2);
  const CriterionVerdict sq = factor_quadratic(QuadraticForm::from_polynomial(square));
  CHECK(sq.outcome == Outcome::FactorsMixedSigns);
  check_factors(sq, square);

  const Polynomial definite = poly("s1^2 + s2^2", 2);
  const CriterionVerdict def = factor_quadratic(QuadraticForm::from_polynomial(definite));
  CHECK(def.outcome == Outcome::IrreducibleCertified);
  CHECK(std::get<RankEvidence>(def.evidence).kind == "rank2_definite");
  CHECK(verify(def, definite));

  const Polynomial irrational = poly("s1^2 - 2*s2^2", 2);
  const CriterionVerdict ir = factor_quadratic(QuadraticForm::from_polynomial(irrational));
  CHECK(ir.outcome == Outcome::FactorsMixedSigns);
  check_factors(ir, irrational);
  CHECK(std::get<FactorEvidence>(ir.evidence).radicand != 1);

  CHECK_THROWS_AS(QuadraticForm::from_polynomial(poly("1 + s1^2", 2)), DomainError);
  CHECK_THROWS_AS(QuadraticForm::from_polynomial(poly("s1^3", 2)), DomainError);
}

TEST_CASE("coefficient matching examples") {
  const CriterionVerdict w = coefficient_matching_quadratic_3var(form(kQ2, 3));
  CHECK(w.outcome == Outcome::IrreducibleCertified);
  const auto& m = std::get<MatchingEvidence>(w.evidence);
  std::set<double> values;
  for (const auto& c : m.candidates) {
    values.insert(to_double(c.a) + to_double(c.b) * std::sqrt(to_double(m.disc2 * m.disc3)));
  }
  CHECK(values == std::set<double>{6.0, 10.0});
  CHECK(m.c23 == 8);
  CHECK(verify(w, poly(kQ2, 3)));

  const Polynomial ten = poly("s1^2 + 4*s1*s2 + 4*s1*s3 + 3*s2^2 + 10*s2*s3 + 3*s3^2", 3);
  CHECK(ten == poly("s1 + s2 + 3*s3", 3) * poly("s1 + 3*s2 + s3", 3));
  const CriterionVerdict t = coefficient_matching_quadratic_3var(QuadraticForm::from_polynomial(ten));
  CHECK(t.outcome == Outcome::FactorsNonneg);
  check_factors(t, ten);

  const Polynomial sq = poly("s1^2 + 2*s1*s2 + s2^2", 3);
  const CriterionVerdict s = coefficient_matching_quadratic_3var(QuadraticForm::from_polynomial(sq));
  CHECK(s.outcome == Outcome::FactorsNonneg);
  check_factors(s, sq);

  const CriterionVerdict deferred = coefficient_matching_quadratic_3var(form("s2^2 + s1*s3", 3));
  CHECK(deferred.outcome == factor_quadratic(form("s2^2 + s1*s3", 3)).outcome);
  CHECK_THROWS_AS(coefficient_matching_quadratic_3var(form("s1^2 + s2^2", 2)), DomainError);
}

TEST_CASE("restriction_reject examples") {
  const CriterionVerdict w = restriction_reject(poly(kQ2, 3), 10, 42);
  CHECK(w.outcome == Outcome::IrreducibleCertified);
  CHECK(std::get<RestrictionEvidence>(w.evidence).trial < 10);
  CHECK(verify(w, poly(kQ2, 3)));

  const Polynomial cubic = poly("s1 + s2", 2) * poly("s1 + 2*s2", 2) * poly("s1 + 3*s2", 2);
  const CriterionVerdict p = restriction_reject(cubic, 100, 42);
  CHECK(p.outcome == Outcome::Inconclusive);
  CHECK(std::get<InconclusiveEvidence>(p.evidence).trials == 100);

  const Polynomial odd = poly("s1^3 + s1*s2^2 + s2^3", 2);
  // x^3 + x + 1 has a single real root.
  CHECK(count_real_roots(UPoly{1, 1, 0, 1}) == 1);
  const CriterionVerdict o = restriction_reject(odd, 10, 42);
  CHECK(o.outcome == Outcome::IrreducibleCertified);
  CHECK(verify(o, odd));

  CHECK_THROWS_AS(restriction_reject(poly("1 + s1", 1), 10, 42), DomainError);
}

TEST_CASE("mphstar_certificate examples") {
  const CriterionVerdict w = mphstar_certificate(poly(kQ, 3), true);
  CHECK(w.outcome == Outcome::IrreducibleCertified);
  CHECK(w.excludes_mphstar);
  CHECK(w.method == "rank");

  const CriterionVerdict not_minimal = mphstar_certificate(poly(kQ, 3), false);
  CHECK(not_minimal.outcome == Outcome::IrreducibleCertified);
  CHECK_FALSE(not_minimal.excludes_mphstar);

  const CriterionVerdict indep = mphstar_certificate(poly("1 + s1 + s2 + s1*s2", 2), true);
  CHECK(indep.outcome == Outcome::FactorsNonneg);
  CHECK_FALSE(indep.excludes_mphstar);

  const CriterionVerdict c = mphstar_certificate(Polynomial::constant(3, 2), true);
  CHECK(c.outcome == Outcome::FactorsNonneg);
  CHECK(std::get<FactorEvidence>(c.evidence).factors.empty());
  CHECK(c.degree == 0);

  CHECK(mphstar_certificate(poly("1 + s1 + 2*s2", 2), true).outcome == Outcome::FactorsNonneg);
  const CriterionVerdict mixed = mphstar_certificate(poly("1 + s1 - s2", 2), true);
  CHECK(mixed.outcome == Outcome::FactorsMixedSigns);
  CHECK(mixed.excludes_mphstar);

  const CriterionVerdict cubic = mphstar_certificate(poly("1 + s1^3 + s1*s2^2 + s2^3", 2), true);
  CHECK(cubic.outcome == Outcome::IrreducibleCertified);
  CHECK(cubic.method == "restriction");

  CHECK_THROWS_AS(mphstar_certificate(poly("s1 + s2", 2), true), DomainError);
}

TEST_CASE("rank test and coefficient matching agree on random quadratics") {
  Rng rng(31);
  int compared = 0;
  std::set<Outcome> seen;
  for (int k = 0; k < 200; ++k) {
    Polynomial q;
    switch (k % 4) {
      case 0:
        q = linear_form(random_coeffs(rng, 3, -3, 3)) * linear_form(random_coeffs(rng, 3, -3, 3));
        break;
      case 1:
        q = linear_form(random_coeffs(rng, 3, 0, 3)) * linear_form(random_coeffs(rng, 3, 0, 3));
        break;
      case 2: {
        const Polynomial a = linear_form(random_coeffs(rng, 3, -3, 3));
        const Polynomial b = linear_form(random_coeffs(rng, 3, -3, 3));
        q = a * a + b * b;
        break;
      }
      default:
        q = random_polynomial(rng, 3, 2, 6);
        q = q.is_zero() ? Polynomial(3) : leading_part(q);
    }
    if (q.is_zero() || q.degree() != 2) continue;
    const QuadraticForm qf = QuadraticForm::from_polynomial(q);
    const CriterionVerdict a = factor_quadratic(qf);
    CHECK(verify(a, q));
    if (a.outcome != Outcome::IrreducibleCertified) check_factors(a, q);
    seen.insert(a.outcome);
    if (sgn(qf.M(0, 0)) == 0) continue;
    const CriterionVerdict b = coefficient_matching_quadratic_3var(qf);
    CHECK(a.outcome == b.outcome);
    CHECK(verify(b, q));
    if (b.outcome != Outcome::IrreducibleCertified) check_factors(b, q);
    ++compared;
  }
  CHECK(compared >= 120);
  CHECK(seen.size() == 3);
}

TEST_CASE("products of non-negative linear forms are never certified irreducible") {
  Rng rng(32);
  for (int k = 0; k < 100; ++k) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, 4));
    const auto factors = rng.uniform_int(1, 4);
    Polynomial Q = Polynomial::constant(n, 1);
    for (long f = 0; f < factors; ++f) {
      auto c = random_coeffs(rng, n, 0, 3);
      if (std::all_of(c.begin(), c.end(), [](const Rational& v) { return sgn(v) == 0; })) c[0] = 1;
      Q = Q * (Polynomial::constant(n, 1) + linear_form(c));
    }
    const CriterionVerdict v = mphstar_certificate(Q, true);
    CHECK(v.outcome != Outcome::IrreducibleCertified);
    if (v.degree <= 2) CHECK(v.outcome == Outcome::FactorsNonneg);
    CHECK_FALSE(v.excludes_mphstar);
  }
}

TEST_CASE("denominators of random MPH* representations pass the restriction test") {
  Rng rng(33);
  for (int k = 0; k < 50; ++k) {
    const auto m = static_cast<std::size_t>(rng.uniform_int(1, 6));
    const auto n = static_cast<std::size_t>(rng.uniform_int(2, 3));
    const ExactKulkarniRep rep = random_mphstar(rng, m, n);
    const Polynomial top = leading_part(symbolic_denominator(rep));
    REQUIRE(top.degree() >= 1);
    CHECK(restriction_reject(top, CertificateOptions{}.trials, 42).outcome == Outcome::Inconclusive);
    CHECK(mphstar_certificate(symbolic_denominator(rep), false).outcome != Outcome::IrreducibleCertified);
  }
}

TEST_CASE("tampered evidence fails verification") {
  const Polynomial q2 = poly(kQ2, 3);
  CriterionVerdict v = factor_quadratic(QuadraticForm::from_polynomial(q2));
  std::get<RankEvidence>(v.evidence).minor = 2;
  CHECK_FALSE(verify(v, q2));

  const Polynomial split = poly("s1^2 + 4*s1*s2 + 3*s2^2", 2);
  CriterionVerdict f = factor_quadratic(QuadraticForm::from_polynomial(split));
  std::get<FactorEvidence>(f.evidence).c0 += 1;
  CHECK_FALSE(verify(f, split));

  CriterionVerdict r = restriction_reject(q2, 10, 42);
  std::get<RestrictionEvidence>(r.evidence).real_roots = 2;
  CHECK_FALSE(verify(r, q2));
}
