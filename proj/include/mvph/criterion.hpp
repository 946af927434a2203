#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "mvph/exact_matrix.hpp"
#include "mvph/polynomial.hpp"
#include "mvph/univariate.hpp"

namespace mvph {

enum class Outcome { FactorsNonneg, FactorsMixedSigns, IrreducibleCertified, Inconclusive };

std::string to_string(Outcome o);

/// Q_top(s) = s^T M s; off-diagonal entries are half the mixed coefficients.
struct QuadraticForm {
  std::size_t n = 0;
  RationalMatrix M;

  /// Requires a homogeneous polynomial of degree exactly 2.
  static QuadraticForm from_polynomial(const Polynomial& p);
  Polynomial to_polynomial() const;
};

/// a + b sqrt(D), with D carried by the enclosing evidence.
struct Surd {
  Rational a;
  Rational b;
};

/// Sign of a + b sqrt(D) for D >= 0, decided exactly.
int sign(const Surd& x, const Rational& radicand);

/// Q_top = c0 * prod_i l_i(s); every coefficient lies in Q(sqrt(radicand)).
struct FactorEvidence {
  Rational c0;
  Rational radicand = 1;
  std::vector<std::vector<Surd>> factors;
};

/// kind "rank": the rows x cols minor of M is nonzero and has size >= 3, so
/// rank M >= 3. kind "rank2_definite": rank M = 2 and the principal minor on
/// rows is positive, so the form is definite on a plane.
struct RankEvidence {
  std::string kind;
  std::size_t n = 0;
  std::size_t rank = 0;
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  Rational minor;
};

/// Coefficient matching after dividing by the s1^2 coefficient. With
/// (s1 + u s2 + v s3)(s1 + r s2 + t s3), the s2 s3 coefficient can only be
/// (p2 p3 -/+ sqrt(disc2 disc3)) / 2.
struct MatchingEvidence {
  Rational p2, p3, c22, c33, c23;
  Rational disc2, disc3;
  /// Candidates a + b sqrt(disc2 disc3); empty when a discriminant is negative.
  std::vector<Surd> candidates;
};

/// Q_top(x p + y q) at y = 1 has fewer distinct real roots than the degree of
/// its square-free part, so Q_top does not split into real linear forms.
struct RestrictionEvidence {
  std::size_t trial = 0;
  std::vector<long> p;
  std::vector<long> q;
  UPoly restriction;
  int squarefree_degree = 0;
  int real_roots = 0;
};

struct InconclusiveEvidence {
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::size_t skipped = 0;
};

using Evidence = std::variant<FactorEvidence, RankEvidence, MatchingEvidence, RestrictionEvidence,
                              InconclusiveEvidence>;

struct CriterionVerdict {
  Outcome outcome = Outcome::Inconclusive;
  std::string method;
  Evidence evidence;
  int degree = 0;
  bool minimal_declared = true;
  /// True when the evidence rules out an MPH* representation: the input is
  /// declared minimal and Q_top has no factorization into non-negative forms.
  bool excludes_mphstar = false;
  std::string note;
};

Polynomial extract_qtop(const Polynomial& Q);

CriterionVerdict factor_quadratic(const QuadraticForm& qf);

/// Three variables with a nonzero s1^2 coefficient; otherwise defers to
/// factor_quadratic.
CriterionVerdict coefficient_matching_quadratic_3var(const QuadraticForm& qf);

CriterionVerdict restriction_reject(const Polynomial& qtop, std::size_t trials,
                                    std::uint64_t seed);

struct CertificateOptions {
  std::size_t trials = 1024;
  std::uint64_t seed = 42;
};

/// Dispatch on deg Q_top: 0 and 1 directly, 2 exactly, >= 3 by restriction.
CriterionVerdict mphstar_certificate(const Polynomial& Q, bool minimal_declared,
                                     const CertificateOptions& options = {});

/// Re-checks the evidence of a verdict against Q_top.
bool verify(const CriterionVerdict& verdict, const Polynomial& qtop);

/// c0 * prod l_i with the surds squared out; throws if an irrational part
/// survives.
Polynomial expand_factors(const FactorEvidence& e, std::size_t nvars);

}  // namespace mvph
