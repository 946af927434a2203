#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mvph/exact_matrix.hpp"
#include "mvph/polynomial.hpp"

namespace mvph {

/// Reward representation (alpha, T, K, t, p0) with transform
///   L(s) = p0 + alpha (-T + diag(K s))^{-1} t.
/// Sign constraints are only imposed by validate_mphstar().
struct KulkarniRep {
  Eigen::RowVectorXd alpha;
  Eigen::MatrixXd T;
  Eigen::MatrixXd K;
  Eigen::VectorXd t;
  double p0 = 0.0;

  std::size_t states() const { return static_cast<std::size_t>(T.rows()); }
  std::size_t nvars() const { return static_cast<std::size_t>(K.cols()); }

  /// Markovian completion: t = -T 1 and p0 = 1 - alpha 1.
  static KulkarniRep markovian(Eigen::RowVectorXd alpha, Eigen::MatrixXd T, Eigen::MatrixXd K);
};

/// The same representation with exact rational entries.
struct ExactKulkarniRep {
  RationalMatrix alpha;  // 1 x m
  RationalMatrix T;      // m x m
  RationalMatrix K;      // m x n
  RationalMatrix t;      // m x 1
  Rational p0;

  std::size_t states() const { return T.rows(); }
  std::size_t nvars() const { return K.cols(); }

  static ExactKulkarniRep markovian(RationalMatrix alpha, RationalMatrix T, RationalMatrix K);
  static ExactKulkarniRep exact(const KulkarniRep& rep);
  KulkarniRep to_double() const;
};

/// Univariate law with transform p0 + alpha (u diag(rates) - T)^{-1} t.
/// rates are all one for the ordinary (alpha, T, t) form; projections keep
/// zero-rate states, which that form cannot express without elimination.
struct UnivariateME {
  Eigen::RowVectorXd alpha;
  Eigen::MatrixXd T;
  Eigen::VectorXd t;
  double p0 = 0.0;
  Eigen::VectorXd rates;

  double transform(double u) const;
  bool has_unit_rates() const;
  /// Rescales to unit rates; requires every rate to be positive.
  UnivariateME standard_form() const;
};

/// p0 + alpha (-T + diag(K s))^{-1} t. Throws DomainError when the resolvent
/// matrix is numerically singular.
double transform_eval(const KulkarniRep& rep, std::span<const double> s);

/// Law of <a, X>: transform at u equals transform_eval(rep, u a).
UnivariateME project(const KulkarniRep& rep, std::span<const double> a);

struct ValidationCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool ok() const;
  /// Names of failed checks, comma separated.
  std::string failures() const;
};

/// MPH* structural conditions, each reported separately.
ValidationReport validate_mphstar(const KulkarniRep& rep, double tol = 1e-10);

/// Determinant of the principal submatrix retaining `subset`; 1 when empty.
Rational principal_minor(const RationalMatrix& a, const std::vector<std::size_t>& subset);

/// det(-T + diag(K s)) by the subset expansion
///   sum_J det((-T)_{J^c,J^c}) prod_{i in J} kappa_i(s),
/// restricted to subsets of the nonzero reward rows. Guarded at m <= 20.
Polynomial symbolic_denominator(const RationalMatrix& T, const RationalMatrix& K);
inline Polynomial symbolic_denominator(const ExactKulkarniRep& rep) {
  return symbolic_denominator(rep.T, rep.K);
}

/// Fraction-free (Bareiss) determinant over Q[s]; independent cross-check
/// for symbolic_denominator.
Polynomial polynomial_determinant(std::vector<std::vector<Polynomial>> m);

/// The matrix -T + diag(K s) with polynomial entries.
std::vector<std::vector<Polynomial>> resolvent_matrix(const RationalMatrix& T,
                                                      const RationalMatrix& K);

struct SpectrumReport {
  bool stable = false;
  double max_real = 0.0;
  std::vector<std::complex<double>> eigenvalues;
};

/// Hurwitz test: every eigenvalue has real part below -1e-10.
SpectrumReport hurwitz_check(const Eigen::MatrixXd& T);

/// Eigenvalues of an exact matrix computed in 50-digit floating point.
std::vector<std::complex<double>> high_precision_eigenvalues(const RationalMatrix& a);

}  // namespace mvph
