#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mvph/exact_matrix.hpp"
#include "mvph/kulkarni.hpp"
#include "mvph/polynomial.hpp"

namespace mvph {

/// f(s) = d + c (I - sum_j s_j R_j)^{-1} (sum_j s_j b_j), so f(0) = d.
struct FMRealization {
  std::size_t n = 0;
  std::size_t rho = 0;
  double d = 0.0;
  Eigen::RowVectorXd c;
  std::vector<Eigen::MatrixXd> R;
  std::vector<Eigen::VectorXd> b;

  double evaluate(std::span<const double> s) const;
};

FMRealization fm_const(double v, std::size_t n);
/// s_j for a 0-based index j.
FMRealization fm_var(std::size_t j, std::size_t n);
FMRealization fm_add(const FMRealization& f, const FMRealization& g);
FMRealization fm_scale(const FMRealization& f, double v);
FMRealization fm_mul(const FMRealization& f, const FMRealization& g);
/// Requires f.d != 0.
FMRealization fm_inv(const FMRealization& f);
/// Termwise: a monomial of degree k costs k states.
FMRealization fm_from_polynomial(const Polynomial& p);
FMRealization fm_from_rational(const Polynomial& num, const Polynomial& den);

/// f(s) = eta (I - sum_j s_j A_j)^{-1} b.
struct LinearResolvent {
  std::size_t n = 0;
  std::size_t N = 0;
  Eigen::RowVectorXd eta;
  std::vector<Eigen::MatrixXd> A;
  Eigen::VectorXd b;

  double evaluate(std::span<const double> s) const;
  /// det(I_N - sum_j s_j A_j).
  double determinant(std::span<const double> s) const;
};

LinearResolvent to_linear_resolvent(const FMRealization& f);

struct ClosingColumnResult {
  LinearResolvent resolvent;
  std::size_t pivot = 0;
  /// 1-norm condition number of the similarity H.
  double condition = 1.0;
};

/// Similarity by H = I + c e_k^T with Hb = 1, where k = argmax |b_k|.
ClosingColumnResult normalize_closing_column(const LinearResolvent& r);

/// alpha0 (I_q - U S(s))^{-1} 1_q with S(s) = diag(s_1 I_N, ..., s_n I_N).
struct DiagLift {
  std::size_t n = 0;
  std::size_t N = 0;
  std::size_t q = 0;
  Eigen::RowVectorXd alpha0;
  Eigen::MatrixXd U;
  Eigen::MatrixXd E;

  double evaluate(std::span<const double> s) const;
  /// det(I_q - U S(s)).
  double determinant(std::span<const double> s) const;
};

DiagLift diag_lift(const LinearResolvent& r);

/// T = [[-U-2I, I], [-(U+I)^2, U]] and alpha_hat = (alpha0, 0). T is built
/// exactly from the double U and then rounded; T_exact keeps the exact
/// matrix, whose spectrum is exactly {-1}.
struct Stabilized {
  std::size_t n = 0;
  std::size_t N = 0;
  std::size_t q = 0;
  Eigen::MatrixXd T;
  RationalMatrix T_exact;
  Eigen::RowVectorXd alpha_hat;
  /// Variable index rewarded in each of the 2q states; -1 for none.
  std::vector<int> reward_variable;

  /// alpha_hat (-T + Delta_aug(s))^{-1} (-T 1).
  double evaluate(std::span<const double> s) const;
};

Stabilized stabilize(const DiagLift& dl);

struct SpectrumCertificate {
  /// (T + I)^2 = 0 holds exactly, so every eigenvalue equals -1.
  bool nilpotent_shift = false;
  /// max |lambda + 1| over 50-digit eigenvalues; negative when skipped.
  double max_deviation = -1.0;
};

/// Exact nilpotency test plus high-precision eigenvalues of T_exact.
SpectrumCertificate certify_unit_spectrum(const RationalMatrix& T_exact, bool eigenvalues = true);

struct RealizeOptions {
  std::size_t points = 30;
  std::uint64_t seed = 42;
  bool spectrum_eigenvalues = true;
};

struct StageError {
  std::string stage;
  double max_rel_error = 0.0;
};

struct RealizeReport {
  bool degenerate = false;
  std::size_t n = 0;
  std::size_t rho = 0;
  std::size_t N = 0;
  std::size_t q = 0;
  std::size_t ell = 0;
  std::size_t closing_pivot = 0;
  double closing_condition = 1.0;
  double radius = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::vector<double>> points;
  std::vector<StageError> stages;
  double max_rel_error = 0.0;
  SpectrumCertificate spectrum;
};

struct Realization {
  KulkarniRep rep;
  ExactKulkarniRep exact;
  RealizeReport report;
};

/// Seeded points, uniform in the ball of radius 0.1 / (1 + max_j ||A_j||),
/// redrawn while cond(I - sum s_j A_j) > 1e12 or den(s) = 0.
std::vector<std::vector<double>> verification_points(const LinearResolvent& r,
                                                     const Polynomial& den, std::size_t count,
                                                     std::uint64_t seed, double* radius = nullptr);

/// Full pipeline: FM realization of num/den, resolvent lift, closing-column
/// normalization, block lift, stabilization, and K = [I_n (x) 1_N; 0].
Realization assemble_kulkarni(const RationalTransform& t, const RealizeOptions& options = {});

}  // namespace mvph
