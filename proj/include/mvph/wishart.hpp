#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mvph/parallel.hpp"
#include "mvph/polynomial.hpp"
#include "mvph/random.hpp"

// X_j = Tr(H_j Z) for Z = (G1 G1^T + G2 G2^T) / 2 with H1 = I,
// H2 = [[2,1],[1,2]], H3 = diag(3,1). Its joint transform is
// det(I + s1 H1 + s2 H2 + s3 H3)^{-1}.
namespace mvph::wishart {

struct SymMatrix2 {
  double z11 = 0.0;
  double z12 = 0.0;
  double z22 = 0.0;

  double trace() const { return z11 + z22; }
  double det() const { return z11 * z22 - z12 * z12; }
};

using Vec3 = std::array<double, 3>;

/// H_j for j = 1, 2, 3.
Eigen::Matrix2d H(int j);
/// a1 H1 + a2 H2 + a3 H3.
Eigen::Matrix2d H(const Vec3& a);

SymMatrix2 sample_Z(Rng& rng);
Vec3 x_from_z(const SymMatrix2& z);
Vec3 sample_X(Rng& rng);

/// -7 x1^2 - x2^2 - x3^2 + 4 x1 x2 + 4 x1 x3, which equals 4 det(z).
double radicand(const Vec3& x);

enum class Support { Interior, Boundary, Outside };
const char* to_string(Support s);

/// Boundary when |radicand| <= 1e-12 |x|^2; the apex is boundary.
Support in_support(const Vec3& x);

struct DensityValue {
  double value = 0.0;
  bool boundary = false;
};

/// e^{-x1} / (2 pi sqrt(radicand)) inside, 0 outside, +inf flagged on the
/// boundary.
DensityValue density(const Vec3& x);

/// 1 + 2s1 + 4s2 + 4s3 + s1^2 + 4s1s2 + 4s1s3 + 3s2^2 + 8s2s3 + 3s3^2.
Polynomial transform_poly();
RationalTransform transform();
/// det(I + sum s_j H_j)^{-1}; DomainError when the determinant vanishes.
double transform_closed(const Vec3& s);

struct Projection {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double value = 0.0;
};

/// <a, X> is the sum of independent exponentials with means lambda_i(H(a)),
/// so its transform is (1 + u lambda1)^{-1} (1 + u lambda2)^{-1}.
Projection projection_transform(const Vec3& a, double u);

/// (X1, X2, X3, E4, ..., En) with independent unit exponentials E_j.
RationalTransform extend_to_n(std::size_t n);

struct Normalization {
  double integral = 0.0;
  double expected = 0.0;
  double x1_max = 0.0;
};

/// Integral of the density over x1 in [0, x1_max], with each disk section
/// parametrized by x2 = 2x1 + r cos(theta), x3 = 2x1 + r sin(theta),
/// r = x1 sin(phi); the Jacobian x1 r cos(phi) cancels the square root.
Normalization density_normalization(double x1_max = 30.0);

/// Mean of exp(-<s, X>) per point, all points sharing the same samples.
std::vector<Estimate> mc_transform(const std::vector<Vec3>& points, std::size_t samples,
                                   std::uint64_t seed, unsigned workers = 0);
Estimate mc_transform(const Vec3& s, std::size_t samples, std::uint64_t seed,
                      unsigned workers = 0);

}  // namespace mvph::wishart
