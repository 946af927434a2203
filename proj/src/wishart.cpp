#include "mvph/wishart.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>

#include "mvph/error.hpp"

namespace mvph::wishart {
namespace {

constexpr double kBoundaryTol = 1e-12;

void check_direction(const Vec3& a) {
  bool nonzero = false;
  for (double x : a) {
    if (!(x >= 0.0)) throw DomainError("projection direction must be non-negative");
    nonzero = nonzero || x > 0.0;
  }
  if (!nonzero) throw DomainError("projection direction must be non-zero");
}

}  // namespace

Eigen::Matrix2d H(int j) {
  Eigen::Matrix2d h;
  switch (j) {
    case 1: h << 1, 0, 0, 1; break;
    case 2: h << 2, 1, 1, 2; break;
    case 3: h << 3, 0, 0, 1; break;
    default: throw DomainError("H_j is defined for j = 1, 2, 3");
  }
  return h;
}

Eigen::Matrix2d H(const Vec3& a) { return a[0] * H(1) + a[1] * H(2) + a[2] * H(3); }

SymMatrix2 sample_Z(Rng& rng) {
  const double g11 = rng.normal(), g12 = rng.normal();
  const double g21 = rng.normal(), g22 = rng.normal();
  // Columns G1 = (g11, g12), G2 = (g21, g22).
  return {0.5 * (g11 * g11 + g21 * g21), 0.5 * (g11 * g12 + g21 * g22),
          0.5 * (g12 * g12 + g22 * g22)};
}

Vec3 x_from_z(const SymMatrix2& z) {
  return {z.z11 + z.z22, 2.0 * z.z11 + 2.0 * z.z12 + 2.0 * z.z22, 3.0 * z.z11 + z.z22};
}

Vec3 sample_X(Rng& rng) { return x_from_z(sample_Z(rng)); }

double radicand(const Vec3& x) {
  const auto [x1, x2, x3] = x;
  return -7.0 * x1 * x1 - x2 * x2 - x3 * x3 + 4.0 * x1 * x2 + 4.0 * x1 * x3;
}

const char* to_string(Support s) {
  switch (s) {
    case Support::Interior: return "interior";
    case Support::Boundary: return "boundary";
    case Support::Outside: return "outside";
  }
  return "outside";
}

Support in_support(const Vec3& x) {
  const double scale = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
  const double rad = radicand(x);
  if (std::abs(rad) <= kBoundaryTol * scale) return x[0] >= 0.0 ? Support::Boundary : Support::Outside;
  if (rad < 0.0 || x[0] < 0.0) return Support::Outside;
  return Support::Interior;
}

DensityValue density(const Vec3& x) {
  switch (in_support(x)) {
    case Support::Outside: return {0.0, false};
    case Support::Boundary: return {std::numeric_limits<double>::infinity(), true};
    case Support::Interior: break;
  }
  const double two_pi = boost::math::constants::two_pi<double>();
  return {std::exp(-x[0]) / (two_pi * std::sqrt(radicand(x))), false};
}

Polynomial transform_poly() {
  const Polynomial a = Polynomial::parse("1 + s1 + 2*s2 + 3*s3", 3);
  const Polynomial b = Polynomial::parse("1 + s1 + 2*s2 + s3", 3);
  return a * b - Polynomial::parse("s2^2", 3);
}

RationalTransform transform() {
  return {Rational(0), Polynomial::constant(3, 1), transform_poly(), true};
}

double transform_closed(const Vec3& s) {
  const Eigen::Matrix2d m = Eigen::Matrix2d::Identity() + H(s);
  const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  if (det == 0.0) throw DomainError("transform singular at this point");
  return 1.0 / det;
}

Projection projection_transform(const Vec3& a, double u) {
  check_direction(a);
  if (!(u >= 0.0)) throw DomainError("projection argument must be non-negative");
  const Eigen::Matrix2d h = H(a);
  const double mean = 0.5 * (h(0, 0) + h(1, 1));
  const double lambda1 = mean + std::hypot(0.5 * (h(0, 0) - h(1, 1)), h(0, 1));
  const double lambda2 = (h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0)) / lambda1;
  return {lambda1, lambda2, 1.0 / ((1.0 + u * lambda1) * (1.0 + u * lambda2))};
}

RationalTransform extend_to_n(std::size_t n) {
  if (n < 4) throw DomainError("extension needs n >= 4");
  std::vector<Polynomial> lift;
  for (std::size_t j = 0; j < 3; ++j) lift.push_back(Polynomial::variable(n, j));
  Polynomial den = substitute(transform_poly(), lift);
  for (std::size_t j = 3; j < n; ++j) {
    den = den * (Polynomial::constant(n, 1) + Polynomial::variable(n, j));
  }
  return {Rational(0), Polynomial::constant(n, 1), den, true};
}

Normalization density_normalization(double x1_max) {
  using boost::math::quadrature::gauss;
  using boost::math::quadrature::gauss_kronrod;
  const double pi = boost::math::constants::pi<double>();
  auto section = [&](double x1) {
    auto over_theta = [&](double theta) {
      auto over_phi = [&](double phi) {
        const double r = x1 * std::sin(phi);
        const Vec3 x{x1, 2.0 * x1 + r * std::cos(theta), 2.0 * x1 + r * std::sin(theta)};
        const DensityValue f = density(x);
        return f.boundary ? 0.0 : f.value * r * x1 * std::cos(phi);
      };
      return gauss<double, 30>::integrate(over_phi, 0.0, 0.5 * pi);
    };
    return gauss<double, 30>::integrate(over_theta, 0.0, 2.0 * pi);
  };
  Normalization out;
  out.x1_max = x1_max;
  out.integral = gauss_kronrod<double, 61>::integrate(section, 0.0, x1_max, 15, 1e-12);
  out.expected = 1.0 - (1.0 + x1_max) * std::exp(-x1_max);
  return out;
}

std::vector<Estimate> mc_transform(const std::vector<Vec3>& points, std::size_t samples,
                                   std::uint64_t seed, unsigned workers) {
  for (const auto& s : points) {
    for (double v : s) {
      if (!(v >= 0.0)) throw DomainError("transform points must be non-negative");
    }
  }
  const std::size_t chunks = chunk_count(samples);
  auto parts = run_chunks<std::vector<RunningStats>>(chunks, workers, [&](std::size_t c) {
    std::vector<RunningStats> acc(points.size());
    Rng rng = Rng::substream(seed, c);
    const std::size_t end = std::min(samples, (c + 1) * kChunkSize);
    for (std::size_t i = c * kChunkSize; i < end; ++i) {
      const Vec3 x = sample_X(rng);
      for (std::size_t k = 0; k < points.size(); ++k) {
        const auto& s = points[k];
        acc[k].push(std::exp(-(s[0] * x[0] + s[1] * x[1] + s[2] * x[2])));
      }
    }
    return acc;
  });
  std::vector<RunningStats> total(points.size());
  for (const auto& part : parts) {
    for (std::size_t k = 0; k < points.size(); ++k) total[k].merge(part[k]);
  }
  std::vector<Estimate> out;
  for (const auto& t : total) out.push_back(to_estimate(t, seed));
  return out;
}

Estimate mc_transform(const Vec3& s, std::size_t samples, std::uint64_t seed, unsigned workers) {
  return mc_transform(std::vector<Vec3>{s}, samples, seed, workers).front();
}

}  // namespace mvph::wishart
