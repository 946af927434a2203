#include <doctest.h>

#include "mvph/error.hpp"
#include "mvph/mcsim.hpp"
#include "support.hpp"

using namespace mvph;
using namespace mvph::testing;

namespace {

KulkarniRep single_exp() {
  return KulkarniRep::markovian(Eigen::RowVectorXd::Ones(1), -Eigen::MatrixXd::Ones(1, 1),
                                Eigen::MatrixXd::Ones(1, 1));
}

KulkarniRep series_chain() {
  Eigen::MatrixXd T(2, 2);
  T << -1, 1, 0, -1;
  return KulkarniRep::markovian(Eigen::RowVector2d(1, 0), T, Eigen::MatrixXd::Identity(2, 2));
}

bool within(const Estimate& e, double exact) {
  return std::abs(e.estimate - exact) <= 4 * e.standard_error;
}

}  // namespace

TEST_CASE("single-state chain gives unit exponential rewards") {
  Rng rng(1);
  RunningStats stats;
  for (int k = 0; k < 100000; ++k) {
    const mcsim::RewardPath path = mcsim::simulate_path(single_exp(), rng);
    REQUIRE(path.states.size() == 1);
    CHECK(path.rewards(0) == path.holds[0]);
    stats.push(path.rewards(0));
  }
  CHECK(std::abs(stats.mean - 1.0) <= 4 * stats.standard_error());
}

TEST_CASE("point mass at the origin gives empty paths") {
  const KulkarniRep rep = KulkarniRep::markovian(Eigen::RowVectorXd::Zero(1),
                                                 -Eigen::MatrixXd::Ones(1, 1), Eigen::MatrixXd::Ones(1, 1));
  CHECK(rep.p0 == 1.0);
  Rng rng(2);
  for (int k = 0; k < 100; ++k) {
    const mcsim::RewardPath path = mcsim::simulate_path(rep, rng);
    CHECK(path.states.empty());
    CHECK(path.rewards.isZero());
  }
  CHECK(mcsim::mc_transform(rep, std::vector<double>{3.0}, 1000, 1).estimate == 1.0);
}

TEST_CASE("series chain rewards are uncorrelated") {
  Rng rng(3);
  const std::size_t n = 100000;
  RunningStats x, y, xy;
  for (std::size_t k = 0; k < n; ++k) {
    const mcsim::RewardPath path = mcsim::simulate_path(series_chain(), rng);
    x.push(path.rewards(0));
    y.push(path.rewards(1));
    xy.push(path.rewards(0) * path.rewards(1));
  }
  const double cov = xy.mean - x.mean * y.mean;
  const double corr = cov / std::sqrt(x.variance() * y.variance());
  CHECK(std::abs(corr) <= 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("reward paths are consistent") {
  Rng rng(4);
  for (int r = 0; r < 10; ++r) {
    const KulkarniRep rep = random_mphstar(rng, static_cast<std::size_t>(rng.uniform_int(1, 5)), 3).to_double();
    for (int k = 0; k < 200; ++k) {
      const mcsim::RewardPath path = mcsim::simulate_path(rep, rng);
      Eigen::VectorXd sum = Eigen::VectorXd::Zero(3);
      for (std::size_t i = 0; i < path.states.size(); ++i) {
        CHECK(path.holds[i] > 0);
        sum += path.holds[i] * rep.K.row(static_cast<Eigen::Index>(path.states[i])).transpose();
      }
      CHECK((path.rewards - sum).cwiseAbs().maxCoeff() <= 1e-12 * (1 + sum.cwiseAbs().maxCoeff()));
      CHECK((path.rewards.array() >= 0).all());
      CHECK(path.rewards.allFinite());
    }
  }
}

TEST_CASE("mc_transform examples") {
  const Estimate zero = mcsim::mc_transform(series_chain(), std::vector<double>{0, 0}, 1000, 42);
  CHECK(zero.estimate == 1.0);
  CHECK(zero.standard_error == 0.0);
  CHECK(within(mcsim::mc_transform(single_exp(), std::vector<double>{1.0}, 1000000, 42), 0.5));
  CHECK(within(mcsim::mc_transform(series_chain(), std::vector<double>{1.0, 1.0}, 1000000, 42), 0.25));
}

TEST_CASE("mc_projection_check examples") {
  const auto table = mcsim::mc_projection_check(series_chain(), {1, 1}, {0.0, 1.0}, 200000, 42);
  REQUIRE(table.rows.size() == 2);
  CHECK(table.rows[0].empirical.estimate == 1.0);
  CHECK(table.rows[0].gap_over_se == 0.0);
  CHECK(within(table.rows[1].empirical, 0.25));
  CHECK(table.rows[1].exact == doctest::Approx(0.25).epsilon(1e-14));

  const auto axis = mcsim::mc_projection_check(series_chain(), {1, 0}, {0.5}, 100000, 7);
  const Estimate direct = mcsim::mc_transform(series_chain(), std::vector<double>{0.5, 0.0}, 100000, 7);
  CHECK(axis.rows[0].empirical.estimate == doctest::Approx(direct.estimate).epsilon(1e-12));
  CHECK_THROWS_AS(mcsim::mc_projection_check(series_chain(), {0, 0}, {1.0}, 10, 1), DomainError);
}

TEST_CASE("simulation agrees with the transform on random representations") {
  Rng rng(5);
  int passed = 0, total = 0;
  for (int r = 0; r < 10; ++r) {
    const auto m = static_cast<std::size_t>(rng.uniform_int(1, 5));
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, 3));
    const KulkarniRep rep = random_mphstar(rng, m, n).to_double();
    std::vector<std::vector<double>> points(5, std::vector<double>(n));
    for (auto& s : points) {
      for (auto& v : s) v = 2 * rng.uniform();
    }
    const auto est = mcsim::mc_transform(rep, points, 40000, 100 + r);
    for (std::size_t k = 0; k < points.size(); ++k) {
      ++total;
      if (within(est[k], transform_eval(rep, std::span<const double>(points[k])))) ++passed;
    }
  }
  CHECK(total == 50);
  CHECK(passed >= 49);
}

TEST_CASE("estimates do not depend on the worker count") {
  Rng rng(6);
  const KulkarniRep rep = random_mphstar(rng, 4, 2).to_double();
  const std::vector<std::vector<double>> points{{0.3, 0.1}, {1.0, 2.0}};
  const auto a = mcsim::mc_transform(rep, points, 50000, 11, 1);
  const auto b = mcsim::mc_transform(rep, points, 50000, 11, 3);
  const auto c = mcsim::mc_transform(rep, points, 50000, 11, 8);
  for (std::size_t k = 0; k < points.size(); ++k) {
    CHECK(a[k].estimate == b[k].estimate);
    CHECK(a[k].estimate == c[k].estimate);
    CHECK(a[k].standard_error == c[k].standard_error);
  }
  const mcsim::Summary s1 = mcsim::summarize(rep, points, 30000, 3, 1);
  const mcsim::Summary s2 = mcsim::summarize(rep, points, 30000, 3, 5);
  CHECK(s1.mean == s2.mean);
  CHECK(s1.covariance == s2.covariance);
}

TEST_CASE("summary moments") {
  const mcsim::Summary s = mcsim::summarize(series_chain(), {{1.0, 1.0}}, 200000, 42);
  CHECK(s.samples == 200000);
  CHECK(s.seed == 42);
  CHECK(std::abs(s.mean(0) - 1.0) < 0.02);
  CHECK(std::abs(s.mean(1) - 1.0) < 0.02);
  CHECK(std::abs(s.covariance(0, 0) - 1.0) < 0.05);
  CHECK(std::abs(s.covariance(0, 1)) < 0.02);
  CHECK(s.covariance(0, 1) == s.covariance(1, 0));
  CHECK(s.transforms[0].exact == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("non-Markovian representations are rejected") {
  KulkarniRep rep = series_chain();
  rep.K(0, 0) = -1;
  Rng rng(1);
  CHECK_THROWS_AS(mcsim::simulate_path(rep, rng), DomainError);
  CHECK_THROWS_AS(mcsim::PathSampler{rep}, DomainError);
}
