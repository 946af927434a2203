#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mvph/kulkarni.hpp"
#include "mvph/parallel.hpp"
#include "mvph/random.hpp"

// Pathwise simulation of the reward chain: start in state i with probability
// alpha_i (absorbed at once with probability p0), hold Exp(-T_ii), accrue
// K[i,:] per unit time, then jump or get absorbed.
namespace mvph::mcsim {

struct RewardPath {
  std::vector<std::size_t> states;
  std::vector<double> holds;
  Eigen::VectorXd rewards;
};

class PathSampler {
 public:
  /// Throws DomainError unless rep passes validate_mphstar.
  explicit PathSampler(const KulkarniRep& rep);

  RewardPath sample(Rng& rng) const;
  /// Accumulated rewards only, without recording the path.
  Eigen::VectorXd sample_rewards(Rng& rng) const;

  std::size_t nvars() const { return static_cast<std::size_t>(K_.cols()); }

 private:
  template <class Visit>
  void walk(Rng& rng, Visit&& visit) const;

  Eigen::MatrixXd K_;
  std::vector<double> initial_;                // cumulative over [absorb, states...]
  std::vector<double> rates_;                  // -T_ii
  std::vector<std::vector<double>> jumps_;     // cumulative over [absorb, states...]
};

RewardPath simulate_path(const KulkarniRep& rep, Rng& rng);

/// Mean of exp(-<s, X>) per point over common samples.
std::vector<Estimate> mc_transform(const KulkarniRep& rep,
                                   const std::vector<std::vector<double>>& points,
                                   std::size_t samples, std::uint64_t seed, unsigned workers = 0);
Estimate mc_transform(const KulkarniRep& rep, const std::vector<double>& s, std::size_t samples,
                      std::uint64_t seed, unsigned workers = 0);

struct ProjectionRow {
  double u = 0.0;
  Estimate empirical;
  double exact = 0.0;
  /// |empirical - exact| / se; 0 when both agree exactly.
  double gap_over_se = 0.0;
};

struct ProjectionTable {
  std::vector<double> a;
  std::vector<ProjectionRow> rows;
  double max_gap_over_se = 0.0;
};

ProjectionTable mc_projection_check(const KulkarniRep& rep, const std::vector<double>& a,
                                    const std::vector<double>& u_grid, std::size_t samples,
                                    std::uint64_t seed, unsigned workers = 0);

struct TransformRow {
  std::vector<double> s;
  Estimate empirical;
  double exact = 0.0;
  double gap_over_se = 0.0;
};

struct Summary {
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  std::vector<TransformRow> transforms;
};

/// Reward means and covariances plus a transform table at the given points.
Summary summarize(const KulkarniRep& rep, const std::vector<std::vector<double>>& points,
                  std::size_t samples, std::uint64_t seed, unsigned workers = 0);

}  // namespace mvph::mcsim
