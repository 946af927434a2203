#include "mvph/mcsim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mvph/error.hpp"

namespace mvph::mcsim {
namespace {

constexpr std::size_t kMaxSteps = 100000000;

std::vector<double> cumulative(double absorb, const Eigen::Ref<const Eigen::RowVectorXd>& w,
                               std::ptrdiff_t skip) {
  std::vector<double> out;
  double acc = std::max(absorb, 0.0);
  out.push_back(acc);
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    if (j != skip) acc += std::max(w(j), 0.0);
    out.push_back(acc);
  }
  return out;
}

// Index into [absorb, state 0, state 1, ...]; 0 means absorption.
std::size_t draw(const std::vector<double>& cum, Rng& rng) {
  const double u = rng.uniform() * cum.back();
  const auto it = std::upper_bound(cum.begin(), cum.end(), u);
  return static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cum.begin(),
                                                           static_cast<std::ptrdiff_t>(cum.size()) - 1));
}

double gap_over_se(double empirical, double exact, double se) {
  const double gap = std::abs(empirical - exact);
  if (se > 0.0) return gap / se;
  return gap == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

// Streaming mean vector and co-moment matrix with a pairwise merge.
struct Moments {
  double count = 0.0;
  Eigen::VectorXd mean;
  Eigen::MatrixXd comoment;

  explicit Moments(std::size_t n = 0)
      : mean(Eigen::VectorXd::Zero(n)), comoment(Eigen::MatrixXd::Zero(n, n)) {}

  void push(const Eigen::VectorXd& x) {
    count += 1.0;
    const Eigen::VectorXd before = x - mean;
    mean += before / count;
    comoment += before * (x - mean).transpose();
  }

  void merge(const Moments& o) {
    if (o.count == 0.0) return;
    if (count == 0.0) {
      *this = o;
      return;
    }
    const double n = count + o.count;
    const Eigen::VectorXd delta = o.mean - mean;
    comoment += o.comoment + delta * delta.transpose() * (count * o.count / n);
    mean += delta * (o.count / n);
    count = n;
  }
};

struct ChunkResult {
  std::vector<RunningStats> transforms;
  Moments moments;
};

}  // namespace

PathSampler::PathSampler(const KulkarniRep& rep) {
  const ValidationReport report = validate_mphstar(rep);
  if (!report.ok()) throw DomainError("not a valid MPH* representation: " + report.failures());
  K_ = rep.K;
  const auto m = rep.T.rows();
  initial_ = cumulative(rep.p0, rep.alpha, -1);
  for (Eigen::Index i = 0; i < m; ++i) {
    rates_.push_back(-rep.T(i, i));
    jumps_.push_back(cumulative(rep.t(i), rep.T.row(i), i));
  }
}

template <class Visit>
void PathSampler::walk(Rng& rng, Visit&& visit) const {
  std::size_t next = draw(initial_, rng);
  for (std::size_t steps = 0; next != 0; ++steps) {
    if (steps == kMaxSteps) throw Error("path did not absorb within the step limit");
    const std::size_t state = next - 1;
    visit(state, rng.exponential(rates_[state]));
    next = draw(jumps_[state], rng);
  }
}

RewardPath PathSampler::sample(Rng& rng) const {
  RewardPath path;
  path.rewards = Eigen::VectorXd::Zero(K_.cols());
  walk(rng, [&](std::size_t state, double hold) {
    path.states.push_back(state);
    path.holds.push_back(hold);
    path.rewards += hold * K_.row(static_cast<Eigen::Index>(state)).transpose();
  });
  return path;
}

Eigen::VectorXd PathSampler::sample_rewards(Rng& rng) const {
  Eigen::VectorXd rewards = Eigen::VectorXd::Zero(K_.cols());
  walk(rng, [&](std::size_t state, double hold) {
    rewards += hold * K_.row(static_cast<Eigen::Index>(state)).transpose();
  });
  return rewards;
}

RewardPath simulate_path(const KulkarniRep& rep, Rng& rng) { return PathSampler(rep).sample(rng); }

namespace {

std::vector<ChunkResult> run(const PathSampler& sampler,
                             const std::vector<std::vector<double>>& points, std::size_t samples,
                             std::uint64_t seed, unsigned workers) {
  const std::size_t n = sampler.nvars();
  for (const auto& s : points) {
    if (s.size() != n) throw DomainError("transform point has the wrong dimension");
    for (double v : s) {
      if (!(v >= 0.0)) throw DomainError("transform points must be non-negative");
    }
  }
  return run_chunks<ChunkResult>(chunk_count(samples), workers, [&](std::size_t c) {
    ChunkResult r{std::vector<RunningStats>(points.size()), Moments(n)};
    Rng rng = Rng::substream(seed, c);
    const std::size_t end = std::min(samples, (c + 1) * kChunkSize);
    for (std::size_t i = c * kChunkSize; i < end; ++i) {
      const Eigen::VectorXd x = sampler.sample_rewards(rng);
      r.moments.push(x);
      for (std::size_t k = 0; k < points.size(); ++k) {
        double dot = 0.0;
        for (std::size_t j = 0; j < n; ++j) dot += points[k][j] * x(static_cast<Eigen::Index>(j));
        r.transforms[k].push(std::exp(-dot));
      }
    }
    return r;
  });
}

}  // namespace

std::vector<Estimate> mc_transform(const KulkarniRep& rep,
                                   const std::vector<std::vector<double>>& points,
                                   std::size_t samples, std::uint64_t seed, unsigned workers) {
  const PathSampler sampler(rep);
  const auto parts = run(sampler, points, samples, seed, workers);
  std::vector<RunningStats> total(points.size());
  for (const auto& part : parts) {
    for (std::size_t k = 0; k < points.size(); ++k) total[k].merge(part.transforms[k]);
  }
  std::vector<Estimate> out;
  for (const auto& t : total) out.push_back(to_estimate(t, seed));
  return out;
}

Estimate mc_transform(const KulkarniRep& rep, const std::vector<double>& s, std::size_t samples,
                      std::uint64_t seed, unsigned workers) {
  return mc_transform(rep, std::vector<std::vector<double>>{s}, samples, seed, workers).front();
}

ProjectionTable mc_projection_check(const KulkarniRep& rep, const std::vector<double>& a,
                                    const std::vector<double>& u_grid, std::size_t samples,
                                    std::uint64_t seed, unsigned workers) {
  const UnivariateME law = project(rep, a);
  std::vector<std::vector<double>> points;
  for (double u : u_grid) {
    if (!(u >= 0.0)) throw DomainError("projection grid must be non-negative");
    std::vector<double> s(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) s[j] = u * a[j];
    points.push_back(std::move(s));
  }
  const auto estimates = mc_transform(rep, points, samples, seed, workers);
  ProjectionTable table;
  table.a = a;
  for (std::size_t k = 0; k < u_grid.size(); ++k) {
    ProjectionRow row;
    row.u = u_grid[k];
    row.empirical = estimates[k];
    row.exact = law.transform(u_grid[k]);
    row.gap_over_se = gap_over_se(row.empirical.estimate, row.exact, row.empirical.standard_error);
    table.max_gap_over_se = std::max(table.max_gap_over_se, row.gap_over_se);
    table.rows.push_back(row);
  }
  return table;
}

Summary summarize(const KulkarniRep& rep, const std::vector<std::vector<double>>& points,
                  std::size_t samples, std::uint64_t seed, unsigned workers) {
  const PathSampler sampler(rep);
  const auto parts = run(sampler, points, samples, seed, workers);
  std::vector<RunningStats> total(points.size());
  Moments moments(sampler.nvars());
  for (const auto& part : parts) {
    moments.merge(part.moments);
    for (std::size_t k = 0; k < points.size(); ++k) total[k].merge(part.transforms[k]);
  }
  Summary out;
  out.samples = samples;
  out.seed = seed;
  out.mean = moments.mean;
  out.covariance = moments.count > 1.0 ? Eigen::MatrixXd(moments.comoment / (moments.count - 1.0))
                                       : Eigen::MatrixXd::Zero(sampler.nvars(), sampler.nvars());
  for (std::size_t k = 0; k < points.size(); ++k) {
    TransformRow row;
    row.s = points[k];
    row.empirical = to_estimate(total[k], seed);
    row.exact = transform_eval(rep, points[k]);
    row.gap_over_se = gap_over_se(row.empirical.estimate, row.exact, row.empirical.standard_error);
    out.transforms.push_back(std::move(row));
  }
  return out;
}

}  // namespace mvph::mcsim
