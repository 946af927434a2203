#include "mvph/commands.hpp"

#include <cmath>

#include "mvph/criterion.hpp"
#include "mvph/error.hpp"
#include "mvph/kulkarni.hpp"
#include "mvph/mcsim.hpp"
#include "mvph/realize.hpp"
#include "mvph/wishart.hpp"

namespace mvph::commands {
namespace {

Json header(const char* command) { return {{"schema", 1}, {"command", command}}; }

Json vec(const std::vector<double>& v) { return Json(v); }

// A bare rep, or the "rep" member of a realize report.
const Json& rep_member(const Json& input) {
  if (input.is_object() && input.contains("rep")) return input.at("rep");
  return input;
}

std::vector<std::vector<double>> default_points(std::size_t n) {
  std::vector<std::vector<double>> points{std::vector<double>(n, 0.0)};
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    points.push_back(std::move(e));
  }
  if (n > 1) points.emplace_back(n, 1.0);
  return points;
}

Json verdict_report(const Polynomial& Q, bool minimal, const Options& options, Json source) {
  CertificateOptions copt;
  copt.trials = options.trials;
  copt.seed = options.seed;
  const CriterionVerdict v = mphstar_certificate(Q, minimal, copt);
  const Polynomial qtop = extract_qtop(Q);
  Json out = header("check-mphstar");
  out["source"] = std::move(source);
  out["Q"] = to_json(Q);
  out["qtop"] = to_json(qtop);
  out["verdict"] = to_json(v);
  out["verified"] = verify(v, qtop);
  if (qtop.degree() == 2 && qtop.nvars() == 3) {
    const QuadraticForm qf = QuadraticForm::from_polynomial(qtop);
    if (sgn(qf.M(0, 0)) != 0) {
      const CriterionVerdict cross = coefficient_matching_quadratic_3var(qf);
      out["cross_check"] = to_json(cross);
      out["cross_check_agrees"] = cross.outcome == v.outcome;
    }
  }
  if (v.degree >= 3) {
    out["trials"] = options.trials;
    out["seed"] = options.seed;
  }
  return out;
}

}  // namespace

Json realize(const Json& input, const Options& options) {
  const Json& source = input.contains("transform") ? input.at("transform") : input;
  const RationalTransform t = transform_from_json(source);
  RealizeOptions ropt;
  ropt.points = options.points;
  ropt.seed = options.seed;
  const Realization r = assemble_kulkarni(t, ropt);
  Json out = header("realize");
  out["transform"] = to_json(t);
  out["rep"] = to_json(r.rep);
  if (options.exact) out["exact_rep"] = to_json(r.exact);
  out["report"] = to_json(r.report);
  return out;
}

Json check_mphstar(const Json& input, const Options& options) {
  if (!input.is_object()) throw ParseError("expected a JSON object");
  if (input.contains("transform") && input.contains("rep")) {
    // A realize report: its source transform carries the denominator.
    const RationalTransform t = transform_from_json(input.at("transform"));
    return verdict_report(t.den, options.minimal && t.coprime_declared, options,
                          "realize report (source transform denominator)");
  }
  if (input.contains("rep") || input.contains("T")) {
    const ExactKulkarniRep rep = exact_rep_from_json(rep_member(input));
    const Polynomial F = symbolic_denominator(rep);
    Json out = verdict_report(F, false, options, "representation (subset determinant expansion)");
    out["caveat"] =
        "det(-T + diag(K s)) is a multiple of the minimal-form denominator; a negative verdict "
        "on it does not by itself exclude MPH*";
    return out;
  }
  if (input.contains("den")) {
    const RationalTransform t = transform_from_json(input);
    return verdict_report(t.den, options.minimal && t.coprime_declared, options,
                          "transform denominator");
  }
  return verdict_report(polynomial_from_json(input), options.minimal, options, "polynomial");
}

Json project(const Json& input, const Options& options) {
  const KulkarniRep rep = rep_from_json(rep_member(input));
  if (options.direction.empty()) throw DomainError("a projection direction is required");
  const UnivariateME law = mvph::project(rep, options.direction);
  const std::vector<double> grid =
      options.u_grid.empty() ? std::vector<double>{0.0, 0.5, 1.0, 2.0} : options.u_grid;
  Json table = Json::array();
  for (double u : grid) {
    std::vector<double> s(options.direction.size());
    for (std::size_t j = 0; j < s.size(); ++j) s[j] = u * options.direction[j];
    table.push_back({{"u", u}, {"transform", law.transform(u)}, {"joint", transform_eval(rep, s)}});
  }
  Json out = header("project");
  out["a"] = vec(options.direction);
  out["univariate"] = to_json(law);
  out["table"] = std::move(table);
  return out;
}

Json simulate(const Json& input, const Options& options) {
  const KulkarniRep rep = rep_from_json(rep_member(input));
  const ValidationReport validation = validate_mphstar(rep);
  if (!validation.ok()) {
    throw DomainError("simulation needs a valid MPH* representation; failed: " +
                      validation.failures());
  }
  const std::size_t samples = options.samples.value_or(100000);
  const auto points = options.s_points.empty() ? default_points(rep.nvars()) : options.s_points;
  const mcsim::Summary summary =
      mcsim::summarize(rep, points, samples, options.seed, options.workers);
  Json transforms = Json::array();
  for (const auto& row : summary.transforms) {
    transforms.push_back({{"s", vec(row.s)},
                          {"estimate", row.empirical.estimate},
                          {"standard_error", row.empirical.standard_error},
                          {"exact", row.exact},
                          {"gap_over_se", row.gap_over_se}});
  }
  Json cov = Json::array();
  for (Eigen::Index i = 0; i < summary.covariance.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < summary.covariance.cols(); ++j) row.push_back(summary.covariance(i, j));
    cov.push_back(std::move(row));
  }
  Json out = header("simulate");
  out["seed"] = options.seed;
  out["samples"] = samples;
  out["mean"] = std::vector<double>(summary.mean.data(), summary.mean.data() + summary.mean.size());
  out["covariance"] = std::move(cov);
  out["transforms"] = std::move(transforms);
  if (!options.direction.empty()) {
    const std::vector<double> grid =
        options.u_grid.empty() ? std::vector<double>{0.0, 0.5, 1.0, 2.0} : options.u_grid;
    const auto table =
        mcsim::mc_projection_check(rep, options.direction, grid, samples, options.seed, options.workers);
    Json rows = Json::array();
    for (const auto& r : table.rows) {
      rows.push_back({{"u", r.u},
                      {"estimate", r.empirical.estimate},
                      {"standard_error", r.empirical.standard_error},
                      {"exact", r.exact},
                      {"gap_over_se", r.gap_over_se}});
    }
    out["projection"] = {{"a", vec(table.a)}, {"rows", std::move(rows)}, {"max_gap_over_se", table.max_gap_over_se}};
  }
  return out;
}

Json wishart_demo(const Options& options) {
  namespace w = mvph::wishart;
  const Polynomial Q = w::transform_poly();
  const Polynomial qtop = extract_qtop(Q);
  Json out = header("wishart-demo");
  out["seed"] = options.seed;
  out["Q"] = to_json(Q);
  out["qtop"] = to_json(qtop);

  CertificateOptions copt;
  copt.trials = options.trials;
  copt.seed = options.seed;
  const CriterionVerdict rank_verdict = mphstar_certificate(Q, true, copt);
  const CriterionVerdict matching =
      coefficient_matching_quadratic_3var(QuadraticForm::from_polynomial(qtop));
  const CriterionVerdict restriction = restriction_reject(qtop, copt.trials, copt.seed);
  out["verdict"] = to_json(rank_verdict);
  out["coefficient_matching"] = to_json(matching);
  out["restriction"] = to_json(restriction);
  out["verdicts_agree"] = rank_verdict.outcome == matching.outcome &&
                          matching.outcome == restriction.outcome;

  const std::vector<w::Vec3> directions{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}, {0.5, 0.2, 0.3}};
  Json projections = Json::array();
  for (const auto& a : directions) {
    for (double u : {0.5, 1.0, 2.0}) {
      const w::Projection p = w::projection_transform(a, u);
      const double joint = w::transform_closed({u * a[0], u * a[1], u * a[2]});
      projections.push_back({{"a", a},
                             {"u", u},
                             {"lambda1", p.lambda1},
                             {"lambda2", p.lambda2},
                             {"exponential_product", p.value},
                             {"joint", joint},
                             {"abs_diff", std::abs(p.value - joint)}});
    }
  }
  out["projections"] = std::move(projections);

  const std::size_t samples = options.samples.value_or(1000000);
  if (samples > 0) {
    const std::vector<w::Vec3> grid{{0, 0, 0},   {0.2, 0, 0}, {0, 0.2, 0}, {0, 0, 0.2},
                                    {1, 0, 0},   {0, 1, 0},   {0, 0, 1},   {0.2, 0.1, 0.1}};
    const auto estimates = w::mc_transform(grid, samples, options.seed, options.workers);
    Json rows = Json::array();
    bool all_within = true;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const std::vector<Rational> point{exact_rational(grid[k][0]), exact_rational(grid[k][1]),
                                        exact_rational(grid[k][2])};
      const double exact = to_double(1 / Q.evaluate(std::span<const Rational>(point)));
      const double gap = std::abs(estimates[k].estimate - exact);
      const double se = estimates[k].standard_error;
      const double ratio = se > 0.0 ? gap / se : (gap == 0.0 ? 0.0 : INFINITY);
      all_within = all_within && ratio <= 4.0;
      rows.push_back({{"s", grid[k]},
                      {"estimate", estimates[k].estimate},
                      {"standard_error", se},
                      {"exact", exact},
                      {"gap_over_se", ratio},
                      {"within_4se", ratio <= 4.0}});
    }
    out["monte_carlo"] = {{"samples", samples}, {"seed", options.seed}, {"rows", std::move(rows)},
                          {"all_within_4se", all_within}};
  } else {
    out["monte_carlo"] = nullptr;
  }

  const w::Normalization norm = w::density_normalization();
  out["density_normalization"] = {{"x1_max", norm.x1_max},
                                  {"integral", norm.integral},
                                  {"expected", norm.expected},
                                  {"abs_error_vs_one", std::abs(norm.integral - 1.0)}};

  const RationalTransform ext = w::extend_to_n(4);
  const CriterionVerdict ext_verdict = mphstar_certificate(ext.den, true, copt);
  const std::vector<Polynomial> lift{Polynomial::variable(4, 0), Polynomial::variable(4, 1),
                                     Polynomial::variable(4, 2)};
  const Polynomial ext_top = leading_part(ext.den);
  out["extension_n4"] = {{"den", to_json(ext.den)},
                         {"qtop", to_json(ext_top)},
                         {"contains_trivariate_qtop",
                          poly_divides(substitute(qtop, lift), ext_top).has_value()},
                         {"verdict", to_json(ext_verdict)}};
  return out;
}

}  // namespace mvph::commands
