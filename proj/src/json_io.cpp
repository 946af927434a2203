#include "mvph/json_io.hpp"

#include <variant>

#include "mvph/error.hpp"

namespace mvph {
namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

Rational rational_value(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number_float()) return exact_rational(j.get<double>());
  throw ParseError("expected a rational number");
}

double double_value(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return to_double(parse_rational(j.get<std::string>()));
  throw ParseError("expected a number");
}

std::size_t size_value(const Json& j) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long>() >= 0)) {
    throw ParseError("expected a non-negative integer");
  }
  return j.get<std::size_t>();
}

const Json& array(const Json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + " must be an array");
  return j;
}

Json vector_json(const Eigen::Ref<const Eigen::VectorXd>& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i) == 0.0 ? 0.0 : v(i));
  return out;
}

Json matrix_json(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(vector_json(m.row(i).transpose()));
  return out;
}

Json exact_matrix_json(const RationalMatrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_string(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

Json exact_vector_json(const RationalMatrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out.push_back(to_string(m(i, j)));
  }
  return out;
}

RationalMatrix exact_matrix(const Json& j, std::size_t rows, std::size_t cols, const char* what) {
  array(j, what);
  if (j.size() != rows) throw DomainError(std::string(what) + " has the wrong number of rows");
  RationalMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const Json& row = array(j[i], what);
    if (row.size() != cols) throw DomainError(std::string(what) + " has the wrong number of columns");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = rational_value(row[k]);
  }
  return m;
}

RationalMatrix exact_vector(const Json& j, std::size_t size, bool as_row, const char* what) {
  array(j, what);
  if (j.size() != size) throw DomainError(std::string(what) + " has the wrong length");
  RationalMatrix m(as_row ? 1 : size, as_row ? size : 1);
  for (std::size_t i = 0; i < size; ++i) {
    (as_row ? m(0, i) : m(i, 0)) = rational_value(j[i]);
  }
  return m;
}

Eigen::MatrixXd double_matrix(const Json& j, std::size_t rows, std::size_t cols, const char* what) {
  array(j, what);
  if (j.size() != rows) throw DomainError(std::string(what) + " has the wrong number of rows");
  Eigen::MatrixXd m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const Json& row = array(j[i], what);
    if (row.size() != cols) throw DomainError(std::string(what) + " has the wrong number of columns");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = double_value(row[k]);
  }
  return m;
}

Eigen::VectorXd double_vector(const Json& j, std::size_t size, const char* what) {
  array(j, what);
  if (j.size() != size) throw DomainError(std::string(what) + " has the wrong length");
  Eigen::VectorXd v(size);
  for (std::size_t i = 0; i < size; ++i) v(i) = double_value(j[i]);
  return v;
}

// m from the T rows, n from the first K row; explicit "m"/"n" must agree.
std::pair<std::size_t, std::size_t> rep_dimensions(const Json& j) {
  const Json& T = array(field(j, "T"), "T");
  const Json& K = array(field(j, "K"), "K");
  const std::size_t m = T.size();
  std::size_t n = 0;
  if (j.contains("n")) {
    n = size_value(j.at("n"));
  } else if (!K.empty()) {
    n = array(K[0], "K").size();
  }
  if (j.contains("m") && size_value(j.at("m")) != m) throw DomainError("\"m\" disagrees with T");
  return {m, n};
}

Json surds_json(const std::vector<Surd>& v, bool irrational) {
  Json out = Json::array();
  for (const auto& s : v) out.push_back(to_string(irrational ? s.b : s.a));
  return out;
}

Json upoly_json(const UPoly& p) {
  Json out = Json::array();
  for (const auto& c : p) out.push_back(to_string(c));
  return out;
}

}  // namespace

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

Json to_json(const Polynomial& p) {
  Json terms = Json::array();
  for (const auto& [mono, c] : p.terms()) {
    terms.push_back({{"e", mono.exponents()}, {"c", to_string(c)}});
  }
  return {{"n", p.nvars()}, {"terms", std::move(terms)}};
}

Polynomial polynomial_from_json(const Json& j) {
  try {
    const std::size_t n = size_value(field(j, "n"));
    if (j.contains("expr")) return Polynomial::parse(j.at("expr").get<std::string>(), n);
    Polynomial p(n);
    for (const auto& term : array(field(j, "terms"), "terms")) {
      const Json& e = array(field(term, "e"), "e");
      if (e.size() != n) throw DomainError("exponent vector length differs from n");
      std::vector<unsigned> exps;
      for (const auto& x : e) exps.push_back(static_cast<unsigned>(size_value(x)));
      p.add_term(Monomial(std::move(exps)), rational_value(field(term, "c")));
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid polynomial: ") + e.what());
  }
}

Json to_json(const RationalTransform& t) {
  return {{"p0", to_string(t.p0)},
          {"num", to_json(t.num)},
          {"den", to_json(t.den)},
          {"coprime_declared", t.coprime_declared}};
}

RationalTransform transform_from_json(const Json& j) {
  RationalTransform t;
  t.p0 = j.contains("p0") ? rational_value(j.at("p0")) : Rational(0);
  t.num = polynomial_from_json(field(j, "num"));
  t.den = polynomial_from_json(field(j, "den"));
  t.coprime_declared = j.value("coprime_declared", false);
  if (t.num.nvars() != t.den.nvars()) throw DomainError("numerator and denominator dimensions differ");
  return t;
}

Json to_json(const KulkarniRep& rep) {
  return {{"m", rep.states()},
          {"n", rep.nvars()},
          {"alpha", vector_json(rep.alpha.transpose())},
          {"T", matrix_json(rep.T)},
          {"K", matrix_json(rep.K)},
          {"t", vector_json(rep.t)},
          {"p0", rep.p0}};
}

Json to_json(const ExactKulkarniRep& rep) {
  return {{"m", rep.states()},
          {"n", rep.nvars()},
          {"exact", true},
          {"alpha", exact_vector_json(rep.alpha)},
          {"T", exact_matrix_json(rep.T)},
          {"K", exact_matrix_json(rep.K)},
          {"t", exact_vector_json(rep.t)},
          {"p0", to_string(rep.p0)}};
}

KulkarniRep rep_from_json(const Json& j) {
  try {
    if (j.value("exact", false)) return exact_rep_from_json(j).to_double();
    const auto [m, n] = rep_dimensions(j);
    KulkarniRep rep;
    rep.alpha = double_vector(field(j, "alpha"), m, "alpha").transpose();
    rep.T = double_matrix(field(j, "T"), m, m, "T");
    rep.K = double_matrix(field(j, "K"), m, n, "K");
    rep.t = j.contains("t") ? double_vector(j.at("t"), m, "t")
                            : Eigen::VectorXd(-(rep.T * Eigen::VectorXd::Ones(m)));
    rep.p0 = j.contains("p0") ? double_value(j.at("p0")) : 1.0 - rep.alpha.sum();
    return rep;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid representation: ") + e.what());
  }
}

ExactKulkarniRep exact_rep_from_json(const Json& j) {
  try {
    const auto [m, n] = rep_dimensions(j);
    ExactKulkarniRep rep;
    rep.alpha = exact_vector(field(j, "alpha"), m, true, "alpha");
    rep.T = exact_matrix(field(j, "T"), m, m, "T");
    rep.K = exact_matrix(field(j, "K"), m, n, "K");
    if (j.contains("t")) {
      rep.t = exact_vector(j.at("t"), m, false, "t");
    } else {
      rep.t = RationalMatrix(m, 1);
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = 0; k < m; ++k) rep.t(i, 0) -= rep.T(i, k);
      }
    }
    if (j.contains("p0")) {
      rep.p0 = rational_value(j.at("p0"));
    } else {
      rep.p0 = 1;
      for (std::size_t i = 0; i < m; ++i) rep.p0 -= rep.alpha(0, i);
    }
    return rep;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid representation: ") + e.what());
  }
}

Json to_json(const UnivariateME& law) {
  return {{"alpha", vector_json(law.alpha.transpose())},
          {"T", matrix_json(law.T)},
          {"t", vector_json(law.t)},
          {"p0", law.p0},
          {"rates", vector_json(law.rates)}};
}

Json to_json(const LinearResolvent& r) {
  Json A = Json::array();
  for (const auto& a : r.A) A.push_back(matrix_json(a));
  return {{"n", r.n},
          {"N", r.N},
          {"eta", vector_json(r.eta.transpose())},
          {"A", std::move(A)},
          {"b", vector_json(r.b)}};
}

Json to_json(const RealizeReport& report) {
  Json stages = Json::array();
  for (const auto& s : report.stages) {
    stages.push_back({{"stage", s.stage}, {"max_rel_error", s.max_rel_error}});
  }
  Json spectrum = {{"nilpotent_shift_exact", report.spectrum.nilpotent_shift}};
  if (report.spectrum.max_deviation >= 0.0) {
    spectrum["max_eigenvalue_deviation"] = report.spectrum.max_deviation;
  }
  return {{"degenerate", report.degenerate},
          {"dimensions",
           {{"n", report.n},
            {"rho", report.rho},
            {"N", report.N},
            {"q", report.q},
            {"ell", report.ell}}},
          {"closing_column", {{"pivot", report.closing_pivot}, {"condition", report.closing_condition}}},
          {"verification",
           {{"seed", report.seed},
            {"points", report.points.size()},
            {"radius", report.radius},
            {"stages", std::move(stages)},
            {"max_rel_error", report.max_rel_error}}},
          {"spectrum", std::move(spectrum)}};
}

Json to_json(const CriterionVerdict& v) {
  Json evidence = std::visit(
      [](const auto& e) -> Json {
        using E = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<E, FactorEvidence>) {
          Json factors = Json::array();
          const bool surd = e.radicand != 1;
          for (const auto& l : e.factors) {
            Json f = {{"coeffs", surds_json(l, false)}};
            if (surd) f["sqrt"] = surds_json(l, true);
            factors.push_back(std::move(f));
          }
          Json out = {{"kind", "factors"}, {"c0", to_string(e.c0)}, {"nu", e.factors.size()}};
          if (surd) out["radicand"] = to_string(e.radicand);
          out["factors"] = std::move(factors);
          return out;
        } else if constexpr (std::is_same_v<E, RankEvidence>) {
          Json out = {{"kind", e.kind}, {"rank", e.rank}, {"rows", e.rows}, {"cols", e.cols}};
          out["minor"] = to_string(e.minor);
          if (e.kind == "rank" && e.rows.size() == e.n && e.cols.size() == e.n) {
            out["detM"] = to_string(e.minor);
          }
          return out;
        } else if constexpr (std::is_same_v<E, MatchingEvidence>) {
          Json candidates = Json::array();
          for (const auto& c : e.candidates) {
            if (sgn(c.b) == 0) {
              candidates.push_back(to_string(c.a));
            } else {
              candidates.push_back({{"rational", to_string(c.a)},
                                    {"sqrt_coeff", to_string(c.b)},
                                    {"radicand", to_string(e.disc2 * e.disc3)}});
            }
          }
          return {{"kind", "coefficient_matching"},
                  {"p2", to_string(e.p2)},
                  {"p3", to_string(e.p3)},
                  {"c22", to_string(e.c22)},
                  {"c33", to_string(e.c33)},
                  {"mixed", to_string(e.c23)},
                  {"disc2", to_string(e.disc2)},
                  {"disc3", to_string(e.disc3)},
                  {"candidates", std::move(candidates)}};
        } else if constexpr (std::is_same_v<E, RestrictionEvidence>) {
          return {{"kind", "restriction"},
                  {"trial", e.trial},
                  {"plane", {{"p", e.p}, {"q", e.q}}},
                  {"restriction", upoly_json(e.restriction)},
                  {"squarefree_degree", e.squarefree_degree},
                  {"real_roots", e.real_roots}};
        } else {
          return {{"kind", "none"}, {"trials", e.trials}, {"seed", e.seed}, {"skipped", e.skipped}};
        }
      },
      v.evidence);
  return {{"outcome", to_string(v.outcome)},
          {"method", v.method},
          {"degree", v.degree},
          {"minimal_declared", v.minimal_declared},
          {"excludes_mphstar", v.excludes_mphstar},
          {"note", v.note},
          {"evidence", std::move(evidence)}};
}

Json to_json(const Estimate& e) {
  return {{"estimate", e.estimate},
          {"standard_error", e.standard_error},
          {"samples", e.samples},
          {"seed", e.seed}};
}

Json to_json(const ValidationReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  return {{"ok", r.ok()}, {"checks", std::move(checks)}};
}

}  // namespace mvph
