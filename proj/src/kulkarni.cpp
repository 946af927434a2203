#include "mvph/kulkarni.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mvph/error.hpp"
#include "mvph/random.hpp"

namespace mvph {
namespace {

constexpr double kSingularRcond = 1e-14;

void check_shapes(const KulkarniRep& rep) {
  const auto m = rep.T.rows();
  if (rep.T.cols() != m || rep.alpha.size() != m || rep.K.rows() != m || rep.t.size() != m) {
    throw DomainError("inconsistent representation shapes");
  }
}

std::string fmt(double x) {
  std::ostringstream out;
  out.precision(6);
  out << x;
  return out.str();
}

}  // namespace

KulkarniRep KulkarniRep::markovian(Eigen::RowVectorXd alpha, Eigen::MatrixXd T, Eigen::MatrixXd K) {
  KulkarniRep rep;
  rep.t = -(T * Eigen::VectorXd::Ones(T.cols()));
  rep.p0 = 1.0 - alpha.sum();
  rep.alpha = std::move(alpha);
  rep.T = std::move(T);
  rep.K = std::move(K);
  check_shapes(rep);
  return rep;
}

ExactKulkarniRep ExactKulkarniRep::markovian(RationalMatrix alpha, RationalMatrix T,
                                             RationalMatrix K) {
  ExactKulkarniRep rep;
  const std::size_t m = T.rows();
  if (!T.square() || alpha.rows() != 1 || alpha.cols() != m || K.rows() != m) {
    throw DomainError("inconsistent representation shapes");
  }
  rep.t = RationalMatrix(m, 1);
  for (std::size_t i = 0; i < m; ++i) {
    Rational row = 0;
    for (std::size_t j = 0; j < m; ++j) row += T(i, j);
    rep.t(i, 0) = -row;
  }
  Rational mass = 0;
  for (std::size_t j = 0; j < m; ++j) mass += alpha(0, j);
  rep.p0 = 1 - mass;
  rep.alpha = std::move(alpha);
  rep.T = std::move(T);
  rep.K = std::move(K);
  return rep;
}

ExactKulkarniRep ExactKulkarniRep::exact(const KulkarniRep& rep) {
  check_shapes(rep);
  ExactKulkarniRep e;
  e.alpha = RationalMatrix::exact(rep.alpha);
  e.T = RationalMatrix::exact(rep.T);
  e.K = RationalMatrix::exact(rep.K);
  e.t = RationalMatrix::exact(rep.t);
  e.p0 = exact_rational(rep.p0);
  return e;
}

KulkarniRep ExactKulkarniRep::to_double() const {
  KulkarniRep rep;
  rep.alpha = alpha.to_double();
  rep.T = T.to_double();
  rep.K = K.to_double();
  rep.t = t.to_double();
  rep.p0 = p0.get_d();
  check_shapes(rep);
  return rep;
}

// ---------------------------------------------------------------------------

double UnivariateME::transform(double u) const {
  Eigen::MatrixXd m = -T;
  m.diagonal() += u * rates;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  if (!(lu.rcond() > kSingularRcond)) throw DomainError("singular univariate resolvent");
  return p0 + alpha.dot(lu.solve(t));
}

bool UnivariateME::has_unit_rates() const { return (rates.array() == 1.0).all(); }

UnivariateME UnivariateME::standard_form() const {
  if (!(rates.array() > 0.0).all()) {
    throw DomainError("standard form needs strictly positive rates");
  }
  UnivariateME out = *this;
  const Eigen::VectorXd inv = rates.cwiseInverse();
  out.T = inv.asDiagonal() * T;
  out.t = inv.asDiagonal() * t;
  out.rates = Eigen::VectorXd::Ones(rates.size());
  return out;
}

double transform_eval(const KulkarniRep& rep, std::span<const double> s) {
  check_shapes(rep);
  if (s.size() != rep.nvars()) throw DomainError("transform point has the wrong dimension");
  const Eigen::Map<const Eigen::VectorXd> sv(s.data(), static_cast<Eigen::Index>(s.size()));
  Eigen::MatrixXd m = -rep.T;
  m.diagonal() += rep.K * sv;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  if (!(lu.rcond() > kSingularRcond)) throw DomainError("singular resolvent matrix");
  const double v = rep.p0 + rep.alpha.dot(lu.solve(rep.t));
  if (!std::isfinite(v)) throw DomainError("singular resolvent matrix");
  return v;
}

UnivariateME project(const KulkarniRep& rep, std::span<const double> a) {
  check_shapes(rep);
  if (a.size() != rep.nvars()) throw DomainError("projection direction has the wrong dimension");
  bool nonzero = false;
  for (double x : a) {
    if (!(x >= 0.0)) throw DomainError("projection direction must be non-negative");
    nonzero = nonzero || x > 0.0;
  }
  if (!nonzero) throw DomainError("projection direction must be non-zero");
  const Eigen::Map<const Eigen::VectorXd> av(a.data(), static_cast<Eigen::Index>(a.size()));
  return UnivariateME{rep.alpha, rep.T, rep.t, rep.p0, rep.K * av};
}

// ---------------------------------------------------------------------------

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

std::string ValidationReport::failures() const {
  std::string out;
  for (const auto& c : checks) {
    if (c.passed) continue;
    if (!out.empty()) out += ", ";
    out += c.name;
  }
  return out;
}

ValidationReport validate_mphstar(const KulkarniRep& rep, double tol) {
  ValidationReport report;
  auto add = [&](std::string name, bool passed, std::string detail = {}) {
    report.checks.push_back({std::move(name), passed, std::move(detail)});
  };
  const auto m = rep.T.rows();
  const bool shapes = rep.T.cols() == m && rep.alpha.size() == m && rep.K.rows() == m &&
                      rep.t.size() == m && m > 0;
  add("shapes", shapes);
  if (!shapes) return report;

  double worst_diag = -INFINITY, worst_off = INFINITY, worst_row = -INFINITY;
  for (Eigen::Index i = 0; i < m; ++i) {
    worst_diag = std::max(worst_diag, rep.T(i, i));
    worst_row = std::max(worst_row, rep.T.row(i).sum());
    for (Eigen::Index j = 0; j < m; ++j) {
      if (i != j) worst_off = std::min(worst_off, rep.T(i, j));
    }
  }
  if (m == 1) worst_off = 0.0;
  const bool diag_ok = worst_diag < 0.0;
  const bool off_ok = worst_off >= -tol;
  add("T_ii < 0", diag_ok, "max diagonal " + fmt(worst_diag));
  add("T_ij >= 0 (i != j)", off_ok, "min off-diagonal " + fmt(worst_off));
  add("T1 <= 0", worst_row <= tol, "max row sum " + fmt(worst_row));

  const SpectrumReport spectrum = hurwitz_check(rep.T);
  bool transient = spectrum.stable;
  std::string detail = "max real part " + fmt(spectrum.max_real);
  if (transient && diag_ok && off_ok) {
    // Exact principal minors of -T on all subsets for small m, otherwise a
    // fixed sample (singletons, the full set, 64 seeded subsets).
    const RationalMatrix negT = -RationalMatrix::exact(rep.T);
    std::vector<std::vector<std::size_t>> subsets;
    const auto mu = static_cast<std::size_t>(m);
    if (mu <= 10) {
      for (std::size_t mask = 1; mask < (std::size_t{1} << mu); ++mask) {
        std::vector<std::size_t> s;
        for (std::size_t i = 0; i < mu; ++i) {
          if (mask >> i & 1U) s.push_back(i);
        }
        subsets.push_back(std::move(s));
      }
    } else {
      for (std::size_t i = 0; i < mu; ++i) subsets.push_back({i});
      std::vector<std::size_t> all(mu);
      for (std::size_t i = 0; i < mu; ++i) all[i] = i;
      subsets.push_back(all);
      Rng rng(0x5EEDULL);
      for (int k = 0; k < 64; ++k) {
        std::vector<std::size_t> s;
        for (std::size_t i = 0; i < mu; ++i) {
          if (rng.uniform() < 0.5) s.push_back(i);
        }
        if (!s.empty()) subsets.push_back(std::move(s));
      }
    }
    for (const auto& s : subsets) {
      if (sgn(principal_minor(negT, s)) <= 0) {
        transient = false;
        detail += "; non-positive principal minor of -T";
        break;
      }
    }
    if (transient) detail += "; " + std::to_string(subsets.size()) + " principal minors positive";
  } else if (transient) {
    detail += "; minors skipped (not a Z-matrix)";
  }
  add("transient", transient, detail);

  add("alpha >= 0", rep.alpha.minCoeff() >= -tol, "min entry " + fmt(rep.alpha.minCoeff()));
  const double mass = rep.alpha.sum();
  add("alpha1 <= 1", mass <= 1.0 + tol, "alpha1 = " + fmt(mass));
  add("K >= 0", rep.K.size() == 0 || rep.K.minCoeff() >= -tol,
      rep.K.size() == 0 ? std::string{} : "min entry " + fmt(rep.K.minCoeff()));
  const Eigen::VectorXd exit = -(rep.T * Eigen::VectorXd::Ones(m));
  const double t_gap = (rep.t - exit).cwiseAbs().maxCoeff();
  add("t = -T1", t_gap <= tol, "max deviation " + fmt(t_gap));
  const double p0_gap = std::abs(rep.p0 - (1.0 - mass));
  add("p0 = 1 - alpha1", p0_gap <= tol, "deviation " + fmt(p0_gap));
  return report;
}

// ---------------------------------------------------------------------------

Rational principal_minor(const RationalMatrix& a, const std::vector<std::size_t>& subset) {
  if (!a.square()) throw DomainError("principal minor of a non-square matrix");
  std::vector<bool> seen(a.rows(), false);
  for (std::size_t i : subset) {
    if (i >= a.rows() || seen[i]) throw DomainError("invalid principal minor index set");
    seen[i] = true;
  }
  return determinant(a.submatrix(subset, subset));
}

Polynomial symbolic_denominator(const RationalMatrix& T, const RationalMatrix& K) {
  const std::size_t m = T.rows();
  if (!T.square() || K.rows() != m) throw DomainError("inconsistent T and K shapes");
  if (m > 20) throw DomainError("subset expansion guard: m = " + std::to_string(m) + " > 20");
  const std::size_t n = K.cols();

  std::vector<std::size_t> active;  // reward rows not identically zero
  std::vector<Polynomial> kappa(m, Polynomial(n));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (sgn(K(i, j)) != 0) kappa[i].add_term(Monomial::unit(n, j), K(i, j));
    }
    if (!kappa[i].is_zero()) active.push_back(i);
  }
  const RationalMatrix negT = -T;
  Polynomial F(n);
  const std::size_t subsets = std::size_t{1} << active.size();
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    std::vector<bool> in_j(m, false);
    Polynomial product = Polynomial::constant(n, 1);
    for (std::size_t k = 0; k < active.size(); ++k) {
      if (mask >> k & 1U) {
        in_j[active[k]] = true;
        product = product * kappa[active[k]];
      }
    }
    std::vector<std::size_t> complement;
    for (std::size_t i = 0; i < m; ++i) {
      if (!in_j[i]) complement.push_back(i);
    }
    const Rational minor = principal_minor(negT, complement);
    if (sgn(minor) != 0) F += product * minor;
  }
  return F;
}

std::vector<std::vector<Polynomial>> resolvent_matrix(const RationalMatrix& T,
                                                      const RationalMatrix& K) {
  const std::size_t m = T.rows();
  if (!T.square() || K.rows() != m) throw DomainError("inconsistent T and K shapes");
  const std::size_t n = K.cols();
  std::vector<std::vector<Polynomial>> out(m, std::vector<Polynomial>(m, Polynomial(n)));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) out[i][j] = Polynomial::constant(n, -T(i, j));
    for (std::size_t j = 0; j < n; ++j) {
      if (sgn(K(i, j)) != 0) out[i][i].add_term(Monomial::unit(n, j), K(i, j));
    }
  }
  return out;
}

Polynomial polynomial_determinant(std::vector<std::vector<Polynomial>> m) {
  const std::size_t size = m.size();
  for (const auto& row : m) {
    if (row.size() != size) throw DomainError("determinant of a non-square polynomial matrix");
  }
  if (size == 0) return Polynomial::constant(0, 1);
  const std::size_t n = m[0][0].nvars();
  Polynomial previous = Polynomial::constant(n, 1);
  bool negate = false;
  for (std::size_t k = 0; k + 1 < size; ++k) {
    std::size_t pivot = k;
    while (pivot < size && m[pivot][k].is_zero()) ++pivot;
    if (pivot == size) return Polynomial(n);
    if (pivot != k) {
      std::swap(m[pivot], m[k]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < size; ++i) {
      for (std::size_t j = k + 1; j < size; ++j) {
        Polynomial cross = m[k][k] * m[i][j] - m[i][k] * m[k][j];
        auto exact = poly_divides(previous, cross);
        if (!exact) throw Error("Bareiss step was not exact");
        m[i][j] = std::move(*exact);
      }
      m[i][k] = Polynomial(n);
    }
    previous = m[k][k];
  }
  Polynomial det = m[size - 1][size - 1];
  return negate ? -det : det;
}

SpectrumReport hurwitz_check(const Eigen::MatrixXd& T) {
  if (T.rows() != T.cols()) throw DomainError("spectrum of a non-square matrix");
  SpectrumReport report;
  if (T.rows() == 0) return report;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(T, false);
  if (solver.info() != Eigen::Success) throw Error("eigenvalue iteration did not converge");
  report.max_real = -INFINITY;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const std::complex<double> ev = solver.eigenvalues()[i];
    report.eigenvalues.push_back(ev);
    report.max_real = std::max(report.max_real, ev.real());
  }
  report.stable = report.max_real < -1e-10;
  return report;
}

std::vector<std::complex<double>> high_precision_eigenvalues(const RationalMatrix& a) {
  using Real = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<50>,
                                             boost::multiprecision::et_off>;
  using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  if (!a.square()) throw DomainError("spectrum of a non-square matrix");
  const auto n = static_cast<Eigen::Index>(a.rows());
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Rational& q = a(i, j);
      m(i, j) = Real(q.get_num().get_str()) / Real(q.get_den().get_str());
    }
  }
  Eigen::EigenSolver<Matrix> solver(m, false);
  if (solver.info() != Eigen::Success) throw Error("eigenvalue iteration did not converge");
  std::vector<std::complex<double>> out;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto ev = solver.eigenvalues()[i];
    out.emplace_back(static_cast<double>(ev.real()), static_cast<double>(ev.imag()));
  }
  return out;
}

}  // namespace mvph
