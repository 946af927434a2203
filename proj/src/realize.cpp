#include "mvph/realize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mvph/error.hpp"
#include "mvph/random.hpp"

namespace mvph {
namespace {

using Eigen::MatrixXd;
using Eigen::RowVectorXd;
using Eigen::VectorXd;

constexpr double kMaxCondition = 1e12;

void check_point(std::size_t n, std::span<const double> s) {
  if (s.size() != n) throw DomainError("evaluation point has the wrong dimension");
}

void same_dimension(const FMRealization& f, const FMRealization& g) {
  if (f.n != g.n) throw DomainError("dimension mismatch: " + std::to_string(f.n) + " vs " +
                                    std::to_string(g.n));
}

// x = M^{-1} rhs with a singularity check.
VectorXd solve_checked(const MatrixXd& m, const VectorXd& rhs) {
  Eigen::PartialPivLU<MatrixXd> lu(m);
  if (!(lu.rcond() > 1e-14)) throw DomainError("singular resolvent at evaluation point");
  return lu.solve(rhs);
}

double norm_estimate(const MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  const double one = a.cwiseAbs().colwise().sum().maxCoeff();
  const double inf = a.cwiseAbs().rowwise().sum().maxCoeff();
  return std::sqrt(one * inf);
}

double rel_error(double value, double reference) {
  const double scale = std::max(std::abs(reference), std::numeric_limits<double>::min());
  return std::abs(value - reference) / scale;
}

}  // namespace

double FMRealization::evaluate(std::span<const double> s) const {
  check_point(n, s);
  if (rho == 0) return d;
  MatrixXd m = MatrixXd::Identity(rho, rho);
  VectorXd u = VectorXd::Zero(rho);
  for (std::size_t j = 0; j < n; ++j) {
    m -= s[j] * R[j];
    u += s[j] * b[j];
  }
  return d + c.dot(solve_checked(m, u));
}

FMRealization fm_const(double v, std::size_t n) {
  FMRealization f;
  f.n = n;
  f.d = v;
  f.c = RowVectorXd(0);
  f.R.assign(n, MatrixXd(0, 0));
  f.b.assign(n, VectorXd(0));
  return f;
}

FMRealization fm_var(std::size_t j, std::size_t n) {
  if (j >= n) throw DomainError("variable index out of range");
  FMRealization f;
  f.n = n;
  f.rho = 1;
  f.c = RowVectorXd::Ones(1);
  f.R.assign(n, MatrixXd::Zero(1, 1));
  f.b.assign(n, VectorXd::Zero(1));
  f.b[j](0) = 1.0;
  return f;
}

FMRealization fm_add(const FMRealization& f, const FMRealization& g) {
  same_dimension(f, g);
  FMRealization h;
  h.n = f.n;
  h.rho = f.rho + g.rho;
  h.d = f.d + g.d;
  h.c.resize(h.rho);
  h.c << f.c, g.c;
  for (std::size_t j = 0; j < f.n; ++j) {
    MatrixXd r = MatrixXd::Zero(h.rho, h.rho);
    r.topLeftCorner(f.rho, f.rho) = f.R[j];
    r.bottomRightCorner(g.rho, g.rho) = g.R[j];
    VectorXd b(h.rho);
    b << f.b[j], g.b[j];
    h.R.push_back(std::move(r));
    h.b.push_back(std::move(b));
  }
  return h;
}

FMRealization fm_scale(const FMRealization& f, double v) {
  FMRealization h = f;
  h.d *= v;
  h.c *= v;
  return h;
}

// State (y, x_g): x_g realizes g - d_g, and y = (I - sum s R_f)^{-1} u_f * g, so
// c_f y = (f - d_f) g and the output d_f d_g + c_f y + d_f c_g x_g equals f g.
FMRealization fm_mul(const FMRealization& f, const FMRealization& g) {
  same_dimension(f, g);
  FMRealization h;
  h.n = f.n;
  h.rho = f.rho + g.rho;
  h.d = f.d * g.d;
  h.c.resize(h.rho);
  h.c << f.c, f.d * g.c;
  for (std::size_t j = 0; j < f.n; ++j) {
    MatrixXd r = MatrixXd::Zero(h.rho, h.rho);
    r.topLeftCorner(f.rho, f.rho) = f.R[j];
    r.topRightCorner(f.rho, g.rho) = f.b[j] * g.c;
    r.bottomRightCorner(g.rho, g.rho) = g.R[j];
    VectorXd b(h.rho);
    b << g.d * f.b[j], g.b[j];
    h.R.push_back(std::move(r));
    h.b.push_back(std::move(b));
  }
  return h;
}

// (d + c M^{-1} u)^{-1} = 1/d - (c/d^2) (M + u c/d)^{-1} u, and
// M + u c/d = I - sum s_j (R_j - b_j c/d).
FMRealization fm_inv(const FMRealization& f) {
  if (f.d == 0.0) throw DomainError("not invertible at origin");
  FMRealization h = f;
  h.d = 1.0 / f.d;
  h.c = -f.c / (f.d * f.d);
  for (std::size_t j = 0; j < f.n; ++j) h.R[j] = f.R[j] - f.b[j] * f.c / f.d;
  return h;
}

FMRealization fm_from_polynomial(const Polynomial& p) {
  const std::size_t n = p.nvars();
  FMRealization out = fm_const(to_double(p.constant_term()), n);
  for (const auto& [mono, coeff] : p.terms()) {
    if (mono.degree() == 0) continue;
    FMRealization term = fm_const(1.0, n);
    bool first = true;
    for (std::size_t j = 0; j < n; ++j) {
      for (unsigned e = 0; e < mono[j]; ++e) {
        term = first ? fm_var(j, n) : fm_mul(term, fm_var(j, n));
        first = false;
      }
    }
    out = fm_add(out, fm_scale(term, to_double(coeff)));
  }
  return out;
}

FMRealization fm_from_rational(const Polynomial& num, const Polynomial& den) {
  if (num.nvars() != den.nvars()) throw DomainError("numerator and denominator dimensions differ");
  if (sgn(den.constant_term()) == 0) throw DomainError("denominator vanishes at the origin");
  return fm_mul(fm_from_polynomial(num), fm_inv(fm_from_polynomial(den)));
}

// ---------------------------------------------------------------------------

double LinearResolvent::evaluate(std::span<const double> s) const {
  check_point(n, s);
  MatrixXd m = MatrixXd::Identity(N, N);
  for (std::size_t j = 0; j < n; ++j) m -= s[j] * A[j];
  return eta.dot(solve_checked(m, b));
}

double LinearResolvent::determinant(std::span<const double> s) const {
  check_point(n, s);
  MatrixXd m = MatrixXd::Identity(N, N);
  for (std::size_t j = 0; j < n; ++j) m -= s[j] * A[j];
  return m.determinant();
}

LinearResolvent to_linear_resolvent(const FMRealization& f) {
  LinearResolvent r;
  r.n = f.n;
  r.N = f.rho + 1;
  r.eta.resize(r.N);
  r.eta << f.d, f.c;
  r.b = VectorXd::Zero(r.N);
  r.b(0) = 1.0;
  for (std::size_t j = 0; j < f.n; ++j) {
    MatrixXd a = MatrixXd::Zero(r.N, r.N);
    a.bottomLeftCorner(f.rho, 1) = f.b[j];
    a.bottomRightCorner(f.rho, f.rho) = f.R[j];
    r.A.push_back(std::move(a));
  }
  return r;
}

ClosingColumnResult normalize_closing_column(const LinearResolvent& r) {
  if (r.b.size() == 0) throw DomainError("zero realization");
  Eigen::Index k = 0;
  const double bk_abs = r.b.cwiseAbs().maxCoeff(&k);
  if (bk_abs == 0.0) throw DomainError("zero realization");
  const double bk = r.b(k);
  const VectorXd c = (VectorXd::Ones(r.N) - r.b) / bk;

  // H = I + c e_k^T, H^{-1} = I - b_k c e_k^T. Products are applied as
  // rank-one updates.
  auto left_h = [&](const MatrixXd& a) {  // H a
    MatrixXd out = a;
    out.noalias() += c * a.row(k);
    return out;
  };
  auto right_hinv = [&](const MatrixXd& a) {  // a H^{-1}
    MatrixXd out = a;
    out.col(k).noalias() -= bk * (a * c);
    return out;
  };

  ClosingColumnResult res;
  res.pivot = static_cast<std::size_t>(k);
  LinearResolvent& out = res.resolvent;
  out.n = r.n;
  out.N = r.N;
  out.b = VectorXd::Ones(r.N);
  out.eta = right_hinv(r.eta);
  for (const auto& a : r.A) out.A.push_back(right_hinv(left_h(a)));

  MatrixXd h = MatrixXd::Identity(r.N, r.N);
  h.col(k) += c;
  MatrixXd hinv = MatrixXd::Identity(r.N, r.N);
  hinv.col(k) -= bk * c;
  res.condition = h.cwiseAbs().colwise().sum().maxCoeff() *
                  hinv.cwiseAbs().colwise().sum().maxCoeff();
  return res;
}

// ---------------------------------------------------------------------------

double DiagLift::evaluate(std::span<const double> s) const {
  check_point(n, s);
  MatrixXd m = MatrixXd::Identity(q, q);
  for (std::size_t j = 0; j < n; ++j) m.middleCols(j * N, N) -= s[j] * U.middleCols(j * N, N);
  return alpha0.dot(solve_checked(m, VectorXd::Ones(q)));
}

double DiagLift::determinant(std::span<const double> s) const {
  check_point(n, s);
  MatrixXd m = MatrixXd::Identity(q, q);
  for (std::size_t j = 0; j < n; ++j) m.middleCols(j * N, N) -= s[j] * U.middleCols(j * N, N);
  return m.determinant();
}

DiagLift diag_lift(const LinearResolvent& r) {
  if (!(r.b.array() == 1.0).all()) throw DomainError("closing column is not all-ones");
  DiagLift dl;
  dl.n = r.n;
  dl.N = r.N;
  dl.q = r.n * r.N;
  dl.alpha0 = RowVectorXd::Zero(dl.q);
  if (dl.q == 0) return dl;
  dl.alpha0.head(r.N) = r.eta;
  MatrixXd row(r.N, dl.q);
  for (std::size_t j = 0; j < r.n; ++j) row.middleCols(j * r.N, r.N) = r.A[j];
  dl.U.resize(dl.q, dl.q);
  dl.E.resize(dl.q, r.N);
  for (std::size_t i = 0; i < r.n; ++i) {
    dl.U.middleRows(i * r.N, r.N) = row;
    dl.E.middleRows(i * r.N, r.N) = MatrixXd::Identity(r.N, r.N);
  }
  return dl;
}

// ---------------------------------------------------------------------------

double Stabilized::evaluate(std::span<const double> s) const {
  check_point(n, s);
  MatrixXd m = -T;
  for (std::size_t i = 0; i < reward_variable.size(); ++i) {
    if (reward_variable[i] >= 0) m(i, i) += s[static_cast<std::size_t>(reward_variable[i])];
  }
  const VectorXd exit = -(T * VectorXd::Ones(T.rows()));
  return alpha_hat.dot(solve_checked(m, exit));
}

Stabilized stabilize(const DiagLift& dl) {
  Stabilized st;
  st.n = dl.n;
  st.N = dl.N;
  st.q = dl.q;
  const std::size_t q = dl.q;
  const RationalMatrix U = RationalMatrix::exact(dl.U);
  RationalMatrix V = U;
  for (std::size_t i = 0; i < q; ++i) V(i, i) += 1;
  const RationalMatrix V2 = V * V;

  RationalMatrix T(2 * q, 2 * q);
  for (std::size_t i = 0; i < q; ++i) {
    for (std::size_t j = 0; j < q; ++j) {
      T(i, j) = -V(i, j);
      T(q + i, j) = -V2(i, j);
      T(q + i, q + j) = U(i, j);
    }
    T(i, i) -= 1;
    T(i, q + i) = 1;
  }
  st.T = T.to_double();
  st.T_exact = std::move(T);
  st.alpha_hat = RowVectorXd::Zero(2 * q);
  st.alpha_hat.head(q) = dl.alpha0;
  st.reward_variable.assign(2 * q, -1);
  for (std::size_t j = 0; j < dl.n; ++j) {
    for (std::size_t k = 0; k < dl.N; ++k) st.reward_variable[j * dl.N + k] = static_cast<int>(j);
  }
  return st;
}

SpectrumCertificate certify_unit_spectrum(const RationalMatrix& T_exact, bool eigenvalues) {
  SpectrumCertificate cert;
  RationalMatrix shifted = T_exact;
  for (std::size_t i = 0; i < shifted.rows(); ++i) shifted(i, i) += 1;
  cert.nilpotent_shift = (shifted * shifted).is_zero();
  if (eigenvalues) {
    cert.max_deviation = 0.0;
    for (const auto& ev : high_precision_eigenvalues(T_exact)) {
      cert.max_deviation = std::max(cert.max_deviation, std::abs(ev + 1.0));
    }
  }
  return cert;
}

// ---------------------------------------------------------------------------

std::vector<std::vector<double>> verification_points(const LinearResolvent& r,
                                                     const Polynomial& den, std::size_t count,
                                                     std::uint64_t seed, double* radius) {
  double norm = 0.0;
  for (const auto& a : r.A) norm = std::max(norm, norm_estimate(a));
  const double rstar = 0.1 / (1.0 + norm);
  if (radius != nullptr) *radius = rstar;

  Rng rng(seed);
  std::vector<std::vector<double>> points;
  const std::size_t max_draws = 1000 * std::max<std::size_t>(count, 1);
  for (std::size_t draws = 0; points.size() < count; ++draws) {
    if (draws == max_draws) throw DomainError("no admissible verification points found");
    std::vector<double> s(r.n);
    double len = 0.0;
    for (auto& x : s) {
      x = rng.normal();
      len += x * x;
    }
    len = std::sqrt(len);
    const double scale = rstar * std::pow(rng.uniform(), 1.0 / static_cast<double>(r.n)) / len;
    for (auto& x : s) x *= scale;

    if (den.evaluate(std::span<const double>(s)) == 0.0) continue;
    MatrixXd m = MatrixXd::Identity(r.N, r.N);
    for (std::size_t j = 0; j < r.n; ++j) m -= s[j] * r.A[j];
    Eigen::PartialPivLU<MatrixXd> lu(m);
    const double rc = lu.rcond();
    if (!(rc > 0.0) || 1.0 / rc > kMaxCondition) continue;
    points.push_back(std::move(s));
  }
  return points;
}

Realization assemble_kulkarni(const RationalTransform& t, const RealizeOptions& options) {
  t.validate();
  const std::size_t n = t.nvars();
  Realization out;
  RealizeReport& report = out.report;
  report.n = n;
  report.seed = options.seed;

  if (t.num.is_zero()) {
    // Point mass at the origin (validate() forces p0 = 1 here).
    report.degenerate = true;
    report.N = 0;
    report.ell = 1;
    out.exact.alpha = RationalMatrix(1, 1);
    out.exact.T = RationalMatrix::from_rows({{Rational(-1)}});
    out.exact.K = RationalMatrix(1, n);
    out.exact.t = RationalMatrix::from_rows({{Rational(1)}});
    out.exact.p0 = 1;
    out.rep = out.exact.to_double();
    report.spectrum = certify_unit_spectrum(out.exact.T, options.spectrum_eigenvalues);
    return out;
  }

  const FMRealization fm = fm_from_rational(t.num, t.den);
  const LinearResolvent lr = to_linear_resolvent(fm);
  const ClosingColumnResult closed = normalize_closing_column(lr);
  const DiagLift dl = diag_lift(closed.resolvent);
  Stabilized st = stabilize(dl);

  report.rho = fm.rho;
  report.N = lr.N;
  report.q = dl.q;
  report.ell = 2 * dl.q;
  report.closing_pivot = closed.pivot;
  report.closing_condition = closed.condition;
  if (report.ell != 2 * n * report.N) throw Error("state dimension bookkeeping mismatch");

  const std::size_t ell = report.ell;
  KulkarniRep& rep = out.rep;
  rep.alpha = st.alpha_hat;
  rep.T = st.T;
  rep.K = MatrixXd::Zero(ell, n);
  for (std::size_t i = 0; i < ell; ++i) {
    if (st.reward_variable[i] >= 0) rep.K(i, st.reward_variable[i]) = 1.0;
  }
  rep.t = -(rep.T * VectorXd::Ones(ell));
  rep.p0 = to_double(t.p0);

  out.exact.T = st.T_exact;
  out.exact.alpha = RationalMatrix::exact(rep.alpha);
  out.exact.K = RationalMatrix::exact(rep.K);
  out.exact.t = RationalMatrix(ell, 1);
  for (std::size_t i = 0; i < ell; ++i) {
    Rational row = 0;
    for (std::size_t j = 0; j < ell; ++j) row += st.T_exact(i, j);
    out.exact.t(i, 0) = -row;
  }
  out.exact.p0 = t.p0;

  report.points =
      verification_points(lr, t.den, options.points, options.seed, &report.radius);
  const double p0 = rep.p0;
  std::vector<StageError> stages = {{"fm", 0.0},          {"resolvent", 0.0},
                                    {"closing_column", 0.0}, {"diag_lift", 0.0},
                                    {"stabilize", 0.0},   {"kulkarni", 0.0}};
  for (const auto& s : report.points) {
    const std::span<const double> sp(s);
    const double ref = rt_eval(t, sp);
    const double values[] = {p0 + fm.evaluate(sp),
                             p0 + lr.evaluate(sp),
                             p0 + closed.resolvent.evaluate(sp),
                             p0 + dl.evaluate(sp),
                             p0 + st.evaluate(sp),
                             transform_eval(rep, sp)};
    for (std::size_t k = 0; k < stages.size(); ++k) {
      stages[k].max_rel_error = std::max(stages[k].max_rel_error, rel_error(values[k], ref));
    }
  }
  report.stages = std::move(stages);
  for (const auto& s : report.stages) report.max_rel_error = std::max(report.max_rel_error, s.max_rel_error);
  report.spectrum = certify_unit_spectrum(out.exact.T, options.spectrum_eigenvalues);
  return out;
}

}  // namespace mvph
