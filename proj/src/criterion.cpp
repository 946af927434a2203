#include "mvph/criterion.hpp"

#include <algorithm>

#include "mvph/error.hpp"
#include "mvph/random.hpp"

namespace mvph {
namespace {

// Rows and pivot columns of a nonsingular r x r minor, r = rank(a).
void nonsingular_minor(const RationalMatrix& a, std::vector<std::size_t>* rows,
                       std::vector<std::size_t>* cols) {
  RationalMatrix w = a;
  std::vector<std::size_t> order(a.rows());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::size_t r = 0;
  for (std::size_t c = 0; c < w.cols() && r < w.rows(); ++c) {
    std::size_t p = r;
    while (p < w.rows() && sgn(w(p, c)) == 0) ++p;
    if (p == w.rows()) continue;
    if (p != r) {
      for (std::size_t k = 0; k < w.cols(); ++k) std::swap(w(p, k), w(r, k));
      std::swap(order[p], order[r]);
    }
    for (std::size_t i = r + 1; i < w.rows(); ++i) {
      if (sgn(w(i, c)) == 0) continue;
      const Rational f = w(i, c) / w(r, c);
      for (std::size_t k = c; k < w.cols(); ++k) w(i, k) -= f * w(r, k);
    }
    rows->push_back(order[r]);
    cols->push_back(c);
    ++r;
  }
  std::sort(rows->begin(), rows->end());
}

// Flips l when its first nonzero coefficient is negative; returns true if so.
bool normalize_sign(std::vector<Surd>& l, const Rational& d) {
  for (const auto& c : l) {
    const int s = sign(c, d);
    if (s == 0) continue;
    if (s > 0) return false;
    for (auto& x : l) {
      x.a = -x.a;
      x.b = -x.b;
    }
    return true;
  }
  return false;
}

// Folds sqrt(radicand) into the rational parts when it is rational.
void fold_rational_radicand(FactorEvidence& e) {
  Rational root;
  if (!rational_sqrt(e.radicand, &root)) return;
  for (auto& l : e.factors) {
    for (auto& c : l) {
      c.a += c.b * root;
      c.b = 0;
    }
  }
  e.radicand = 1;
}

// Normalizes factor signs (absorbing flips into c0) and classifies.
CriterionVerdict factored(FactorEvidence e, std::string method, int degree) {
  fold_rational_radicand(e);
  bool nonneg = true;
  for (auto& l : e.factors) {
    if (normalize_sign(l, e.radicand)) e.c0 = -e.c0;
    // Rational factors are scaled to a unit leading coefficient.
    if (std::all_of(l.begin(), l.end(), [](const Surd& c) { return sgn(c.b) == 0; })) {
      const auto lead = std::find_if(l.begin(), l.end(), [](const Surd& c) { return sgn(c.a) != 0; });
      if (lead != l.end()) {
        const Rational scale = lead->a;
        for (auto& c : l) c.a /= scale;
        e.c0 *= scale;
      }
    }
    for (const auto& c : l) nonneg = nonneg && sign(c, e.radicand) >= 0;
  }
  CriterionVerdict v;
  v.outcome = nonneg ? Outcome::FactorsNonneg : Outcome::FactorsMixedSigns;
  v.method = std::move(method);
  v.degree = degree;
  v.evidence = std::move(e);
  return v;
}

CriterionVerdict certified(Evidence e, std::string method, int degree) {
  CriterionVerdict v;
  v.outcome = Outcome::IrreducibleCertified;
  v.method = std::move(method);
  v.degree = degree;
  v.evidence = std::move(e);
  return v;
}

std::vector<Surd> rational_row(const RationalMatrix& m, std::size_t i) {
  std::vector<Surd> out;
  for (std::size_t k = 0; k < m.cols(); ++k) out.push_back({m(i, k), 0});
  return out;
}

MatchingEvidence matching_data(const QuadraticForm& qf) {
  const RationalMatrix& M = qf.M;
  const Rational a11 = M(0, 0);
  MatchingEvidence e;
  e.p2 = 2 * M(0, 1) / a11;
  e.p3 = 2 * M(0, 2) / a11;
  e.c22 = M(1, 1) / a11;
  e.c33 = M(2, 2) / a11;
  e.c23 = 2 * M(1, 2) / a11;
  e.disc2 = e.p2 * e.p2 - 4 * e.c22;
  e.disc3 = e.p3 * e.p3 - 4 * e.c33;
  if (sgn(e.disc2) >= 0 && sgn(e.disc3) >= 0) {
    const Rational prod = e.disc2 * e.disc3;
    const Rational half = e.p2 * e.p3 / 2;
    Rational root;
    if (rational_sqrt(prod, &root)) {
      e.candidates = {{half - root / 2, 0}, {half + root / 2, 0}};
    } else {
      e.candidates = {{half, Rational(-1, 2)}, {half, Rational(1, 2)}};
    }
  }
  return e;
}

bool matching_excludes(const MatchingEvidence& e) {
  if (sgn(e.disc2) < 0 || sgn(e.disc3) < 0) return true;
  const Rational w = 2 * e.c23 - e.p2 * e.p3;
  return w * w != e.disc2 * e.disc3;
}

UPoly restrict_to_plane(const Polynomial& qtop, const std::vector<long>& p,
                        const std::vector<long>& q) {
  std::vector<Polynomial> images;
  for (std::size_t j = 0; j < p.size(); ++j) {
    images.push_back(Polynomial::variable(2, 0, p[j]) + Polynomial::variable(2, 1, q[j]));
  }
  const Polynomial b = substitute(qtop, images);
  UPoly f(static_cast<std::size_t>(std::max(qtop.degree(), 0)) + 1, Rational(0));
  for (const auto& [mono, c] : b.terms()) f[mono[0]] += c;
  trim(f);
  return f;
}

}  // namespace

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::FactorsNonneg: return "FACTORS_NONNEG";
    case Outcome::FactorsMixedSigns: return "FACTORS_MIXED_SIGNS";
    case Outcome::IrreducibleCertified: return "IRREDUCIBLE_CERTIFIED";
    case Outcome::Inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

int sign(const Surd& x, const Rational& radicand) {
  const int sa = sgn(x.a);
  const int sb = sgn(radicand) == 0 ? 0 : sgn(x.b);
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  const int order = cmp(x.a * x.a, x.b * x.b * radicand);
  return order > 0 ? sa : (order < 0 ? sb : 0);
}

QuadraticForm QuadraticForm::from_polynomial(const Polynomial& p) {
  if (p.degree() != 2 || !p.is_homogeneous()) {
    throw DomainError("expected a homogeneous polynomial of degree 2");
  }
  QuadraticForm qf;
  qf.n = p.nvars();
  qf.M = RationalMatrix(qf.n, qf.n);
  for (const auto& [mono, c] : p.terms()) {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < qf.n; ++j) {
      for (unsigned e = 0; e < mono[j]; ++e) idx.push_back(j);
    }
    if (idx[0] == idx[1]) {
      qf.M(idx[0], idx[0]) = c;
    } else {
      qf.M(idx[0], idx[1]) = c / 2;
      qf.M(idx[1], idx[0]) = c / 2;
    }
  }
  return qf;
}

Polynomial QuadraticForm::to_polynomial() const {
  Polynomial p(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      p += Polynomial::variable(n, i) * Polynomial::variable(n, j) * M(i, j);
    }
  }
  return p;
}

Polynomial extract_qtop(const Polynomial& Q) { return leading_part(Q); }

Polynomial expand_factors(const FactorEvidence& e, std::size_t nvars) {
  Polynomial rat = Polynomial::constant(nvars, e.c0);
  Polynomial irr(nvars);
  for (const auto& l : e.factors) {
    if (l.size() != nvars) throw DomainError("factor has the wrong dimension");
    Polynomial la(nvars), lb(nvars);
    for (std::size_t k = 0; k < nvars; ++k) {
      la += Polynomial::variable(nvars, k, l[k].a);
      lb += Polynomial::variable(nvars, k, l[k].b);
    }
    Polynomial next_rat = rat * la + irr * lb * e.radicand;
    Polynomial next_irr = rat * lb + irr * la;
    rat = std::move(next_rat);
    irr = std::move(next_irr);
  }
  if (!irr.is_zero() && sgn(e.radicand) != 0) throw Error("irrational part does not cancel");
  return rat;
}

CriterionVerdict factor_quadratic(const QuadraticForm& qf) {
  const RationalMatrix& M = qf.M;
  const std::size_t r = rank(M);
  if (r == 0) throw DomainError("zero quadratic form");

  if (r >= 3) {
    RankEvidence e;
    e.kind = "rank";
    e.n = qf.n;
    e.rank = r;
    nonsingular_minor(M, &e.rows, &e.cols);
    e.minor = determinant(M.submatrix(e.rows, e.cols));
    return certified(std::move(e), "rank", 2);
  }

  if (r == 1) {
    std::size_t i = 0;
    while (sgn(M(i, i)) == 0) ++i;
    FactorEvidence e;
    e.c0 = 1 / M(i, i);
    e.factors = {rational_row(M, i), rational_row(M, i)};
    return factored(std::move(e), "rank", 2);
  }

  // Rank 2: M = M[:,S] M_SS^{-1} M[S,:] for a nonsingular principal pair S,
  // so Q_top = y^T G y with y = M[S,:] s and G = M_SS^{-1}.
  std::size_t i = 0, j = 0;
  Rational det;
  for (std::size_t a = 0; a < qf.n && sgn(det) == 0; ++a) {
    for (std::size_t b = a + 1; b < qf.n; ++b) {
      det = M(a, a) * M(b, b) - M(a, b) * M(a, b);
      if (sgn(det) != 0) {
        i = a;
        j = b;
        break;
      }
    }
  }
  if (sgn(det) == 0) throw Error("rank-2 form without a nonsingular principal pair");
  if (sgn(det) > 0) {
    RankEvidence e;
    e.kind = "rank2_definite";
    e.n = qf.n;
    e.rank = 2;
    e.rows = e.cols = {i, j};
    e.minor = det;
    return certified(std::move(e), "rank", 2);
  }

  const Rational g11 = M(j, j) / det, g12 = -M(i, j) / det, g22 = M(i, i) / det;
  std::vector<Surd> y1 = rational_row(M, i), y2 = rational_row(M, j);
  FactorEvidence e;
  if (sgn(g11) == 0 && sgn(g22) == 0) {
    e.c0 = 2 * g12;
    e.factors = {y1, y2};
    return factored(std::move(e), "rank", 2);
  }
  Rational lead = g11, mid = g12;
  if (sgn(g11) == 0) {
    std::swap(y1, y2);
    lead = g22;
  }
  // lead (y1 - r+ y2)(y1 - r- y2) with r+- = (-mid +- sqrt(D)) / lead.
  e.c0 = lead;
  e.radicand = g12 * g12 - g11 * g22;
  std::vector<Surd> l1, l2;
  for (std::size_t k = 0; k < qf.n; ++k) {
    const Rational a = y1[k].a + mid / lead * y2[k].a;
    const Rational b = y2[k].a / lead;
    l1.push_back({a, -b});
    l2.push_back({a, b});
  }
  e.factors = {std::move(l1), std::move(l2)};
  return factored(std::move(e), "rank", 2);
}

CriterionVerdict coefficient_matching_quadratic_3var(const QuadraticForm& qf) {
  if (qf.n != 3) throw DomainError("coefficient matching needs exactly 3 variables");
  if (sgn(qf.M(0, 0)) == 0) {
    CriterionVerdict v = factor_quadratic(qf);
    v.note = "s1^2 coefficient is zero; deferred to the rank test";
    return v;
  }
  MatchingEvidence m = matching_data(qf);
  if (matching_excludes(m)) return certified(std::move(m), "coefficient_matching", 2);

  const Rational w = 2 * m.c23 - m.p2 * m.p3;
  FactorEvidence e;
  e.c0 = qf.M(0, 0);
  Surd u, r, v, t;
  if (sgn(m.disc2) != 0) {
    // sqrt(disc3), signed to match c23, equals (-w / disc2) sqrt(disc2).
    e.radicand = m.disc2;
    u = {m.p2 / 2, Rational(1, 2)};
    r = {m.p2 / 2, Rational(-1, 2)};
    const Rational x = -w / m.disc2 / 2;
    v = {m.p3 / 2, x};
    t = {m.p3 / 2, -x};
  } else {
    e.radicand = m.disc3;
    u = r = {m.p2 / 2, 0};
    v = {m.p3 / 2, Rational(1, 2)};
    t = {m.p3 / 2, Rational(-1, 2)};
  }
  e.factors = {{{1, 0}, u, v}, {{1, 0}, r, t}};
  return factored(std::move(e), "coefficient_matching", 2);
}

CriterionVerdict restriction_reject(const Polynomial& qtop, std::size_t trials,
                                    std::uint64_t seed) {
  if (qtop.is_zero() || !qtop.is_homogeneous() || qtop.degree() < 1) {
    throw DomainError("restriction test needs a homogeneous form of degree >= 1");
  }
  const std::size_t n = qtop.nvars();
  InconclusiveEvidence none{trials, seed, 0};
  for (std::size_t trial = 0; trial < trials; ++trial) {
    Rng rng = Rng::substream(seed, trial);
    std::vector<long> p(n), q(n);
    for (auto& x : p) x = static_cast<long>(rng.uniform_int(-9, 9));
    for (auto& x : q) x = static_cast<long>(rng.uniform_int(-9, 9));
    UPoly f = restrict_to_plane(qtop, p, q);
    if (f.empty()) {
      ++none.skipped;
      continue;
    }
    const int sf_degree = degree(squarefree_part(f));
    const int real = count_real_roots(f);
    if (real < sf_degree) {
      RestrictionEvidence e{trial, std::move(p), std::move(q), std::move(f), sf_degree, real};
      return certified(std::move(e), "restriction", qtop.degree());
    }
  }
  CriterionVerdict v;
  v.outcome = Outcome::Inconclusive;
  v.method = "restriction";
  v.degree = qtop.degree();
  v.evidence = none;
  return v;
}

CriterionVerdict mphstar_certificate(const Polynomial& Q, bool minimal_declared,
                                     const CertificateOptions& options) {
  if (Q.is_zero() || sgn(Q.constant_term()) == 0) throw DomainError("Q(0) = 0");
  const Polynomial qtop = extract_qtop(Q);
  const std::size_t n = Q.nvars();
  CriterionVerdict v;
  switch (qtop.degree()) {
    case 0: {
      FactorEvidence e;
      e.c0 = qtop.constant_term();
      v = factored(std::move(e), "constant", 0);
      break;
    }
    case 1: {
      FactorEvidence e;
      e.c0 = 1;
      std::vector<Surd> l;
      for (std::size_t k = 0; k < n; ++k) l.push_back({qtop.coefficient(Monomial::unit(n, k)), 0});
      e.factors = {std::move(l)};
      v = factored(std::move(e), "linear", 1);
      break;
    }
    case 2:
      v = factor_quadratic(QuadraticForm::from_polynomial(qtop));
      break;
    default:
      v = restriction_reject(qtop, options.trials, options.seed);
      break;
  }
  v.minimal_declared = minimal_declared;
  const bool negative = v.outcome == Outcome::IrreducibleCertified ||
                        v.outcome == Outcome::FactorsMixedSigns;
  v.excludes_mphstar = minimal_declared && negative;
  if (negative && !minimal_declared) {
    v.note = "Q was not declared minimal; exclusion applies only to the minimal-form denominator";
  } else if (negative) {
    v.note = "Q_top has no factorization into non-negative linear forms; no MPH* representation";
  } else if (v.outcome == Outcome::FactorsNonneg) {
    v.note = "necessary condition holds; membership is not implied";
  } else {
    v.note = "no witness found; passing trials is not a membership proof";
  }
  return v;
}

bool verify(const CriterionVerdict& verdict, const Polynomial& qtop) {
  const std::size_t n = qtop.nvars();
  if (const auto* e = std::get_if<FactorEvidence>(&verdict.evidence)) {
    if (verdict.outcome != Outcome::FactorsNonneg && verdict.outcome != Outcome::FactorsMixedSigns) {
      return false;
    }
    try {
      if (expand_factors(*e, n) != qtop) return false;
    } catch (const Error&) {
      return false;
    }
    bool nonneg = true;
    for (const auto& l : e->factors) {
      int first = 0;
      for (const auto& c : l) {
        const int s = sign(c, e->radicand);
        if (first == 0) first = s;
        nonneg = nonneg && s >= 0;
      }
      if (first < 0) return false;
    }
    return nonneg == (verdict.outcome == Outcome::FactorsNonneg);
  }
  if (verdict.outcome == Outcome::Inconclusive) {
    return std::holds_alternative<InconclusiveEvidence>(verdict.evidence);
  }
  if (verdict.outcome != Outcome::IrreducibleCertified) return false;
  if (const auto* e = std::get_if<RankEvidence>(&verdict.evidence)) {
    const RationalMatrix M = QuadraticForm::from_polynomial(qtop).M;
    for (std::size_t k : e->rows) if (k >= n) return false;
    for (std::size_t k : e->cols) if (k >= n) return false;
    if (e->rows.size() != e->cols.size()) return false;
    const Rational minor = determinant(M.submatrix(e->rows, e->cols));
    if (minor != e->minor || sgn(minor) == 0) return false;
    if (e->kind == "rank") return e->rows.size() >= 3;
    if (e->kind == "rank2_definite") {
      return e->rows.size() == 2 && e->rows == e->cols && sgn(minor) > 0 && rank(M) == 2;
    }
    return false;
  }
  if (const auto* e = std::get_if<MatchingEvidence>(&verdict.evidence)) {
    const QuadraticForm qf = QuadraticForm::from_polynomial(qtop);
    if (qf.n != 3 || sgn(qf.M(0, 0)) == 0) return false;
    const MatchingEvidence fresh = matching_data(qf);
    return fresh.c23 == e->c23 && fresh.disc2 == e->disc2 && fresh.disc3 == e->disc3 &&
           matching_excludes(fresh);
  }
  if (const auto* e = std::get_if<RestrictionEvidence>(&verdict.evidence)) {
    if (e->p.size() != n || e->q.size() != n) return false;
    const UPoly f = restrict_to_plane(qtop, e->p, e->q);
    if (f != e->restriction || f.empty()) return false;
    const int real = count_real_roots(f);
    const int sf_degree = degree(squarefree_part(f));
    return real == e->real_roots && sf_degree == e->squarefree_degree && real < sf_degree;
  }
  return false;
}

}  // namespace mvph
