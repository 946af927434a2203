#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "mvph/kulkarni.hpp"
#include "mvph/polynomial.hpp"
#include "mvph/random.hpp"

namespace mvph::testing {

inline Rational frac(long a, long b) {
  Rational q(a, b);
  q.canonicalize();
  return q;
}

inline Rational small_rational(Rng& rng, long lo = -5, long hi = 5, long max_den = 4) {
  return frac(rng.uniform_int(lo, hi), rng.uniform_int(1, max_den));
}

inline Polynomial random_polynomial(Rng& rng, std::size_t n, unsigned max_degree,
                                    std::size_t max_terms) {
  Polynomial p(n);
  const auto terms = static_cast<std::size_t>(rng.uniform_int(1, static_cast<long>(max_terms)));
  for (std::size_t k = 0; k < terms; ++k) {
    std::vector<unsigned> e(n, 0);
    unsigned budget = static_cast<unsigned>(rng.uniform_int(0, max_degree));
    for (std::size_t j = 0; j < n && budget > 0; ++j) {
      const auto take = static_cast<unsigned>(rng.uniform_int(0, budget));
      e[j] = take;
      budget -= take;
    }
    p.add_term(Monomial(e), small_rational(rng));
  }
  return p;
}

inline std::vector<Rational> random_point(Rng& rng, std::size_t n) {
  std::vector<Rational> x(n);
  for (auto& v : x) v = small_rational(rng, -7, 7, 5);
  return x;
}

/// kappa_i(s) = sum_j K_ij s_j.
inline Polynomial reward_form(const RationalMatrix& K, std::size_t i) {
  Polynomial p(K.cols());
  for (std::size_t j = 0; j < K.cols(); ++j) {
    if (sgn(K(i, j)) != 0) p += Polynomial::variable(K.cols(), j, K(i, j));
  }
  return p;
}

/// Random transient subgenerator with rational rates: every state either
/// exits or has a forward jump, and the last state always exits.
inline ExactKulkarniRep random_mphstar(Rng& rng, std::size_t m, std::size_t n) {
  const Rational rates[] = {Rational(1, 2), Rational(1), Rational(2), Rational(3, 2)};
  RationalMatrix T(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    Rational row = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j || rng.uniform() < 0.5) continue;
      T(i, j) = rates[rng.uniform_int(0, 3)];
      row += T(i, j);
    }
    Rational exit = rng.uniform() < 0.4 ? Rational(0) : rates[rng.uniform_int(0, 3)];
    if (i + 1 == m && sgn(exit) == 0) exit = 1;
    if (sgn(exit) == 0 && sgn(T(i, i + 1)) == 0) {
      T(i, i + 1) = 1;
      row += 1;
    }
    T(i, i) = -(row + exit);
  }
  const Rational rewards[] = {Rational(0), Rational(1, 2), Rational(1), Rational(2), Rational(3)};
  RationalMatrix K(m, n);
  bool any = false;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      K(i, j) = rewards[rng.uniform_int(0, 4)];
      any = any || sgn(K(i, j)) != 0;
    }
  }
  if (!any) K(0, 0) = 1;
  RationalMatrix alpha(1, m);
  Rational total = 0;
  for (std::size_t i = 0; i < m; ++i) {
    alpha(0, i) = frac(rng.uniform_int(0, 4), 4 * static_cast<long>(m));
    total += alpha(0, i);
  }
  if (sgn(total) == 0) alpha(0, 0) = 1;
  return ExactKulkarniRep::markovian(alpha, T, K);
}

inline double eval(const Polynomial& p, const std::vector<double>& x) {
  return p.evaluate(std::span<const double>(x));
}

inline Rational eval_q(const Polynomial& p, const std::vector<Rational>& x) {
  return p.evaluate(std::span<const Rational>(x));
}

inline Polynomial poly(const char* text, std::size_t n) { return Polynomial::parse(text, n); }

inline double rel_error(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

}  // namespace mvph::testing
