#include "mvph/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "mvph/error.hpp"

namespace mvph {

// ---------------------------------------------------------------------------
// Monomial

Monomial::Monomial(std::vector<unsigned> exponents) : exps_(std::move(exponents)) {
  for (unsigned e : exps_) degree_ += e;
}

Monomial Monomial::one(std::size_t nvars) { return Monomial(std::vector<unsigned>(nvars, 0)); }

Monomial Monomial::unit(std::size_t nvars, std::size_t j) {
  std::vector<unsigned> e(nvars, 0);
  e.at(j) = 1;
  return Monomial(std::move(e));
}

bool Monomial::divides(const Monomial& other) const {
  for (std::size_t j = 0; j < exps_.size(); ++j) {
    if (exps_[j] > other.exps_[j]) return false;
  }
  return true;
}

Monomial Monomial::operator*(const Monomial& other) const {
  std::vector<unsigned> e(exps_);
  for (std::size_t j = 0; j < e.size(); ++j) e[j] += other.exps_[j];
  return Monomial(std::move(e));
}

Monomial Monomial::operator/(const Monomial& other) const {
  std::vector<unsigned> e(exps_);
  for (std::size_t j = 0; j < e.size(); ++j) e[j] -= other.exps_[j];
  return Monomial(std::move(e));
}

bool GrlexGreater::operator()(const Monomial& a, const Monomial& b) const {
  if (a.degree() != b.degree()) return a.degree() > b.degree();
  return std::lexicographical_compare(b.exponents().begin(), b.exponents().end(),
                                      a.exponents().begin(), a.exponents().end());
}

// ---------------------------------------------------------------------------
// Polynomial

namespace {

void check_same_vars(const Polynomial& a, const Polynomial& b) {
  if (a.nvars() != b.nvars()) {
    throw DomainError("polynomial dimension mismatch: " + std::to_string(a.nvars()) +
                      " vs " + std::to_string(b.nvars()));
  }
}

class PolyParser {
 public:
  PolyParser(std::string_view text, std::size_t nvars) : s_(text), nvars_(nvars) {}

  Polynomial run() {
    Polynomial p(nvars_);
    skip_ws();
    if (at_end()) throw error("empty polynomial");
    bool first = true;
    while (!at_end()) {
      int sgn = 1;
      if (peek() == '+' || peek() == '-') {
        sgn = peek() == '-' ? -1 : 1;
        ++pos_;
        skip_ws();
      } else if (!first) {
        throw error("expected '+' or '-'");
      }
      first = false;
      auto [mono, coef] = term();
      if (sgn < 0) coef = -coef;
      p.add_term(mono, coef);
      skip_ws();
    }
    return p;
  }

 private:
  std::pair<Monomial, Rational> term() {
    Rational coef = 1;
    bool have_any = false;
    if (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.') {
      const std::size_t start = pos_;
      while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '/' ||
                           peek() == '.')) {
        ++pos_;
      }
      coef = parse_rational(s_.substr(start, pos_ - start));
      have_any = true;
    }
    std::vector<unsigned> exps(nvars_, 0);
    for (;;) {
      skip_ws();
      if (!at_end() && peek() == '*') {
        ++pos_;
        skip_ws();
      }
      if (at_end() || peek() != 's') break;
      ++pos_;
      const std::size_t index = number();
      if (index < 1 || index > nvars_) throw error("variable index out of range");
      unsigned power = 1;
      skip_ws();
      if (!at_end() && peek() == '^') {
        ++pos_;
        skip_ws();
        power = static_cast<unsigned>(number());
      }
      exps[index - 1] += power;
      have_any = true;
    }
    if (!have_any) throw error("expected a term");
    return {Monomial(std::move(exps)), coef};
  }

  std::size_t number() {
    const std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_) throw error("expected digits");
    return std::stoul(std::string(s_.substr(start, pos_ - start)));
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[pos_]; }
  ParseError error(const std::string& what) const {
    return ParseError("polynomial parse error at offset " + std::to_string(pos_) + ": " + what);
  }

  std::string_view s_;
  std::size_t nvars_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial Polynomial::constant(std::size_t nvars, const Rational& c) {
  Polynomial p(nvars);
  p.add_term(Monomial::one(nvars), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t j, const Rational& c) {
  if (j >= nvars) throw DomainError("variable index out of range");
  Polynomial p(nvars);
  p.add_term(Monomial::unit(nvars, j), c);
  return p;
}

Polynomial Polynomial::parse(std::string_view text, std::size_t nvars) {
  return PolyParser(text, nvars).run();
}

int Polynomial::degree() const {
  return terms_.empty() ? -1 : static_cast<int>(terms_.begin()->first.degree());
}

bool Polynomial::is_homogeneous() const {
  if (terms_.empty()) return true;
  const unsigned d = terms_.begin()->first.degree();
  return std::all_of(terms_.begin(), terms_.end(),
                     [d](const auto& kv) { return kv.first.degree() == d; });
}

Rational Polynomial::coefficient(const Monomial& m) const {
  const auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

Rational Polynomial::constant_term() const { return coefficient(Monomial::one(nvars_)); }

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (m.nvars() != nvars_) throw DomainError("monomial has the wrong number of variables");
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

Rational Polynomial::evaluate(std::span<const Rational> point) const {
  if (point.size() != nvars_) throw DomainError("evaluation point has the wrong dimension");
  Rational sum = 0;
  Rational power;
  for (const auto& [m, c] : terms_) {
    Rational term = c;
    for (std::size_t j = 0; j < nvars_; ++j) {
      if (m[j] == 0) continue;
      mpz_pow_ui(power.get_num_mpz_t(), point[j].get_num_mpz_t(), m[j]);
      mpz_pow_ui(power.get_den_mpz_t(), point[j].get_den_mpz_t(), m[j]);
      term *= power;
    }
    sum += term;
  }
  return sum;
}

double Polynomial::evaluate(std::span<const double> point) const {
  if (point.size() != nvars_) throw DomainError("evaluation point has the wrong dimension");
  double sum = 0.0;
  for (const auto& [m, c] : terms_) {
    double term = c.get_d();
    for (std::size_t j = 0; j < nvars_; ++j) {
      for (unsigned k = 0; k < m[j]; ++k) term *= point[j];
    }
    sum += term;
  }
  return sum;
}

Polynomial Polynomial::operator-() const {
  Polynomial r(*this);
  for (auto& kv : r.terms_) kv.second = -kv.second;
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  check_same_vars(*this, other);
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  check_same_vars(*this, other);
  for (const auto& [m, c] : other.terms_) add_term(m, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (sgn(c) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& kv : terms_) kv.second *= c;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  check_same_vars(a, b);
  Polynomial r(a.nvars());
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
  }
  return r;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rational mag = abs(c);
    if (first) {
      if (sgn(c) < 0) out << "-";
    } else {
      out << (sgn(c) < 0 ? " - " : " + ");
    }
    first = false;
    const bool unit = mag == 1 && m.degree() > 0;
    if (!unit) out << mvph::to_string(mag);
    bool need_sep = !unit;
    for (std::size_t j = 0; j < nvars_; ++j) {
      if (m[j] == 0) continue;
      if (need_sep) out << "*";
      out << "s" << (j + 1);
      if (m[j] > 1) out << "^" << m[j];
      need_sep = true;
    }
  }
  return out.str();
}

Polynomial pow(const Polynomial& p, unsigned k) {
  Polynomial r = Polynomial::constant(p.nvars(), 1);
  for (unsigned i = 0; i < k; ++i) r = r * p;
  return r;
}

Polynomial leading_part(const Polynomial& p) {
  if (p.is_zero()) throw DomainError("no leading part: zero polynomial");
  const unsigned d = p.terms().begin()->first.degree();
  Polynomial top(p.nvars());
  for (const auto& [m, c] : p.terms()) {
    if (m.degree() != d) break;  // grlex lists the top degree first
    top.add_term(m, c);
  }
  return top;
}

DivisionResult divide(const Polynomial& f, const Polynomial& g) {
  check_same_vars(f, g);
  if (g.is_zero()) throw DomainError("division by the zero polynomial");
  const auto& [lead_m, lead_c] = *g.terms().begin();
  Polynomial quotient(f.nvars());
  Polynomial remainder(f.nvars());
  Polynomial work = f;
  while (!work.is_zero()) {
    const auto [m, c] = *work.terms().begin();
    if (lead_m.divides(m)) {
      Polynomial step(f.nvars());
      step.add_term(m / lead_m, c / lead_c);
      quotient += step;
      work -= step * g;
    } else {
      Polynomial lt(f.nvars());
      lt.add_term(m, c);
      remainder += lt;
      work -= lt;
    }
  }
  return {std::move(quotient), std::move(remainder)};
}

std::optional<Polynomial> poly_divides(const Polynomial& g, const Polynomial& f) {
  if (g.is_zero()) throw DomainError("zero divisor");
  auto [q, r] = divide(f, g);
  if (!r.is_zero()) return std::nullopt;
  return q;
}

Polynomial substitute(const Polynomial& p, const std::vector<Polynomial>& images) {
  if (images.size() != p.nvars()) throw DomainError("substitution needs one image per variable");
  if (images.empty()) return p;
  const std::size_t m = images.front().nvars();
  for (const auto& img : images) {
    if (img.nvars() != m) throw DomainError("substitution images disagree on dimension");
  }
  // Cache powers of each image as they are needed.
  std::vector<std::vector<Polynomial>> powers(images.size());
  auto power_of = [&](std::size_t j, unsigned k) -> const Polynomial& {
    auto& cache = powers[j];
    if (cache.empty()) cache.push_back(Polynomial::constant(m, 1));
    while (cache.size() <= k) cache.push_back(cache.back() * images[j]);
    return cache[k];
  };
  Polynomial result(m);
  for (const auto& [mono, c] : p.terms()) {
    Polynomial term = Polynomial::constant(m, c);
    for (std::size_t j = 0; j < p.nvars(); ++j) {
      if (mono[j] > 0) term = term * power_of(j, mono[j]);
    }
    result += term;
  }
  return result;
}

// ---------------------------------------------------------------------------
// RationalTransform

void RationalTransform::validate() const {
  if (num.nvars() != den.nvars()) throw DomainError("numerator and denominator dimensions differ");
  if (sgn(p0) < 0 || p0 > 1) throw DomainError("atom p0 must lie in [0, 1]");
  const Rational den0 = den.constant_term();
  if (sgn(den0) == 0) throw DomainError("denominator vanishes at the origin");
  if (num.constant_term() / den0 != 1 - p0) {
    throw DomainError("transform is not 1 at the origin: num(0)/den(0) != 1 - p0");
  }
  if (!num.is_zero() && num.degree() >= den.degree()) {
    throw DomainError("non-atomic part is not strictly proper: deg num >= deg den");
  }
}

double rt_eval(const RationalTransform& t, std::span<const double> point) {
  const double q = t.den.evaluate(point);
  if (q == 0.0) throw DomainError("transform denominator vanishes at the evaluation point");
  return t.p0.get_d() + t.num.evaluate(point) / q;
}

}  // namespace mvph
