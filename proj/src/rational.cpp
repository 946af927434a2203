#include "mvph/rational.hpp"

#include <cctype>
#include <cmath>
#include <string>

#include "mvph/error.hpp"

namespace mvph {
namespace {

bool is_integer_literal(std::string_view s, bool allow_sign) {
  std::size_t i = 0;
  if (allow_sign && i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

Integer parse_integer(std::string_view s) {
  std::string str(s);
  if (!str.empty() && str[0] == '+') str.erase(0, 1);
  return Integer(str, 10);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view s = trim(text);
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const auto num = s.substr(0, slash);
    const auto den = s.substr(slash + 1);
    if (!is_integer_literal(num, true) || !is_integer_literal(den, false)) {
      throw ParseError("malformed rational '" + std::string(text) + "'");
    }
    Integer d = parse_integer(den);
    if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    Rational q(parse_integer(num), d);
    q.canonicalize();
    return q;
  }
  if (const auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view whole = s.substr(0, dot);
    const std::string_view frac = s.substr(dot + 1);
    bool negative = false;
    if (!whole.empty() && (whole[0] == '-' || whole[0] == '+')) {
      negative = whole[0] == '-';
      whole.remove_prefix(1);
    }
    if ((whole.empty() && frac.empty()) ||
        (!whole.empty() && !is_integer_literal(whole, false)) ||
        (!frac.empty() && !is_integer_literal(frac, false))) {
      throw ParseError("malformed decimal '" + std::string(text) + "'");
    }
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    Integer digits = whole.empty() ? Integer(0) : parse_integer(whole);
    digits *= scale;
    if (!frac.empty()) digits += parse_integer(frac);
    Rational q(negative ? Integer(-digits) : digits, scale);
    q.canonicalize();
    return q;
  }
  if (!is_integer_literal(s, true)) {
    throw ParseError("malformed rational '" + std::string(text) + "'");
  }
  return Rational(parse_integer(s));
}

std::string to_string(const Rational& q) { return q.get_str(10); }

Rational exact_rational(double x) {
  if (!std::isfinite(x)) throw DomainError("cannot represent a non-finite value exactly");
  return Rational(x);
}

bool rational_sqrt(const Rational& q, Rational* root) {
  if (sgn(q) < 0) return false;
  const Integer& num = q.get_num();
  const Integer& den = q.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t())) {
    return false;
  }
  if (root != nullptr) {
    Integer rn, rd;
    mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
    *root = Rational(rn, rd);
    root->canonicalize();
  }
  return true;
}

}  // namespace mvph
