#include "mvph/univariate.hpp"

#include "mvph/error.hpp"

namespace mvph {

void trim(UPoly& p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

int degree(const UPoly& p) {
  UPoly q = p;
  trim(q);
  return static_cast<int>(q.size()) - 1;
}

UPoly derivative(const UPoly& p) {
  UPoly d;
  for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * static_cast<long>(k));
  trim(d);
  return d;
}

UDivision divmod(const UPoly& a, const UPoly& b) {
  UPoly divisor = b;
  trim(divisor);
  if (divisor.empty()) throw DomainError("zero divisor");
  UDivision out;
  out.remainder = a;
  trim(out.remainder);
  const std::size_t db = divisor.size() - 1;
  if (out.remainder.size() < divisor.size()) return out;
  out.quotient.assign(out.remainder.size() - db, Rational(0));
  while (out.remainder.size() >= divisor.size()) {
    const std::size_t shift = out.remainder.size() - divisor.size();
    const Rational factor = out.remainder.back() / divisor.back();
    out.quotient[shift] = factor;
    for (std::size_t k = 0; k <= db; ++k) out.remainder[shift + k] -= factor * divisor[k];
    out.remainder.pop_back();
    trim(out.remainder);
  }
  trim(out.quotient);
  return out;
}

UPoly gcd(UPoly a, UPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    UPoly r = divmod(a, b).remainder;
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const Rational lead = a.back();
    for (auto& c : a) c /= lead;
  }
  return a;
}

UPoly squarefree_part(const UPoly& p) {
  UPoly q = p;
  trim(q);
  if (q.size() <= 1) return q;
  return divmod(q, gcd(q, derivative(q))).quotient;
}

namespace {

int sign_changes(const std::vector<int>& signs) {
  int changes = 0, last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

}  // namespace

int count_real_roots(const UPoly& p) {
  UPoly f = p;
  trim(f);
  if (f.empty()) throw DomainError("root count of the zero polynomial");
  std::vector<UPoly> seq{f, derivative(f)};
  while (!seq.back().empty()) {
    UPoly r = divmod(seq[seq.size() - 2], seq.back()).remainder;
    for (auto& c : r) c = -c;
    seq.push_back(std::move(r));
  }
  seq.pop_back();
  std::vector<int> at_neg, at_pos;
  for (const auto& s : seq) {
    const int lead = sgn(s.back());
    at_pos.push_back(lead);
    at_neg.push_back((s.size() - 1) % 2 == 0 ? lead : -lead);
  }
  return sign_changes(at_neg) - sign_changes(at_pos);
}

}  // namespace mvph
