#pragma once

#include <json.hpp>

#include <string>

#include "mvph/criterion.hpp"
#include "mvph/kulkarni.hpp"
#include "mvph/parallel.hpp"
#include "mvph/polynomial.hpp"
#include "mvph/realize.hpp"

namespace mvph {

using Json = nlohmann::ordered_json;

/// Parses text; malformed JSON becomes ParseError.
Json parse_json(const std::string& text);

/// {"n": 3, "terms": [{"e": [2,0,1], "c": "1"}, ...]}, grlex descending.
/// Input may instead carry {"n": 3, "expr": "1 + s1^2"}.
Json to_json(const Polynomial& p);
Polynomial polynomial_from_json(const Json& j);

/// {"p0": "0", "num": poly, "den": poly, "coprime_declared": true}.
Json to_json(const RationalTransform& t);
RationalTransform transform_from_json(const Json& j);

/// {"m", "n", "alpha", "T", "K", "t", "p0"} with doubles.
Json to_json(const KulkarniRep& rep);
/// The same layout with string rationals and "exact": true.
Json to_json(const ExactKulkarniRep& rep);
/// Accepts both layouts.
KulkarniRep rep_from_json(const Json& j);
/// Exact layout only, or the exact image of a double layout.
ExactKulkarniRep exact_rep_from_json(const Json& j);

/// {"alpha", "T", "t", "p0", "rates"}.
Json to_json(const UnivariateME& law);
Json to_json(const LinearResolvent& r);
Json to_json(const RealizeReport& report);
Json to_json(const CriterionVerdict& v);
Json to_json(const Estimate& e);
Json to_json(const ValidationReport& r);

}  // namespace mvph
