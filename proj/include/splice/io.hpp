#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "splice/certificate.hpp"
#include "splice/endcurve.hpp"
#include "splice/fan.hpp"
#include "splice/smoothness.hpp"
#include "splice/system.hpp"

namespace splice {

using Json = nlohmann::ordered_json;

/// Integers below 2^53 in magnitude are JSON numbers, larger ones decimal
/// strings; readers accept both.
Json integer_json(const BigInt& x);
BigInt json_integer(const Json& j);
Json rational_json(const Rational& q);
Rational json_rational(const Json& j);

/// Throws Error(Parse).
Json parse_json(const std::string& text);
Json read_json_file(const std::string& path);

/// Comma-separated rationals such as "1,1/2,3".
WeightVector parse_weight_list(const std::string& text);

Json to_json(const SpliceDiagram& d);
SpliceDiagram diagram_from_json(const Json& j);

Json terms_json(const Polynomial& p);
Polynomial polynomial_from_json(const Json& j, int num_vars);

Json to_json(const SpliceSystem& s);
/// Co-weights and coefficients are read back from the minimal terms; the
/// result must pass build_system.
SpliceSystem system_from_json(const Json& j);

Json to_json(const SpliceFan& f);
SpliceFan fan_from_json(const Json& j);

Json to_json(const ConditionReport& r);
Json to_json(const CellLocation& c);
Json to_json(const Certificate& c, const SpliceDiagram& d);
Json to_json(const Membership& m, const SpliceDiagram& d);
Json to_json(const InitialIdeal& ideal);
Json to_json(const SmoothnessReport& r);

Json endcurve_json(const RootedDiagram& r, const BinomialSystem& b, const MonomialCurve& c);

}  // namespace splice
