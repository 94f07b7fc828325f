#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>

#include "../common/fixtures.hpp"
#include "splice/error.hpp"
#include "splice/io.hpp"
#include "splice/recover.hpp"

using namespace splice;
using namespace splice::testing;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

const std::string kData = SPLICE_DATA_DIR;

}  // namespace

TEST_CASE("integer and rational scalars") {
  CHECK(integer_json(BigInt(42)) == Json(42));
  CHECK(integer_json(BigInt(-7)) == Json(-7));
  const BigInt big("123456789012345678901234567890");
  CHECK(integer_json(big) == Json("123456789012345678901234567890"));
  CHECK(integer_json(BigInt("9007199254740992")).is_string());
  CHECK(integer_json(BigInt("9007199254740991")).is_number());
  CHECK(json_integer(integer_json(big)) == big);
  CHECK(json_integer(Json(17)) == 17);
  CHECK(json_integer(Json("-17")) == -17);
  CHECK(code_of([] { json_integer(Json(1.5)); }) == ErrorCode::Parse);

  CHECK(rational_json(make_rational(-3, 6)) == Json("-1/2"));
  CHECK(json_rational(Json("4/6")) == make_rational(2, 3));
  CHECK(json_rational(Json(5)) == 5);
}

TEST_CASE("weight lists") {
  CHECK(parse_weight_list("1,1/2, 3") == WeightVector{1, make_rational(1, 2), 3});
  CHECK(code_of([] { parse_weight_list(""); }) == ErrorCode::Parse);
  CHECK(code_of([] { parse_weight_list("1,,2"); }) == ErrorCode::Parse);
  CHECK(code_of([] { parse_weight_list("1,2,"); }) == ErrorCode::Parse);
  CHECK(code_of([] { parse_weight_list("1,x"); }) == ErrorCode::Parse);
  CHECK(code_of([] { parse_json("{\"leaves\": ["); }) == ErrorCode::Parse);
  CHECK(code_of([] { read_json_file("/nonexistent/file.json"); }) == ErrorCode::Parse);
}

TEST_CASE("diagram documents") {
  const auto d = diagram_from_json(read_json_file(kData + "/d1.json"));
  CHECK(isomorphic(d, d1()));
  CHECK(to_json(d) == to_json(d1()));
  CHECK(to_json(diagram_from_json(to_json(d))) == to_json(d));
  CHECK(to_json(d)["edges"][2] == Json::parse(R"({"a":"u","b":"v","wa":49,"wb":11})"));

  auto extra = to_json(d);
  extra["colour"] = "red";
  CHECK(code_of([&] { diagram_from_json(extra); }) == ErrorCode::Parse);
  auto edge_extra = to_json(d);
  edge_extra["edges"][0]["w"] = 1;
  CHECK(code_of([&] { diagram_from_json(edge_extra); }) == ErrorCode::Parse);
  auto unknown = to_json(d);
  unknown["edges"][0]["b"] = "l9";
  CHECK(code_of([&] { diagram_from_json(unknown); }) == ErrorCode::Parse);

  auto missing = to_json(d);
  missing["edges"][0].erase("wa");
  const auto m = diagram_from_json(missing);
  CHECK_FALSE(m.valid());
}

TEST_CASE("system documents") {
  const auto s = system_from_json(read_json_file(kData + "/d1_system.json"));
  const auto expected = d1_system();
  REQUIRE(s.equations().size() == expected.equations().size());
  for (std::size_t i = 0; i < s.equations().size(); ++i) {
    CHECK(s.equations()[i].minimal == expected.equations()[i].minimal);
    CHECK(s.equations()[i].node == expected.equations()[i].node);
    CHECK(s.equations()[i].index == expected.equations()[i].index);
  }
  CHECK(to_json(s) == to_json(expected));

  TailMap tails;
  tails[{5, 1}] = poly(5, {{7, exps({1, 0, 1, 0, 1})}});
  const auto with_tail = build_system(d1(), d1_coefficients(), tails);
  CHECK(to_json(system_from_json(to_json(with_tail))) == to_json(with_tail));

  // the alternative co-weight of 11 survives the round trip
  const auto alt = build_system(d1(), d1_coefficients(), {}, {{6, 2, {3, 1, 0, 0, 0}}});
  CHECK(to_json(system_from_json(to_json(alt))) == to_json(alt));

  for (const auto& sample : sample_grid(1, 41)) {
    const auto d = random_diagram(sample.leaves, sample.nodes, sample.seed, sample.coprime);
    const auto sys = build_default_system(d);
    CHECK(to_json(system_from_json(to_json(sys))) == to_json(sys));
  }

  auto broken = to_json(expected);
  broken["equations"][1]["terms"][0]["c"] = "2";
  broken["equations"][2]["terms"][0]["c"] = "2";
  CHECK_THROWS_AS(system_from_json(broken), Error);
}

TEST_CASE("fan documents") {
  const auto f = splice_fan(d1());
  const Json j = to_json(f);
  CHECK(j["rays"][5] == Json::parse(R"({"label":"u","vector":[147,98,60,84,210]})"));
  CHECK(j["cones"][2] == Json::parse(R"({"rays":["u","v"],"multiplicity":1})"));
  CHECK(fan_from_json(j) == f);
  CHECK(to_json(fan_from_json(j)) == j);

  auto wrong = j;
  wrong["rays"][0]["vector"] = Json::array({1, 0});
  CHECK(code_of([&] { fan_from_json(wrong); }) == ErrorCode::Parse);
  auto extra = j;
  extra["cones"][0]["weight"] = 1;
  CHECK(code_of([&] { fan_from_json(extra); }) == ErrorCode::Parse);
  CHECK(isomorphic(recover(fan_from_json(j)), d1()));
}

TEST_CASE("report documents") {
  const auto s = d1_system();
  const auto f = splice_fan(s.diagram());
  const Json out = to_json(membership(s, f, weights({1, 1, 1, 1, 1})), s.diagram());
  CHECK(out["result"] == "Out");
  CHECK(out["certificate"]["node"] == "v");
  CHECK(out["certificate"]["monomial"] == Json::array({0, 0, 0, 0, 2}));
  CHECK(out["certificate"]["values"] == Json::array({"5", "7", "5", "2"}));

  const Json in = to_json(membership(s, f, node_weight(s.diagram(), 6)), s.diagram());
  CHECK(in["result"] == "In");
  CHECK(in["cell"]["kind"] == "OnRay");
  CHECK(in["cell"]["ray"] == "v");

  CHECK(to_json(check_conditions(d1())) == Json::parse(R"({"edge_determinant":true,"semigroup":true,"coprime":true})"));

  const auto r = root(s.diagram(), "l1");
  const auto ecs = end_curve_system(s, r);
  const Json ec = endcurve_json(r, binomial_reduce(ecs), parameterize(ecs, r));
  CHECK(ec["root"] == "l1");
  CHECK(ec["exponents"] == Json::array({49, 30, 42, 105}));
  CHECK(ec["g"] == 1);
  CHECK(ec["components"][0]["exact"] == true);
  CHECK(ec["components"][0]["coeffs"] == Json::parse(R"([["-1","0"],["3","0"],["-2","0"],["1","0"]])"));
  for (const auto& b : ec["binomials"]) CHECK(b.contains("degree"));
}
