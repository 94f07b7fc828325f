#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "../common/fixtures.hpp"
#include "splice/certificate.hpp"
#include "splice/endcurve.hpp"
#include "splice/error.hpp"

using namespace splice;
using namespace splice::testing;

namespace {

MonomialCurve d1_curve(const std::vector<long>& coeffs) {
  MonomialCurve c;
  c.root = 0;
  c.leaves = {1, 2, 3, 4};
  c.exponents = ints({49, 30, 42, 105});
  std::vector<Complex> numeric;
  std::vector<Rational> exact;
  for (long x : coeffs) {
    numeric.emplace_back(static_cast<double>(x), 0.0);
    exact.emplace_back(x);
  }
  c.components = {numeric};
  c.exact = {exact};
  return c;
}

bool has_binomial(const BinomialSystem& b, const Polynomial& p) {
  for (const auto& x : b.binomials) {
    const Polynomial q = to_polynomial(x, b.num_vars);
    // equal up to a nonzero scalar
    const Rational lead = q.coeff(p.terms().front().exponent);
    if (lead != 0 && q.scaled(p.terms().front().coeff / lead) == p) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("rooting") {
  const auto d = d1();
  const auto r = root(d, "l1");
  CHECK(r.root == 0);
  CHECK(r.others == std::vector<VertexId>{1, 2, 3, 4});
  CHECK(r.links == ints({49, 30, 42, 105}));
  CHECK(root(s0(), "l1").links == ints({5, 3}));
  CHECK(root(star(2, 4, 3), "l3").links == ints({4, 2}));
  try {
    root(d, "u");
    FAIL("expected NotALeaf");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotALeaf);
  }
}

TEST_CASE("end-curve system of D1") {
  const auto s = d1_system();
  const auto ecs = end_curve_system(s, root(s.diagram(), "l1"));
  REQUIRE(ecs.equations.size() == 3);
  CHECK(ecs.equations[0].poly == poly(5, {{-2, exps({0, 3, 0, 0, 0})}, {1, exps({0, 0, 0, 1, 1})}}));
  CHECK(ecs.equations[1].poly ==
        poly(5, {{1, exps({0, 0, 7, 0, 0})}, {1, exps({0, 0, 0, 5, 0})}, {-2155, exps({0, 0, 0, 0, 2})}}));
  CHECK(ecs.equations[2].poly ==
        poly(5, {{1, exps({0, 0, 7, 0, 0})}, {2, exps({0, 0, 0, 5, 0})}, {-2123, exps({0, 0, 0, 0, 2})}}));
  for (const auto& eq : ecs.equations) {
    for (const auto& t : eq.poly.terms()) CHECK(t.exponent[0] == 0);
  }
}

TEST_CASE("binomial system of D1") {
  const auto s = d1_system();
  const auto r = root(s.diagram(), "l1");
  const auto b = binomial_reduce(end_curve_system(s, r));
  REQUIRE(b.binomials.size() == 3);
  CHECK(has_binomial(b, poly(5, {{1, exps({0, 0, 0, 5, 0})}, {32, exps({0, 0, 0, 0, 2})}})));
  CHECK(has_binomial(b, poly(5, {{1, exps({0, 0, 7, 0, 0})}, {-2187, exps({0, 0, 0, 0, 2})}})));
  CHECK(has_binomial(b, poly(5, {{-2, exps({0, 3, 0, 0, 0})}, {1, exps({0, 0, 0, 1, 1})}})));
  for (const auto& x : b.binomials) {
    const auto deg = binomial_degree(r, x);
    REQUIRE(deg);
    CHECK(*deg == s.diagram().linking().link(0, x.node));
    const auto wv = node_weight_vector(s.diagram(), x.node).entries;
    CHECK(pair(wv, x.lead) == s.diagram().total_weight(x.node));
    CHECK(pair(wv, x.other) == s.diagram().total_weight(x.node));
    CHECK(x.kappa != 0);
  }
}

TEST_CASE("parameterization of D1") {
  const auto s = d1_system();
  const auto r = root(s.diagram(), "l1");
  const auto ecs = end_curve_system(s, r);
  const auto c = parameterize(ecs, r);
  CHECK(c.g == 1);
  CHECK(c.exponents == ints({49, 30, 42, 105}));
  REQUIRE(c.components.size() == 1);
  REQUIRE(c.exact.size() == 1);
  REQUIRE(c.exact[0]);
  CHECK(*c.exact[0] == std::vector<Rational>{-1, 3, -2, 1});
  CHECK(verify_parameterization(c, ecs));
  CHECK(parameterization_residual(c, ecs) <= 1e-9);

  CHECK(verify_parameterization(d1_curve({-1, 3, -2, 1}), ecs));
  CHECK_FALSE(verify_parameterization(d1_curve({1, 3, -2, 1}), ecs));
  EndCurveSystem empty;
  empty.num_vars = 5;
  CHECK(verify_parameterization(d1_curve({1, 3, -2, 1}), empty));
}

TEST_CASE("stars") {
  const auto s = build_default_system(s0());
  const auto r = root(s.diagram(), "l1");
  const auto ecs = end_curve_system(s, r);
  REQUIRE(ecs.equations.size() == 1);
  CHECK(ecs.equations[0].poly == poly(3, {{1, exps({0, 3, 0})}, {1, exps({0, 0, 5})}}));
  const auto b = binomial_reduce(ecs);
  REQUIRE(b.binomials.size() == 1);
  CHECK(has_binomial(b, poly(3, {{1, exps({0, 3, 0})}, {1, exps({0, 0, 5})}})));
  const auto c = parameterize(ecs, r);
  CHECK(c.g == 1);
  CHECK(c.exponents == ints({5, 3}));
  CHECK(verify_parameterization(c, ecs));

  const auto t = build_default_system(star(2, 4, 3));
  const auto rt = root(t.diagram(), "l3");
  const auto ct = parameterize(end_curve_system(t, rt), rt);
  CHECK(ct.g == 2);
  CHECK(ct.exponents == ints({2, 1}));
  CHECK(ct.components.size() == 2);
  CHECK(verify_parameterization(ct, end_curve_system(t, rt)));
  CHECK(std::abs(ct.components[0][0] - ct.components[1][0]) > 1e-6);

  // a rooted star with more leaves keeps valency - 2 binomials
  SpliceDiagram five({"a", "b", "c", "e", "f"}, {"v"},
                     {{"v", "a", 2, {}}, {"v", "b", 3, {}}, {"v", "c", 5, {}}, {"v", "e", 7, {}}, {"v", "f", 11, {}}});
  const auto sf = build_default_system(five);
  const auto bf = binomial_reduce(end_curve_system(sf, root(five, "c")));
  CHECK(bf.binomials.size() == 3);
}

TEST_CASE("broken Hamm condition degenerates the elimination") {
  auto coeffs = d1_coefficients();
  coeffs[1].rows = {{1, 33}, {1, 2}, {2, 4}, {1, 3}};
  const auto s = build_system_unchecked(d1(), coeffs);
  try {
    binomial_reduce(end_curve_system(s, root(s.diagram(), "l1")));
    FAIL("expected EliminationDegenerate");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EliminationDegenerate);
  }
}

TEST_CASE("end-curve properties on generated diagrams") {
  for (const auto& sample : sample_grid(2, 17)) {
    const auto d = random_diagram(sample.leaves, sample.nodes, sample.seed, sample.coprime);
    for (std::uint64_t variant = 0; variant < 2; ++variant) {
      std::vector<CoefficientMatrix> coeffs;
      for (int j = 0; j < d.num_nodes(); ++j) coeffs.push_back(random_coefficients(d, d.node_id(j), sample.seed + variant));
      const auto s = variant == 0 ? build_default_system(d) : build_system(d, coeffs);
      for (VertexId leaf = 0; leaf < d.num_leaves(); ++leaf) {
        const auto r = root(d, leaf);
        const auto ecs = end_curve_system(s, r);
        const auto b = binomial_reduce(ecs);
        for (const auto& x : b.binomials) {
          const auto deg = binomial_degree(r, x);
          REQUIRE(deg);
          CHECK(*deg == d.linking().link(leaf, x.node));
        }
        const auto c = parameterize(ecs, r);
        CHECK(c.g == gcd_of(r.links));
        CHECK(gcd_of(c.exponents) == 1);
        CHECK(c.components.size() == static_cast<std::size_t>(c.g.get_ui()));
        CHECK(verify_parameterization(c, ecs));
        CHECK(parameterization_residual(c, ecs) <= 1e-9);
        if (variant == 0) {
          const auto bt = boundary_trop(s, {leaf}, 5, leaf);
          REQUIRE(bt.ray);
          CHECK(*bt.ray == c.exponents);
        }
      }
    }
  }
}
