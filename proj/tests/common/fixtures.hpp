#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "splice/fan.hpp"
#include "splice/system.hpp"

namespace splice::testing {

// Leaves l1..l5, nodes u and v joined by an edge with weights 49 (at u) and 11 (at v).
inline SpliceDiagram d1() {
  return SpliceDiagram({"l1", "l2", "l3", "l4", "l5"}, {"u", "v"},
                       {{"u", "l1", 2, {}},
                        {"u", "l2", 3, {}},
                        {"u", "v", 49, 11},
                        {"v", "l3", 7, {}},
                        {"v", "l4", 5, {}},
                        {"v", "l5", 2, {}}});
}

inline std::vector<CoefficientMatrix> d1_coefficients() {
  return {{5, {{1}, {-2}, {1}}}, {6, {{1, 33}, {1, 1}, {1, 2}, {-2155, -2123}}}};
}

inline SpliceSystem d1_system() { return build_system(d1(), d1_coefficients()); }

inline SpliceDiagram star(std::int64_t a, std::int64_t b, std::int64_t c) {
  return SpliceDiagram({"l1", "l2", "l3"}, {"v"}, {{"v", "l1", a, {}}, {"v", "l2", b, {}}, {"v", "l3", c, {}}});
}

inline SpliceDiagram s0() { return star(2, 3, 5); }

inline WeightVector as_weight(const std::vector<BigInt>& v) {
  WeightVector out;
  for (const auto& x : v) out.emplace_back(x);
  return out;
}

inline WeightVector weights(std::initializer_list<long> v) {
  WeightVector out;
  for (long x : v) out.emplace_back(x);
  return out;
}

inline std::vector<BigInt> ints(std::initializer_list<long> v) {
  std::vector<BigInt> out;
  for (long x : v) out.emplace_back(x);
  return out;
}

inline ExponentVector exps(std::initializer_list<std::int64_t> v) { return ExponentVector(v); }

inline Polynomial poly(int n, std::initializer_list<std::pair<long, ExponentVector>> terms) {
  std::vector<Term> out;
  for (const auto& [c, m] : terms) out.push_back({Rational(c), m});
  return Polynomial(n, std::move(out));
}

// A spread of generated diagrams: every shape with 3..8 leaves and 1..3 nodes.
struct Sample {
  int leaves;
  int nodes;
  std::uint64_t seed;
  bool coprime;
};

inline std::vector<Sample> sample_grid(int per_shape, std::uint64_t salt = 0) {
  std::vector<Sample> out;
  for (int l = 3; l <= 8; ++l) {
    for (int n = 1; n <= 3 && n <= l - 2; ++n) {
      for (int s = 0; s < per_shape; ++s) {
        out.push_back({l, n, salt + 1000ULL * l + 100ULL * n + s, s % 2 == 0});
      }
    }
  }
  return out;
}

inline Rational small_positive(std::mt19937_64& rng) {
  return make_rational(static_cast<long>(rng() % 9 + 1), static_cast<long>(rng() % 4 + 1));
}

// Strictly positive query: uniform, or a point of the fan away from the leaf rays.
inline WeightVector random_query(const SpliceFan& fan, std::mt19937_64& rng, bool on_fan) {
  WeightVector w(fan.n);
  if (!on_fan) {
    for (auto& x : w) x = make_rational(static_cast<long>(rng() % 50 + 1), static_cast<long>(rng() % 3 + 1));
    return w;
  }
  const Cone2& c = fan.cones[rng() % fan.cones.size()];
  const Ray* a = fan.ray(c.a);
  const Ray* b = fan.ray(c.b);
  const Rational alpha = small_positive(rng);
  Rational beta = small_positive(rng);
  // sometimes a node ray alone
  const bool a_node = std::count_if(a->vector.begin(), a->vector.end(), [](const BigInt& x) { return x != 0; }) > 1;
  if (a_node && rng() % 3 == 0) beta = 0;
  for (int i = 0; i < fan.n; ++i) w[i] = alpha * Rational(a->vector[i]) + beta * Rational(b->vector[i]);
  return w;
}

}  // namespace splice::testing
