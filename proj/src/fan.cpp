#include "splice/fan.hpp"

#include <algorithm>

#include "splice/error.hpp"

namespace splice {

const Ray* SpliceFan::ray(const std::string& label) const {
  for (const auto& r : rays) {
    if (r.label == label) return &r;
  }
  return nullptr;
}

bool SpliceFan::operator==(const SpliceFan& other) const {
  if (n != other.n || rays.size() != other.rays.size() || cones.size() != other.cones.size()) return false;
  for (std::size_t i = 0; i < rays.size(); ++i) {
    if (rays[i].label != other.rays[i].label || rays[i].vector != other.rays[i].vector) return false;
  }
  for (std::size_t i = 0; i < cones.size(); ++i) {
    const auto& x = cones[i];
    const auto& y = other.cones[i];
    if (x.a != y.a || x.b != y.b || x.multiplicity != y.multiplicity) return false;
  }
  return true;
}

namespace {

BigInt exact_div(const BigInt& num, const BigInt& den, const std::string& where) {
  if (num % den != 0) {
    throw Error(ErrorCode::NonIntegralMultiplicity, where + ": " + to_string(num) + " / " + to_string(den));
  }
  return num / den;
}

// gcd of l_{x lambda} over leaves lambda on the far side of x as seen from y
// (all leaves except those beyond the edge toward y).
BigInt side_gcd(const SpliceDiagram& d, VertexId x, VertexId y) {
  const int toward = d.edge_toward(x, y);
  BigInt g = 0;
  for (VertexId l = 0; l < d.num_leaves(); ++l) {
    if (l == x || d.edge_toward(x, l) == toward) continue;
    g = gcd(g, d.linking().link(x, l));
  }
  return g;
}

}  // namespace

BigInt cone_multiplicity(const SpliceDiagram& d, int edge) {
  const Edge& e = d.edges().at(edge);
  const std::string where = "cone " + d.label(e.a) + "-" + d.label(e.b);
  if (d.is_node(e.a) && d.is_node(e.b)) {
    const BigInt g = side_gcd(d, e.a, e.b) * side_gcd(d, e.b, e.a);
    return exact_div(g, BigInt(static_cast<long>(e.wa)) * static_cast<long>(e.wb), where);
  }
  const VertexId u = d.is_node(e.a) ? e.a : e.b;
  const VertexId leaf = d.other_end(edge, u);
  return exact_div(side_gcd(d, u, leaf), BigInt(static_cast<long>(d.weight(u, edge))), where);
}

SpliceFan splice_fan(const SpliceDiagram& d) {
  d.require_valid();
  const ConditionReport rep = check_conditions(d);
  if (!rep.edge_determinant) throw Error(ErrorCode::ConditionViolation, "edge determinant condition fails");
  if (!rep.semigroup) throw Error(ErrorCode::ConditionViolation, "semigroup condition fails");
  SpliceFan f;
  f.n = d.num_leaves();
  for (VertexId l = 0; l < d.num_leaves(); ++l) {
    std::vector<BigInt> unit(f.n, 0);
    unit[l] = 1;
    f.rays.push_back({d.label(l), std::move(unit)});
  }
  for (int j = 0; j < d.num_nodes(); ++j) {
    const VertexId v = d.node_id(j);
    f.rays.push_back({d.label(v), primitive(node_weight_vector(d, v).entries)});
  }
  for (int e = 0; e < static_cast<int>(d.edges().size()); ++e) {
    const Edge& edge = d.edges()[e];
    f.cones.push_back({d.label(edge.a), d.label(edge.b), cone_multiplicity(d, e)});
  }
  return f;
}

std::vector<Rational> embed_vertex(const SpliceDiagram& d, VertexId v) {
  std::vector<Rational> out(d.num_leaves(), 0);
  if (d.is_leaf(v)) {
    out[v] = 1;
    return out;
  }
  const auto w = node_weight_vector(d, v).entries;
  BigInt norm = 0;
  for (const auto& x : w) norm += x;
  for (int i = 0; i < d.num_leaves(); ++i) out[i] = make_rational(w[i], norm);
  return out;
}

std::vector<Rational> barycenter(const SpliceDiagram& d, VertexId v, const std::vector<VertexId>& leaves) {
  if (leaves.empty()) throw Error(ErrorCode::InvalidArgument, "barycenter of an empty leaf set");
  std::vector<Rational> out(d.num_leaves(), 0);
  BigInt total = 0;
  for (VertexId l : leaves) {
    if (!d.is_leaf(l)) throw Error(ErrorCode::NotALeaf, "'" + d.label(l) + "'");
    total += d.linking().link(v, l);
  }
  for (VertexId l : leaves) out[l] = make_rational(d.linking().link(v, l), total);
  return out;
}

std::string to_string(CellKind kind) {
  switch (kind) {
    case CellKind::OnRay: return "OnRay";
    case CellKind::InCone: return "InCone";
    case CellKind::Outside: return "Outside";
  }
  return "Outside";
}

namespace {

// alpha with w = alpha * r, alpha > 0
std::optional<Rational> positive_multiple(const std::vector<BigInt>& r, const WeightVector& w) {
  std::optional<Rational> alpha;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] == 0) {
      if (w[i] != 0) return std::nullopt;
      continue;
    }
    Rational a = w[i] / Rational(r[i]);
    if (alpha && *alpha != a) return std::nullopt;
    alpha = a;
  }
  if (!alpha || *alpha <= 0) return std::nullopt;
  return alpha;
}

// (alpha, beta) with w = alpha r1 + beta r2, both > 0
std::optional<std::pair<Rational, Rational>> positive_combination(const std::vector<BigInt>& r1,
                                                                  const std::vector<BigInt>& r2,
                                                                  const WeightVector& w) {
  const std::size_t n = r1.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const BigInt det = r1[i] * r2[j] - r1[j] * r2[i];
      if (det == 0) continue;
      // Cramer on coordinates i, j, then check the rest
      const Rational alpha = (w[i] * Rational(r2[j]) - w[j] * Rational(r2[i])) / Rational(det);
      const Rational beta = (Rational(r1[i]) * w[j] - Rational(r1[j]) * w[i]) / Rational(det);
      for (std::size_t k = 0; k < n; ++k) {
        if (alpha * Rational(r1[k]) + beta * Rational(r2[k]) != w[k]) return std::nullopt;
      }
      if (alpha <= 0 || beta <= 0) return std::nullopt;
      return std::make_pair(alpha, beta);
    }
  }
  return std::nullopt;
}

}  // namespace

CellLocation locate(const SpliceFan& fan, const WeightVector& w) {
  if (static_cast<int>(w.size()) != fan.n) throw Error(ErrorCode::ShapeMismatch, "weight vector has the wrong length");
  for (const auto& x : w) {
    if (x < 0) throw Error(ErrorCode::InvalidArgument, "weight vectors must be non-negative");
  }
  if (std::all_of(w.begin(), w.end(), [](const Rational& x) { return x == 0; })) {
    throw Error(ErrorCode::InvalidArgument, "the zero vector has no cell");
  }
  for (const auto& r : fan.rays) {
    if (auto alpha = positive_multiple(r.vector, w)) return {CellKind::OnRay, r.label, {}, {*alpha}};
  }
  for (const auto& c : fan.cones) {
    const Ray* a = fan.ray(c.a);
    const Ray* b = fan.ray(c.b);
    if (!a || !b) throw Error(ErrorCode::InvalidArgument, "cone refers to an unknown ray");
    if (auto ab = positive_combination(a->vector, b->vector, w)) {
      return {CellKind::InCone, {}, {c.a, c.b}, {ab->first, ab->second}};
    }
  }
  return {};
}

namespace {

bool parallel(const std::vector<BigInt>& r, const std::vector<BigInt>& s) {
  for (std::size_t i = 0; i < r.size(); ++i) {
    for (std::size_t j = i + 1; j < r.size(); ++j) {
      if (r[i] * s[j] != r[j] * s[i]) return false;
    }
  }
  return true;
}

// y with y.r = 1, for primitive r
std::optional<std::vector<BigInt>> bezout(const std::vector<BigInt>& r) {
  std::vector<BigInt> y(r.size(), 0);
  BigInt g = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    BigInt ng, a, b;
    mpz_gcdext(ng.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t(), g.get_mpz_t(), r[i].get_mpz_t());
    for (std::size_t j = 0; j < i; ++j) y[j] *= a;
    y[i] = b;
    g = ng;
  }
  if (g != 1) return std::nullopt;
  return y;
}

bool is_unit(const std::vector<BigInt>& r) {
  int ones = 0;
  for (const auto& x : r) {
    if (x == 1) ++ones;
    else if (x != 0) return false;
  }
  return ones == 1;
}

}  // namespace

bool check_balancing(const SpliceFan& fan) {
  for (const auto& tau : fan.rays) {
    if (is_unit(tau.vector)) continue;
    const auto& r = tau.vector;
    std::vector<BigInt> sum(fan.n, 0);
    for (const auto& c : fan.cones) {
      if (c.a != tau.label && c.b != tau.label) continue;
      const Ray* other = fan.ray(c.a == tau.label ? c.b : c.a);
      if (!other) return false;
      const auto& s = other->vector;
      // index of the image of s in Z^n / Z r is the gcd of the 2x2 minors
      BigInt k = 0;
      for (std::size_t i = 0; i < r.size(); ++i) {
        for (std::size_t j = i + 1; j < r.size(); ++j) k = gcd(k, r[i] * s[j] - r[j] * s[i]);
      }
      if (k == 0) return false;
      // lift (s + t r) / k with the smallest t >= 0 making it integral; with
      // y.r = 1 that t is -y.s mod k
      BigInt t = 0;
      const auto y = bezout(r);
      if (!y) return false;
      for (std::size_t i = 0; i < r.size(); ++i) t -= (*y)[i] * s[i];
      mpz_fdiv_r(t.get_mpz_t(), t.get_mpz_t(), k.get_mpz_t());
      std::vector<BigInt> lift;
      for (std::size_t i = 0; i < r.size(); ++i) {
        const BigInt num = s[i] + t * r[i];
        if (num % k != 0) return false;
        lift.push_back(num / k);
      }
      if (lift.empty()) return false;
      for (std::size_t i = 0; i < r.size(); ++i) sum[i] += c.multiplicity * lift[i];
    }
    if (!parallel(r, sum)) return false;
  }
  return true;
}

}  // namespace splice
