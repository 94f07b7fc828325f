#include "splice/certificate.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "splice/error.hpp"

namespace splice {

namespace {

bool killed_by(const ExponentVector& m, const std::optional<TruncationContext>& t) {
  if (!t) return false;
  return std::any_of(t->leaves.begin(), t->leaves.end(), [&](VertexId l) { return m.at(l) > 0; });
}

Polynomial truncated(const Polynomial& p, const std::optional<TruncationContext>& t) {
  return t ? tau_truncate(p, t->leaves) : p;
}

Polynomial combine(const std::vector<const Equation*>& eqs, const std::vector<Rational>& c,
                   const std::optional<TruncationContext>& t, int n) {
  Polynomial sum(n);
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    if (c[i] != 0) sum = sum + truncated(eqs[i]->full(), t).scaled(c[i]);
  }
  return sum;
}

void require_positive(const WeightVector& w, int n, const std::optional<TruncationContext>& t) {
  if (static_cast<int>(w.size()) != n) throw Error(ErrorCode::ShapeMismatch, "weight vector has the wrong length");
  for (int i = 0; i < n; ++i) {
    const bool dropped = t && std::find(t->leaves.begin(), t->leaves.end(), i) != t->leaves.end();
    if (!dropped && w[i] <= 0) throw Error(ErrorCode::InvalidArgument, "weight vector must be strictly positive");
  }
}

}  // namespace

std::optional<Certificate> certificate_search(const SpliceSystem& s, const WeightVector& w,
                                              const std::optional<TruncationContext>& truncation) {
  const SpliceDiagram& d = s.diagram();
  const int n = d.num_leaves();
  require_positive(w, n, truncation);

  for (int j = 0; j < d.num_nodes(); ++j) {
    const VertexId v = d.node_id(j);
    const auto& coweights = s.coweights(j);
    const int delta = static_cast<int>(coweights.size());
    const auto eqs = s.equations_at(v);

    std::vector<std::optional<Rational>> values(delta);
    for (int e = 0; e < delta; ++e) {
      const ExponentVector m = exponent_of(coweights[e]);
      if (!killed_by(m, truncation)) values[e] = pair(w, m);
    }
    int best = -1;
    for (int e = 0; e < delta; ++e) {
      if (values[e] && (best < 0 || *values[e] < *values[best])) best = e;
    }
    if (best < 0) continue;

    // edges whose monomial vanishes or is strictly heavier than the minimum
    std::vector<int> dominated;
    for (int e = 0; e < delta; ++e) {
      if (e != best && (!values[e] || *values[e] > *values[best])) dominated.push_back(e);
    }
    if (dominated.size() < 2) continue;
    std::stable_sort(dominated.begin(), dominated.end(), [&](int a, int b) {
      if (!values[a] || !values[b]) return !values[a] && values[b];
      return *values[a] > *values[b];
    });
    const int e1 = dominated[0], e2 = dominated[1];

    // combination vanishing on every edge but best, e1, e2 and equal to 1 on best
    QMatrix a;
    std::vector<Rational> rhs;
    const auto& rows = s.coefficients(j).rows;
    for (int e = 0; e < delta; ++e) {
      if (e == e1 || e == e2) continue;
      a.push_back(rows[e]);
      rhs.push_back(e == best ? 1 : 0);
    }
    if (rank(a) < static_cast<int>(a.size())) continue;
    auto c = solve(a, rhs);
    if (!c) continue;

    Certificate cert{v, d.incident(v)[best].edge, values, *c, exponent_of(coweights[best]), Polynomial(n)};
    cert.combined = combine(eqs, cert.combination, truncation, n);
    if (initial_form(cert.combined, w) == Polynomial::monomial(cert.monomial)) return cert;
  }
  return std::nullopt;
}

bool verify_certificate(const SpliceSystem& s, const WeightVector& w, const Certificate& c,
                        const std::optional<TruncationContext>& truncation) {
  const SpliceDiagram& d = s.diagram();
  if (!d.is_node(c.node)) return false;
  const auto eqs = s.equations_at(c.node);
  if (c.combination.size() != eqs.size()) return false;
  const Polynomial combined = combine(eqs, c.combination, truncation, d.num_leaves());
  return combined == c.combined && initial_form(combined, w) == Polynomial::monomial(c.monomial);
}

Membership membership(const SpliceSystem& s, const SpliceFan& fan, const WeightVector& w) {
  require_positive(w, s.num_vars(), std::nullopt);
  const CellLocation cell = locate(fan, w);
  auto cert = certificate_search(s, w);
  const bool inside = cell.kind != CellKind::Outside;
  if (inside && cert) {
    throw Error(ErrorCode::Inconsistent, "w lies in the fan but a certificate exists at node '" +
                                             s.diagram().label(cert->node) + "'");
  }
  if (!inside && !cert) throw Error(ErrorCode::Inconsistent, "w lies outside the fan but no certificate was found");
  if (inside) return In{cell};
  return Out{std::move(*cert)};
}

bool monomial_in_span(const std::vector<Polynomial>& generators, const WeightVector& w, const ExponentVector& target) {
  if (generators.empty()) return false;
  const Rational level = pair(w, target);
  std::set<ExponentVector> monomials;
  for (const auto& g : generators) {
    for (const auto& t : g.terms()) monomials.insert(t.exponent);
  }
  if (!monomials.count(target)) return false;
  QMatrix a;
  std::vector<Rational> rhs;
  for (const auto& m : monomials) {
    const Rational value = pair(w, m);
    if (value > level) continue;
    std::vector<Rational> row;
    for (const auto& g : generators) row.push_back(g.coeff(m));
    a.push_back(std::move(row));
    rhs.push_back(m == target ? 1 : 0);
  }
  return solve(a, rhs).has_value();
}

std::optional<ExponentVector> monomial_in_span_oracle(const std::vector<Polynomial>& generators, const WeightVector& w) {
  std::vector<ExponentVector> candidates;
  for (const auto& g : generators) {
    for (const auto& t : g.terms()) candidates.push_back(t.exponent);
  }
  std::sort(candidates.begin(), candidates.end(), term_order_less);
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  for (const auto& m : candidates) {
    if (monomial_in_span(generators, w, m)) return m;
  }
  return std::nullopt;
}

InitialIdeal initial_ideal_generators(const SpliceSystem& s, const WeightVector& w) {
  require_positive(w, s.num_vars(), std::nullopt);
  InitialIdeal out;
  std::vector<Polynomial> full;
  for (const auto& eq : s.equations()) {
    full.push_back(eq.full());
    out.generators.push_back(initial_form(full.back(), w));
    if (out.generators.back().is_monomial()) out.monomial_free = false;
  }
  if (out.monomial_free && monomial_in_span_oracle(full, w)) out.monomial_free = false;
  return out;
}

namespace {

std::vector<BigInt> drop_coordinates(const std::vector<BigInt>& v, const std::vector<VertexId>& leaves) {
  std::vector<BigInt> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::find(leaves.begin(), leaves.end(), static_cast<VertexId>(i)) == leaves.end()) out.push_back(v[i]);
  }
  return out;
}

// Inverse of drop_coordinates, with zeros at the dropped leaves.
WeightVector lift_coordinates(const std::vector<Rational>& v, const std::vector<VertexId>& leaves, int n) {
  WeightVector out(n, 0);
  std::size_t k = 0;
  for (int i = 0; i < n; ++i) {
    if (std::find(leaves.begin(), leaves.end(), i) == leaves.end()) out[i] = v[k++];
  }
  return out;
}

bool parallel(const std::vector<Rational>& a, const std::vector<BigInt>& r) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      if (a[i] * Rational(r[j]) != a[j] * Rational(r[i])) return false;
    }
  }
  return true;
}

}  // namespace

BoundaryResult boundary_trop(const SpliceSystem& s, const std::vector<VertexId>& leaves, int samples,
                             std::uint64_t seed) {
  const SpliceDiagram& d = s.diagram();
  const int n = d.num_leaves();
  std::vector<VertexId> L = leaves;
  std::sort(L.begin(), L.end());
  L.erase(std::unique(L.begin(), L.end()), L.end());
  if (L.empty() || static_cast<int>(L.size()) >= n) {
    throw Error(ErrorCode::InvalidArgument, "the truncation needs a nonempty proper set of leaves");
  }
  for (VertexId l : L) {
    if (!d.is_leaf(l)) throw Error(ErrorCode::NotALeaf, "vertex id " + std::to_string(l));
  }
  const TruncationContext ctx{L};

  BoundaryResult out;
  if (L.size() == 1) {
    const VertexId u = d.incident(L[0])[0].neighbor;
    out.ray = primitive(drop_coordinates(node_weight_vector(d, u).entries, L));
  }

  // Sample positive vectors on the surviving coordinates: plain random ones,
  // and perturbations of the projected node rays (the delicate region).
  std::mt19937_64 rng(seed);
  auto uniform = [&](int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); };
  std::vector<std::vector<BigInt>> anchors;
  for (int j = 0; j < d.num_nodes(); ++j) {
    anchors.push_back(drop_coordinates(node_weight_vector(d, d.node_id(j)).entries, L));
  }
  const int m = n - static_cast<int>(L.size());
  bool consistent = true;
  for (int k = 0; k < samples && consistent; ++k) {
    std::vector<Rational> p(m);
    if (k % 2 == 0) {
      for (auto& x : p) x = uniform(1, 100);
    } else {
      const auto& a = anchors[(k / 2) % anchors.size()];
      for (int i = 0; i < m; ++i) p[i] = Rational(a[i]) * 1000 + uniform(-3, 3);
      for (auto& x : p) {
        if (x <= 0) x = 1;
      }
    }
    const bool on_ray = out.ray && parallel(p, *out.ray);
    const bool cert = certificate_search(s, lift_coordinates(p, L, n), ctx).has_value();
    if (cert == on_ray) consistent = false;
    ++out.samples;
  }
  if (out.ray && consistent) {
    // the ray itself must carry no certificate
    std::vector<Rational> p;
    for (const auto& x : *out.ray) p.emplace_back(x);
    if (certificate_search(s, lift_coordinates(p, L, n), ctx)) consistent = false;
    ++out.samples;
  }
  out.consistent = consistent;
  return out;
}

}  // namespace splice
