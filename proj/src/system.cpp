#include "splice/system.hpp"

#include <algorithm>
#include <random>

#include "splice/error.hpp"

namespace splice {

CoefficientMatrix default_coefficients(const SpliceDiagram& d, VertexId v) {
  if (!d.is_node(v)) throw Error(ErrorCode::InvalidArgument, "'" + d.label(v) + "' is not a node");
  const int delta = d.valency(v);
  CoefficientMatrix c{v, QMatrix(delta, std::vector<Rational>(delta - 2))};
  for (int j = 1; j <= delta; ++j) {
    Rational p = 1;
    for (int i = 1; i <= delta - 2; ++i) {
      c.rows[j - 1][i - 1] = p;
      p *= j;
    }
  }
  return c;
}

CoefficientMatrix random_coefficients(const SpliceDiagram& d, VertexId v, std::uint64_t seed) {
  if (!d.is_node(v)) throw Error(ErrorCode::InvalidArgument, "'" + d.label(v) + "' is not a node");
  const int delta = d.valency(v);
  std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(v + 1)));
  for (int attempt = 0; attempt < 1000; ++attempt) {
    CoefficientMatrix c{v, QMatrix(delta, std::vector<Rational>(delta - 2))};
    for (auto& row : c.rows) {
      for (auto& x : row) {
        // uniform on {-9..-1, 1..9}
        const int k = static_cast<int>(rng() % 18);
        x = k < 9 ? k - 9 : k - 8;
      }
    }
    if (check_hamm(c)) return c;
  }
  return default_coefficients(d, v);
}

namespace {

// Calls f on every k-subset of {0..n-1}, in lexicographic order, until f returns false.
template <typename F>
void for_each_subset(int n, int k, F&& f) {
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    if (!f(idx)) return;
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

bool check_hamm(const CoefficientMatrix& c) {
  const int delta = static_cast<int>(c.rows.size());
  if (delta < 3) throw Error(ErrorCode::ShapeMismatch, "a coefficient matrix needs at least three rows");
  for (const auto& row : c.rows) {
    if (static_cast<int>(row.size()) != delta - 2) {
      throw Error(ErrorCode::ShapeMismatch, "coefficient rows must have " + std::to_string(delta - 2) + " entries");
    }
  }
  bool ok = true;
  for_each_subset(delta, delta - 2, [&](const std::vector<int>& pick) {
    QMatrix sub;
    for (int r : pick) sub.push_back(c.rows[r]);
    if (determinant(sub) == 0) ok = false;
    return ok;
  });
  return ok;
}

ExponentVector exponent_of(const AdmissibleCoweight& a) { return a.coeffs; }

SpliceSystem::SpliceSystem(SpliceDiagram diagram, std::vector<std::vector<AdmissibleCoweight>> coweights,
                           std::vector<CoefficientMatrix> coefficients, const TailMap& tails)
    : diagram_(std::move(diagram)), coweights_(std::move(coweights)), coefficients_(std::move(coefficients)) {
  const int n = diagram_.num_leaves();
  for (int j = 0; j < diagram_.num_nodes(); ++j) {
    const VertexId v = diagram_.node_id(j);
    const auto& c = coefficients_[j];
    for (int i = 0; i < diagram_.valency(v) - 2; ++i) {
      std::vector<Term> terms;
      for (std::size_t e = 0; e < coweights_[j].size(); ++e) {
        terms.push_back({c.rows[e][i], exponent_of(coweights_[j][e])});
      }
      Equation eq{v, i + 1, Polynomial(n, std::move(terms)), Polynomial(n)};
      auto t = tails.find({v, i + 1});
      if (t != tails.end()) eq.tail = t->second;
      equations_.push_back(std::move(eq));
    }
  }
}

const AdmissibleCoweight& SpliceSystem::coweight(VertexId v, int edge) const {
  const int k = diagram_.incidence_index(v, edge);
  if (!diagram_.is_node(v) || k < 0) throw Error(ErrorCode::InvalidArgument, "no co-weight for this node and edge");
  return coweights_[v - diagram_.num_leaves()][k];
}

std::vector<const Equation*> SpliceSystem::equations_at(VertexId v) const {
  std::vector<const Equation*> out;
  for (const auto& e : equations_) {
    if (e.node == v) out.push_back(&e);
  }
  return out;
}

bool SpliceSystem::has_tails() const {
  return std::any_of(equations_.begin(), equations_.end(), [](const Equation& e) { return !e.tail.is_zero(); });
}

namespace {

std::vector<std::vector<AdmissibleCoweight>> collect_coweights(const SpliceDiagram& d,
                                                               const std::vector<AdmissibleCoweight>& overrides) {
  std::vector<std::vector<AdmissibleCoweight>> out(d.num_nodes());
  for (int j = 0; j < d.num_nodes(); ++j) {
    const VertexId v = d.node_id(j);
    for (const auto& inc : d.incident(v)) {
      auto o = std::find_if(overrides.begin(), overrides.end(),
                            [&](const AdmissibleCoweight& a) { return a.node == v && a.edge == inc.edge; });
      if (o != overrides.end()) {
        if (!is_admissible_coweight(d, *o)) {
          throw Error(ErrorCode::InvalidArgument, "co-weight override at '" + d.label(v) + "' is not admissible");
        }
        out[j].push_back(*o);
        continue;
      }
      auto a = semigroup_decompose(d, v, inc.edge);
      if (!a) {
        throw Error(ErrorCode::ConditionViolation, "semigroup condition fails at '" + d.label(v) + "' toward '" +
                                                       d.label(inc.neighbor) + "'");
      }
      out[j].push_back(std::move(*a));
    }
  }
  return out;
}

void check_shapes(const SpliceDiagram& d, const std::vector<CoefficientMatrix>& coeffs, const TailMap& tails) {
  if (static_cast<int>(coeffs.size()) != d.num_nodes()) {
    throw Error(ErrorCode::ShapeMismatch, "expected one coefficient matrix per node");
  }
  for (int j = 0; j < d.num_nodes(); ++j) {
    const VertexId v = d.node_id(j);
    const int delta = d.valency(v);
    if (static_cast<int>(coeffs[j].rows.size()) != delta) {
      throw Error(ErrorCode::ShapeMismatch, "coefficient matrix of '" + d.label(v) + "' needs " +
                                                std::to_string(delta) + " rows");
    }
    for (const auto& row : coeffs[j].rows) {
      if (static_cast<int>(row.size()) != delta - 2) {
        throw Error(ErrorCode::ShapeMismatch, "coefficient matrix of '" + d.label(v) + "' needs " +
                                                  std::to_string(delta - 2) + " columns");
      }
    }
  }
  for (const auto& [key, poly] : tails) {
    const auto [v, i] = key;
    if (!d.is_node(v) || i < 1 || i > d.valency(v) - 2) {
      throw Error(ErrorCode::ShapeMismatch, "tail attached to a non-existent equation");
    }
    if (!poly.is_zero() && poly.num_vars() != d.num_leaves()) {
      throw Error(ErrorCode::ShapeMismatch, "tail in the wrong number of variables");
    }
  }
}

}  // namespace

SpliceSystem build_system_unchecked(const SpliceDiagram& d, const std::vector<CoefficientMatrix>& coeffs,
                                    const TailMap& tails, const std::vector<AdmissibleCoweight>& overrides) {
  d.require_valid();
  check_shapes(d, coeffs, tails);
  std::vector<CoefficientMatrix> cs = coeffs;
  for (int j = 0; j < d.num_nodes(); ++j) cs[j].node = d.node_id(j);
  return SpliceSystem(d, collect_coweights(d, overrides), std::move(cs), tails);
}

SpliceSystem build_system(const SpliceDiagram& d, const std::vector<CoefficientMatrix>& coeffs, const TailMap& tails,
                          const std::vector<AdmissibleCoweight>& overrides) {
  d.require_valid();
  const ConditionReport rep = check_conditions(d);
  if (!rep.edge_determinant) throw Error(ErrorCode::ConditionViolation, "edge determinant condition fails");
  if (!rep.semigroup) throw Error(ErrorCode::ConditionViolation, "semigroup condition fails");
  check_shapes(d, coeffs, tails);
  for (int j = 0; j < d.num_nodes(); ++j) {
    if (!check_hamm(coeffs[j])) {
      throw Error(ErrorCode::HammViolation, "a maximal minor at '" + d.label(d.node_id(j)) + "' vanishes");
    }
  }
  for (const auto& [key, poly] : tails) {
    if (!validate_tail(d, key.first, poly)) {
      throw Error(ErrorCode::TailViolation, "tail of equation " + std::to_string(key.second) + " at '" +
                                                d.label(key.first) + "' has a term of too small weight");
    }
  }
  return build_system_unchecked(d, coeffs, tails, overrides);
}

SpliceSystem build_default_system(const SpliceDiagram& d) {
  std::vector<CoefficientMatrix> cs;
  for (int j = 0; j < d.num_nodes(); ++j) cs.push_back(default_coefficients(d, d.node_id(j)));
  return build_system(d, cs);
}

WeightVector node_weight(const SpliceDiagram& d, VertexId v) {
  WeightVector w;
  for (const auto& x : node_weight_vector(d, v).entries) w.emplace_back(x);
  return w;
}

bool validate_tail(const SpliceDiagram& d, VertexId v, const Polynomial& tail) {
  if (!d.is_node(v)) throw Error(ErrorCode::InvalidArgument, "'" + d.label(v) + "' is not a node");
  for (const auto& t : tail.terms()) {
    for (int j = 0; j < d.num_nodes(); ++j) {
      const VertexId u = d.node_id(j);
      const BigInt value = pair(node_weight_vector(d, u).entries, t.exponent);
      if (value <= d.linking().link(u, v)) return false;
    }
  }
  return true;
}

Polynomial predicted_initial_form(const SpliceSystem& s, VertexId v, int index, VertexId u) {
  const auto eqs = s.equations_at(v);
  if (index < 1 || index > static_cast<int>(eqs.size())) {
    throw Error(ErrorCode::InvalidArgument, "no equation " + std::to_string(index) + " at this node");
  }
  const Polynomial& f = eqs[index - 1]->minimal;
  if (u == v) return f;
  const SpliceDiagram& d = s.diagram();
  if (!d.is_node(u)) throw Error(ErrorCode::InvalidArgument, "'" + d.label(u) + "' is not a node");
  const ExponentVector drop = exponent_of(s.coweight(v, d.edge_toward(v, u)));
  return f - Polynomial::monomial(drop, f.coeff(drop));
}

}  // namespace splice
