#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "splice/diagram.hpp"
#include "splice/linalg.hpp"
#include "splice/polynomial.hpp"

namespace splice {

/// delta_v rows (incident edges in adjacency order) by delta_v - 2 columns
/// (equations at the node).
struct CoefficientMatrix {
  VertexId node = -1;
  QMatrix rows;
};

/// Vandermonde c_{j,i} = j^(i-1).
CoefficientMatrix default_coefficients(const SpliceDiagram& d, VertexId v);

/// Small random non-zero integers, redrawn until every maximal minor is non-zero.
CoefficientMatrix random_coefficients(const SpliceDiagram& d, VertexId v, std::uint64_t seed);

/// True iff all maximal minors are non-zero. Throws ShapeMismatch.
bool check_hamm(const CoefficientMatrix& c);

struct Equation {
  VertexId node = -1;
  int index = 1;  // 1-based position among the equations of the node
  Polynomial minimal;
  Polynomial tail;

  Polynomial full() const { return minimal + tail; }
};

/// (node, 1-based index) -> tail polynomial
using TailMap = std::map<std::pair<VertexId, int>, Polynomial>;

/// A splice type system; equations ordered by node declaration order, then index.
class SpliceSystem {
 public:
  SpliceSystem(SpliceDiagram diagram, std::vector<std::vector<AdmissibleCoweight>> coweights,
               std::vector<CoefficientMatrix> coefficients, const TailMap& tails);

  const SpliceDiagram& diagram() const { return diagram_; }
  int num_vars() const { return diagram_.num_leaves(); }
  const std::vector<Equation>& equations() const { return equations_; }
  /// Co-weights of node j (j-th declared node), one per incident edge in adjacency order.
  const std::vector<AdmissibleCoweight>& coweights(int node_index) const { return coweights_[node_index]; }
  const AdmissibleCoweight& coweight(VertexId v, int edge) const;
  const CoefficientMatrix& coefficients(int node_index) const { return coefficients_[node_index]; }
  /// Equations belonging to node v.
  std::vector<const Equation*> equations_at(VertexId v) const;
  bool has_tails() const;

 private:
  SpliceDiagram diagram_;
  std::vector<std::vector<AdmissibleCoweight>> coweights_;
  std::vector<CoefficientMatrix> coefficients_;
  std::vector<Equation> equations_;
};

ExponentVector exponent_of(const AdmissibleCoweight& a);

/// Requires both diagram conditions, Hamm matrices and valid tails. Co-weights
/// default to semigroup_decompose; overrides replace individual (node, edge)
/// entries and must be admissible.
SpliceSystem build_system(const SpliceDiagram& d, const std::vector<CoefficientMatrix>& coeffs,
                          const TailMap& tails = {}, const std::vector<AdmissibleCoweight>& overrides = {});

/// Minimal system with the default Vandermonde coefficients.
SpliceSystem build_default_system(const SpliceDiagram& d);

/// Skips the Hamm and tail checks; used to build deliberately degenerate inputs.
SpliceSystem build_system_unchecked(const SpliceDiagram& d, const std::vector<CoefficientMatrix>& coeffs,
                                    const TailMap& tails = {},
                                    const std::vector<AdmissibleCoweight>& overrides = {});

/// Every exponent m satisfies w_v.m > d_v and w_u.m > l_uv for all nodes u != v.
bool validate_tail(const SpliceDiagram& d, VertexId v, const Polynomial& tail);

/// f_{v,i} when u = v, otherwise f_{v,i} without the term of the edge at v toward u.
Polynomial predicted_initial_form(const SpliceSystem& s, VertexId v, int index, VertexId u);

/// The node weight vector as rationals, ready for pairing.
WeightVector node_weight(const SpliceDiagram& d, VertexId v);

}  // namespace splice
