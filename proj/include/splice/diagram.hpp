#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "splice/arith.hpp"

namespace splice {

/// Vertex ids: leaves occupy 0..n-1 in declaration order (this order fixes the
/// coordinates of every exponent and weight vector), nodes follow at n..n+p-1.
using VertexId = int;

/// Input form of an edge. A weight must be given exactly at the node endpoints.
struct EdgeSpec {
  std::string a;
  std::string b;
  std::optional<std::int64_t> wa;
  std::optional<std::int64_t> wb;
};

struct Edge {
  VertexId a = -1;
  VertexId b = -1;
  std::int64_t wa = 0;  // 0 when a is a leaf or the weight is missing
  std::int64_t wb = 0;
};

struct Incidence {
  VertexId neighbor;
  int edge;
  std::int64_t weight;  // d_{v,e} at this end; 0 at leaves
};

enum class ViolationKind {
  NotATree,
  NoValencyTwo,
  NodeValency,
  LeafValency,
  AtLeastOneNode,
  MissingWeight,
  UnexpectedWeight,
  NonPositiveWeight,
};

std::string to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string detail;
};

class LinkingTable;

/// A weighted tree with positive integer weights on the node ends of its edges.
///
/// Construction only checks that labels resolve; structural problems are
/// reported by validate(). Everything weight-derived (linking numbers,
/// geodesics) is precomputed once the diagram is valid, so the object is
/// immutable and safe to share between threads.
class SpliceDiagram {
 public:
  SpliceDiagram(std::vector<std::string> leaves, std::vector<std::string> nodes,
                const std::vector<EdgeSpec>& edges);

  int num_leaves() const { return static_cast<int>(leaves_.size()); }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_vertices() const { return num_leaves() + num_nodes(); }
  bool is_leaf(VertexId v) const { return v >= 0 && v < num_leaves(); }
  bool is_node(VertexId v) const { return v >= num_leaves() && v < num_vertices(); }
  VertexId node_id(int j) const { return num_leaves() + j; }

  const std::vector<std::string>& leaf_labels() const { return leaves_; }
  const std::vector<std::string>& node_labels() const { return nodes_; }
  const std::string& label(VertexId v) const;
  std::optional<VertexId> find(const std::string& label) const;
  /// Throws UnknownVertex.
  VertexId vertex(const std::string& label) const;

  const std::vector<Edge>& edges() const { return edges_; }
  /// Incident edges of v in edge declaration order ("adjacency order").
  std::span<const Incidence> incident(VertexId v) const { return adjacency_[v]; }
  int valency(VertexId v) const { return static_cast<int>(adjacency_[v].size()); }
  /// Position of edge e in the adjacency list of v, or -1.
  int incidence_index(VertexId v, int edge) const;
  std::optional<int> edge_between(VertexId u, VertexId v) const;
  VertexId other_end(int edge, VertexId v) const;

  /// d_{v,e}; throws when v is not a node endpoint of e.
  std::int64_t weight(VertexId node, int edge) const;
  /// d_v, the product of the weights around a node (1 for leaves).
  BigInt total_weight(VertexId v) const;

  bool valid() const { return violations_.empty(); }
  const std::vector<Violation>& violations() const { return violations_; }
  /// Throws InvalidDiagram listing the violations.
  void require_valid() const;

  const LinkingTable& linking() const;
  /// Edge at u on the geodesic from u to v (u != v). Requires a valid diagram.
  int edge_toward(VertexId u, VertexId v) const;

 private:
  std::vector<std::string> leaves_;
  std::vector<std::string> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Incidence>> adjacency_;
  std::vector<Violation> violations_;
  std::vector<std::vector<int>> next_edge_;
  std::shared_ptr<const LinkingTable> linking_;
};

/// Structural check: one record per failed invariant, empty when valid.
std::vector<Violation> validate(const SpliceDiagram& diagram);

/// Linking numbers l_{uv} for all vertex pairs and reduced linking numbers
/// l'_{vu} for nodes v.
class LinkingTable {
 public:
  explicit LinkingTable(const SpliceDiagram& diagram, const std::vector<std::vector<int>>& next_edge);

  const BigInt& link(VertexId u, VertexId v) const { return link_[u][v]; }
  /// Requires v to be a node. l'_{vv} = 1.
  const BigInt& reduced(VertexId v, VertexId u) const;

 private:
  int num_leaves_;
  std::vector<std::vector<BigInt>> link_;
  std::vector<std::vector<BigInt>> reduced_;
};

BigInt linking_number(const SpliceDiagram& d, VertexId u, VertexId v);
BigInt linking_number(const SpliceDiagram& d, const std::string& u, const std::string& v);

/// d_{u,v} d_{v,u} - l_{uv} for an edge joining two nodes. Throws EdgeNotInternal.
BigInt edge_determinant(const SpliceDiagram& d, int edge);

/// Leaves lambda whose geodesic to v passes through e (the set Delta(v,e)).
std::vector<VertexId> leaves_beyond(const SpliceDiagram& d, VertexId v, int edge);

struct AdmissibleCoweight {
  VertexId node = -1;
  int edge = -1;
  std::vector<std::int64_t> coeffs;  // length n, zero outside Delta(node, edge)
};

/// Lexicographically smallest non-negative solution of
/// d_{v,e} = sum coeffs(lambda) l'_{v lambda} over lambda in Delta(v,e).
std::optional<AdmissibleCoweight> semigroup_decompose(const SpliceDiagram& d, VertexId v, int edge);

/// True iff coeffs is supported on Delta(v,e) and pairs with the reduced
/// linking numbers to d_{v,e}.
bool is_admissible_coweight(const SpliceDiagram& d, const AdmissibleCoweight& a);

struct ConditionReport {
  bool edge_determinant = false;
  bool semigroup = false;
  bool coprime = false;
  bool all() const { return edge_determinant && semigroup && coprime; }
};

ConditionReport check_conditions(const SpliceDiagram& d);
bool is_coprime(const SpliceDiagram& d);

/// Entry lambda is l_{v lambda}.
struct NodeWeightVector {
  VertexId node = -1;
  std::vector<BigInt> entries;
};

NodeWeightVector node_weight_vector(const SpliceDiagram& d, VertexId v);

std::vector<VertexId> geodesic(const SpliceDiagram& d, VertexId u, VertexId v);

/// One vertex set per incident edge of v, in adjacency order.
std::vector<std::vector<VertexId>> branches(const SpliceDiagram& d, VertexId v);

/// A subtree is given by its (sorted) vertex set.
using Subtree = std::vector<VertexId>;

/// Smallest subtree containing the given vertices.
Subtree convex_hull(const SpliceDiagram& d, const std::vector<VertexId>& vertices);
bool is_subtree(const SpliceDiagram& d, const Subtree& t);
/// Connected, and every vertex with at least two neighbours inside t has its
/// whole star in t.
bool is_star_full(const SpliceDiagram& d, const Subtree& t);
std::vector<VertexId> subtree_leaves(const SpliceDiagram& d, const Subtree& t);
std::vector<VertexId> subtree_nodes(const SpliceDiagram& d, const Subtree& t);
/// Hull of v and the leaves of t not adjacent to v. Throws NotAnEndNode.
Subtree prune_end_node(const SpliceDiagram& d, const Subtree& t, VertexId v);

/// Deterministic random diagram passing the edge determinant and semigroup
/// conditions (and coprimality on request). Throws GenerationExhausted.
SpliceDiagram random_diagram(int n_leaves, int n_nodes, std::uint64_t seed, bool require_coprime);

/// Label-preserving isomorphism test (leaf and node labels may differ for
/// nodes; leaves are matched by label, weights must agree).
bool isomorphic(const SpliceDiagram& a, const SpliceDiagram& b);

}  // namespace splice
