#include "splice/diagram.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <set>

#include "splice/error.hpp"

namespace splice {

std::vector<Violation> structural_violations(const SpliceDiagram& d);

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::NotATree: return "NotATree";
    case ViolationKind::NoValencyTwo: return "NoValencyTwo";
    case ViolationKind::NodeValency: return "NodeValency";
    case ViolationKind::LeafValency: return "LeafValency";
    case ViolationKind::AtLeastOneNode: return "AtLeastOneNode";
    case ViolationKind::MissingWeight: return "MissingWeight";
    case ViolationKind::UnexpectedWeight: return "UnexpectedWeight";
    case ViolationKind::NonPositiveWeight: return "NonPositiveWeight";
  }
  return "Unknown";
}

SpliceDiagram::SpliceDiagram(std::vector<std::string> leaves, std::vector<std::string> nodes,
                             const std::vector<EdgeSpec>& edges)
    : leaves_(std::move(leaves)), nodes_(std::move(nodes)) {
  std::map<std::string, VertexId> index;
  for (VertexId v = 0; v < num_vertices(); ++v) {
    const std::string& l = label(v);
    if (!index.emplace(l, v).second) throw Error(ErrorCode::Parse, "duplicate vertex label '" + l + "'");
  }
  adjacency_.resize(num_vertices());
  for (const auto& spec : edges) {
    auto ia = index.find(spec.a);
    auto ib = index.find(spec.b);
    if (ia == index.end()) throw Error(ErrorCode::Parse, "edge endpoint '" + spec.a + "' is not declared");
    if (ib == index.end()) throw Error(ErrorCode::Parse, "edge endpoint '" + spec.b + "' is not declared");
    Edge e{ia->second, ib->second, spec.wa.value_or(0), spec.wb.value_or(0)};
    const int id = static_cast<int>(edges_.size());
    edges_.push_back(e);
    adjacency_[e.a].push_back({e.b, id, e.wa});
    if (e.b != e.a) adjacency_[e.b].push_back({e.a, id, e.wb});
  }

  violations_ = structural_violations(*this);
  // Weights at leaf ends and explicit zeros are only visible in the EdgeSpec
  // optionals, so they are recorded here.
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges_[i];
    if ((is_leaf(e.a) && edges[i].wa) || (is_leaf(e.b) && edges[i].wb)) {
      violations_.push_back({ViolationKind::UnexpectedWeight,
                             "edge " + label(e.a) + "-" + label(e.b) + " carries a weight at a leaf end"});
    }
    // an explicit 0 is a bad weight, not a missing one
    const std::pair<VertexId, std::optional<std::int64_t>> ends[2] = {{e.a, edges[i].wa}, {e.b, edges[i].wb}};
    for (const auto& [v, w] : ends) {
      if (!is_node(v) || !w || *w != 0) continue;
      const std::string where = "edge " + label(e.a) + "-" + label(e.b) + " at '" + label(v) + "'";
      for (auto& viol : violations_) {
        if (viol.kind == ViolationKind::MissingWeight && viol.detail == where) {
          viol.kind = ViolationKind::NonPositiveWeight;
          viol.detail += " has weight 0";
          break;
        }
      }
    }
  }
  if (!valid()) return;

  // next_edge_[u][v]: first edge on the geodesic u -> v, by BFS from every vertex.
  const int nv = num_vertices();
  next_edge_.assign(nv, std::vector<int>(nv, -1));
  for (VertexId src = 0; src < nv; ++src) {
    std::vector<int> first(nv, -1);
    std::vector<char> seen(nv, 0);
    std::queue<VertexId> q;
    q.push(src);
    seen[src] = 1;
    while (!q.empty()) {
      VertexId x = q.front();
      q.pop();
      for (const auto& inc : adjacency_[x]) {
        if (seen[inc.neighbor]) continue;
        seen[inc.neighbor] = 1;
        first[inc.neighbor] = (x == src) ? inc.edge : first[x];
        q.push(inc.neighbor);
      }
    }
    next_edge_[src] = std::move(first);
  }
  linking_ = std::make_shared<const LinkingTable>(*this, next_edge_);
}

const std::string& SpliceDiagram::label(VertexId v) const {
  if (is_leaf(v)) return leaves_[v];
  if (is_node(v)) return nodes_[v - num_leaves()];
  throw Error(ErrorCode::UnknownVertex, "vertex id " + std::to_string(v));
}

std::optional<VertexId> SpliceDiagram::find(const std::string& l) const {
  for (VertexId v = 0; v < num_vertices(); ++v) {
    if (label(v) == l) return v;
  }
  return std::nullopt;
}

VertexId SpliceDiagram::vertex(const std::string& l) const {
  auto v = find(l);
  if (!v) throw Error(ErrorCode::UnknownVertex, "'" + l + "'");
  return *v;
}

int SpliceDiagram::incidence_index(VertexId v, int edge) const {
  const auto& adj = adjacency_[v];
  for (std::size_t i = 0; i < adj.size(); ++i) {
    if (adj[i].edge == edge) return static_cast<int>(i);
  }
  return -1;
}

std::optional<int> SpliceDiagram::edge_between(VertexId u, VertexId v) const {
  for (const auto& inc : adjacency_[u]) {
    if (inc.neighbor == v) return inc.edge;
  }
  return std::nullopt;
}

VertexId SpliceDiagram::other_end(int edge, VertexId v) const {
  const Edge& e = edges_.at(edge);
  if (e.a == v) return e.b;
  if (e.b == v) return e.a;
  throw Error(ErrorCode::InvalidArgument, "vertex '" + label(v) + "' is not an endpoint of the edge");
}

std::int64_t SpliceDiagram::weight(VertexId node, int edge) const {
  const Edge& e = edges_.at(edge);
  if (!is_node(node) || (e.a != node && e.b != node)) {
    throw Error(ErrorCode::InvalidArgument, "no weight of edge at '" + label(node) + "'");
  }
  return e.a == node ? e.wa : e.wb;
}

BigInt SpliceDiagram::total_weight(VertexId v) const {
  BigInt d = 1;
  if (!is_node(v)) return d;
  for (const auto& inc : adjacency_[v]) d *= static_cast<long>(inc.weight);
  return d;
}

void SpliceDiagram::require_valid() const {
  if (valid()) return;
  std::string msg;
  for (const auto& v : violations_) {
    if (!msg.empty()) msg += "; ";
    msg += to_string(v.kind) + " (" + v.detail + ")";
  }
  throw Error(ErrorCode::InvalidDiagram, msg);
}

const LinkingTable& SpliceDiagram::linking() const {
  require_valid();
  return *linking_;
}

int SpliceDiagram::edge_toward(VertexId u, VertexId v) const {
  require_valid();
  if (u == v) throw Error(ErrorCode::InvalidArgument, "edge_toward needs distinct vertices");
  return next_edge_[u][v];
}

std::vector<Violation> validate(const SpliceDiagram& d) { return d.violations(); }

std::vector<Violation> structural_violations(const SpliceDiagram& d) {
  std::vector<Violation> out;
  const int nv = d.num_vertices();
  const int ne = static_cast<int>(d.edges().size());

  bool tree = ne == nv - 1;
  for (const auto& e : d.edges()) {
    if (e.a == e.b) tree = false;
  }
  if (nv > 0) {
    // connectivity; with |E| = |V| - 1 this also rules out cycles
    std::vector<char> seen(nv, 0);
    std::vector<VertexId> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      VertexId x = stack.back();
      stack.pop_back();
      for (const auto& inc : d.incident(x)) {
        if (!seen[inc.neighbor]) {
          seen[inc.neighbor] = 1;
          ++count;
          stack.push_back(inc.neighbor);
        }
      }
    }
    if (count != nv) tree = false;
  } else {
    tree = false;
  }
  if (!tree) {
    out.push_back({ViolationKind::NotATree, std::to_string(nv) + " vertices, " + std::to_string(ne) +
                                                " edges; the graph must be a connected acyclic tree"});
  }

  for (VertexId v = 0; v < nv; ++v) {
    const int val = d.valency(v);
    if (val == 2) {
      out.push_back({ViolationKind::NoValencyTwo, "vertex '" + d.label(v) + "' has valency 2"});
    } else if (d.is_node(v) && val < 3) {
      out.push_back({ViolationKind::NodeValency, "node '" + d.label(v) + "' has valency " + std::to_string(val)});
    } else if (d.is_leaf(v) && val != 1) {
      out.push_back({ViolationKind::LeafValency, "leaf '" + d.label(v) + "' has valency " + std::to_string(val)});
    }
  }

  if (d.num_nodes() == 0) out.push_back({ViolationKind::AtLeastOneNode, "the diagram has no node"});

  for (const auto& e : d.edges()) {
    const std::pair<VertexId, std::int64_t> ends[2] = {{e.a, e.wa}, {e.b, e.wb}};
    for (const auto& [v, w] : ends) {
      if (!d.is_node(v)) continue;
      const std::string where = "edge " + d.label(e.a) + "-" + d.label(e.b) + " at '" + d.label(v) + "'";
      if (w == 0) {
        out.push_back({ViolationKind::MissingWeight, where});
      } else if (w < 0) {
        out.push_back({ViolationKind::NonPositiveWeight, where + " has weight " + std::to_string(w)});
      }
    }
  }
  return out;
}

LinkingTable::LinkingTable(const SpliceDiagram& d, const std::vector<std::vector<int>>& next_edge)
    : num_leaves_(d.num_leaves()) {
  const int nv = d.num_vertices();
  link_.assign(nv, std::vector<BigInt>(nv));

  // Product of the weights at x other than those on edges in `skip`.
  auto others = [&](VertexId x, int skip1, int skip2) {
    BigInt p = 1;
    if (!d.is_node(x)) return p;
    for (const auto& inc : d.incident(x)) {
      if (inc.edge == skip1 || inc.edge == skip2) continue;
      p *= static_cast<long>(inc.weight);
    }
    return p;
  };

  for (VertexId src = 0; src < nv; ++src) {
    link_[src][src] = d.total_weight(src);
    // acc[x]: product of contributions of the path vertices strictly before x
    std::vector<BigInt> acc(nv);
    std::vector<int> in_edge(nv, -1);
    std::vector<VertexId> stack{src};
    std::vector<char> seen(nv, 0);
    seen[src] = 1;
    acc[src] = 1;
    while (!stack.empty()) {
      VertexId x = stack.back();
      stack.pop_back();
      for (const auto& inc : d.incident(x)) {
        VertexId y = inc.neighbor;
        if (seen[y]) continue;
        seen[y] = 1;
        in_edge[y] = inc.edge;
        acc[y] = acc[x] * others(x, in_edge[x], inc.edge);
        link_[src][y] = acc[y] * others(y, inc.edge, -1);
        stack.push_back(y);
      }
    }
  }

  reduced_.assign(d.num_nodes(), std::vector<BigInt>(nv));
  for (int j = 0; j < d.num_nodes(); ++j) {
    const VertexId v = d.node_id(j);
    const BigInt dv = d.total_weight(v);
    for (VertexId u = 0; u < nv; ++u) {
      if (u == v) {
        reduced_[j][u] = 1;
        continue;
      }
      // l'_{vu} omits the weights around v, except the one toward u which is on the path
      const std::int64_t toward = d.weight(v, next_edge[v][u]);
      reduced_[j][u] = link_[v][u] * static_cast<long>(toward) / dv;
    }
  }
}

const BigInt& LinkingTable::reduced(VertexId v, VertexId u) const {
  if (v < num_leaves_) throw Error(ErrorCode::InvalidArgument, "reduced linking numbers need a node");
  return reduced_[v - num_leaves_][u];
}

BigInt linking_number(const SpliceDiagram& d, VertexId u, VertexId v) {
  if (u < 0 || u >= d.num_vertices() || v < 0 || v >= d.num_vertices()) {
    throw Error(ErrorCode::UnknownVertex, "vertex id out of range");
  }
  return d.linking().link(u, v);
}

BigInt linking_number(const SpliceDiagram& d, const std::string& u, const std::string& v) {
  return linking_number(d, d.vertex(u), d.vertex(v));
}

BigInt edge_determinant(const SpliceDiagram& d, int edge) {
  d.require_valid();
  const Edge& e = d.edges().at(edge);
  if (!d.is_node(e.a) || !d.is_node(e.b)) {
    throw Error(ErrorCode::EdgeNotInternal, "edge " + d.label(e.a) + "-" + d.label(e.b));
  }
  return BigInt(static_cast<long>(e.wa)) * static_cast<long>(e.wb) - d.linking().link(e.a, e.b);
}

std::vector<VertexId> leaves_beyond(const SpliceDiagram& d, VertexId v, int edge) {
  std::vector<VertexId> out;
  for (VertexId l = 0; l < d.num_leaves(); ++l) {
    if (l != v && d.edge_toward(v, l) == edge) out.push_back(l);
  }
  return out;
}

namespace {

// Smallest representable value in each residue class modulo the smallest
// generator (round-robin shortest paths). t is representable iff
// t >= table[t mod a].
class Representable {
 public:
  explicit Representable(std::vector<std::int64_t> gens) {
    std::erase(gens, 0);
    if (gens.empty()) return;
    modulus_ = *std::min_element(gens.begin(), gens.end());
    dist_.assign(static_cast<std::size_t>(modulus_), kInf);
    dist_[0] = 0;
    const std::int64_t a = modulus_;
    for (std::int64_t g : gens) {
      if (g == a) continue;
      const std::int64_t step = g % a;
      const std::int64_t cycles = std::gcd(a, step);
      for (std::int64_t p = 0; p < cycles; ++p) {
        // start from the cycle minimum, then sweep the cycle twice
        std::int64_t start = p;
        for (std::int64_t r = (p + step) % a; r != p; r = (r + step) % a) {
          if (dist_[r] < dist_[start]) start = r;
        }
        if (dist_[start] == kInf) continue;
        std::int64_t r = start;
        const std::int64_t len = a / cycles;
        for (std::int64_t i = 0; i < 2 * len; ++i) {
          const std::int64_t next = (r + step) % a;
          if (dist_[r] != kInf && dist_[r] + g < dist_[next]) dist_[next] = dist_[r] + g;
          r = next;
        }
      }
    }
  }

  bool contains(std::int64_t t) const {
    if (t < 0) return false;
    if (modulus_ == 0) return t == 0;
    return dist_[static_cast<std::size_t>(t % modulus_)] <= t;
  }

 private:
  static constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();
  std::int64_t modulus_ = 0;
  std::vector<std::int64_t> dist_;
};

}  // namespace

std::optional<AdmissibleCoweight> semigroup_decompose(const SpliceDiagram& d, VertexId v, int edge) {
  d.require_valid();
  if (!d.is_node(v)) throw Error(ErrorCode::InvalidArgument, "'" + d.label(v) + "' is not a node");
  const std::int64_t target = d.weight(v, edge);
  const std::vector<VertexId> support = leaves_beyond(d, v, edge);

  // Generators larger than the target can only take coefficient zero.
  std::vector<std::int64_t> gens;
  for (VertexId l : support) {
    const BigInt& g = d.linking().reduced(v, l);
    gens.push_back(g <= target ? to_int64(g) : 0);
  }
  const std::size_t k = gens.size();

  // suffix[i] decides representability by gens[i..k)
  std::vector<Representable> suffix;
  suffix.reserve(k + 1);
  for (std::size_t i = 0; i <= k; ++i) suffix.emplace_back(std::vector<std::int64_t>(gens.begin() + i, gens.end()));
  if (!suffix[0].contains(target)) return std::nullopt;

  AdmissibleCoweight out{v, edge, std::vector<std::int64_t>(d.num_leaves(), 0)};
  std::int64_t rest = target;
  for (std::size_t i = 0; i < k; ++i) {
    if (gens[i] == 0) continue;
    std::int64_t c = 0;
    while (!suffix[i + 1].contains(rest - c * gens[i])) ++c;
    out.coeffs[support[i]] = c;
    rest -= c * gens[i];
  }
  return out;
}

bool is_admissible_coweight(const SpliceDiagram& d, const AdmissibleCoweight& a) {
  if (!d.is_node(a.node) || d.incidence_index(a.node, a.edge) < 0) return false;
  if (static_cast<int>(a.coeffs.size()) != d.num_leaves()) return false;
  BigInt sum = 0;
  for (VertexId l = 0; l < d.num_leaves(); ++l) {
    if (a.coeffs[l] < 0) return false;
    if (a.coeffs[l] == 0) continue;
    if (d.edge_toward(a.node, l) != a.edge) return false;
    sum += d.linking().reduced(a.node, l) * static_cast<long>(a.coeffs[l]);
  }
  return sum == static_cast<long>(d.weight(a.node, a.edge));
}

bool is_coprime(const SpliceDiagram& d) {
  d.require_valid();
  for (int j = 0; j < d.num_nodes(); ++j) {
    auto inc = d.incident(d.node_id(j));
    for (std::size_t a = 0; a < inc.size(); ++a) {
      for (std::size_t b = a + 1; b < inc.size(); ++b) {
        if (std::gcd(inc[a].weight, inc[b].weight) != 1) return false;
      }
    }
  }
  return true;
}

ConditionReport check_conditions(const SpliceDiagram& d) {
  d.require_valid();
  ConditionReport r;
  r.edge_determinant = true;
  for (int e = 0; e < static_cast<int>(d.edges().size()); ++e) {
    const Edge& edge = d.edges()[e];
    if (d.is_node(edge.a) && d.is_node(edge.b) && edge_determinant(d, e) <= 0) r.edge_determinant = false;
  }
  r.semigroup = true;
  for (int j = 0; j < d.num_nodes() && r.semigroup; ++j) {
    const VertexId v = d.node_id(j);
    for (const auto& inc : d.incident(v)) {
      if (!semigroup_decompose(d, v, inc.edge)) {
        r.semigroup = false;
        break;
      }
    }
  }
  r.coprime = is_coprime(d);
  return r;
}

NodeWeightVector node_weight_vector(const SpliceDiagram& d, VertexId v) {
  if (!d.is_node(v)) throw Error(ErrorCode::InvalidArgument, "'" + d.label(v) + "' is not a node");
  NodeWeightVector out{v, {}};
  out.entries.reserve(d.num_leaves());
  for (VertexId l = 0; l < d.num_leaves(); ++l) out.entries.push_back(d.linking().link(v, l));
  return out;
}

std::vector<VertexId> geodesic(const SpliceDiagram& d, VertexId u, VertexId v) {
  d.require_valid();
  std::vector<VertexId> path{u};
  VertexId x = u;
  while (x != v) {
    x = d.other_end(d.edge_toward(x, v), x);
    path.push_back(x);
  }
  return path;
}

std::vector<std::vector<VertexId>> branches(const SpliceDiagram& d, VertexId v) {
  d.require_valid();
  std::vector<std::vector<VertexId>> out;
  for (const auto& inc : d.incident(v)) {
    std::vector<VertexId> comp;
    for (VertexId x = 0; x < d.num_vertices(); ++x) {
      if (x != v && d.edge_toward(v, x) == inc.edge) comp.push_back(x);
    }
    out.push_back(std::move(comp));
  }
  return out;
}

Subtree convex_hull(const SpliceDiagram& d, const std::vector<VertexId>& vertices) {
  std::set<VertexId> hull;
  if (vertices.empty()) return {};
  for (VertexId x : vertices) {
    for (VertexId y : geodesic(d, vertices.front(), x)) hull.insert(y);
  }
  return {hull.begin(), hull.end()};
}

namespace {

int inner_degree(const SpliceDiagram& d, const std::set<VertexId>& t, VertexId v) {
  int deg = 0;
  for (const auto& inc : d.incident(v)) deg += t.count(inc.neighbor) ? 1 : 0;
  return deg;
}

}  // namespace

bool is_subtree(const SpliceDiagram& d, const Subtree& t) {
  if (t.empty()) return false;
  std::set<VertexId> s(t.begin(), t.end());
  // connected induced subgraph of a tree is a subtree
  std::set<VertexId> seen{*s.begin()};
  std::vector<VertexId> stack{*s.begin()};
  while (!stack.empty()) {
    VertexId x = stack.back();
    stack.pop_back();
    for (const auto& inc : d.incident(x)) {
      if (s.count(inc.neighbor) && seen.insert(inc.neighbor).second) stack.push_back(inc.neighbor);
    }
  }
  return seen.size() == s.size();
}

bool is_star_full(const SpliceDiagram& d, const Subtree& t) {
  if (!is_subtree(d, t)) return false;
  std::set<VertexId> s(t.begin(), t.end());
  for (VertexId v : s) {
    const int deg = inner_degree(d, s, v);
    if (deg >= 2 && deg != d.valency(v)) return false;
  }
  return true;
}

std::vector<VertexId> subtree_leaves(const SpliceDiagram& d, const Subtree& t) {
  std::set<VertexId> s(t.begin(), t.end());
  std::vector<VertexId> out;
  for (VertexId v : s) {
    if (s.size() == 1 || inner_degree(d, s, v) == 1) out.push_back(v);
  }
  return out;
}

std::vector<VertexId> subtree_nodes(const SpliceDiagram& d, const Subtree& t) {
  std::set<VertexId> s(t.begin(), t.end());
  std::vector<VertexId> out;
  for (VertexId v : s) {
    if (inner_degree(d, s, v) >= 3) out.push_back(v);
  }
  return out;
}

Subtree prune_end_node(const SpliceDiagram& d, const Subtree& t, VertexId v) {
  if (!is_star_full(d, t)) throw Error(ErrorCode::InvalidArgument, "subtree is not star-full");
  std::set<VertexId> s(t.begin(), t.end());
  const auto nodes = subtree_nodes(d, t);
  if (std::find(nodes.begin(), nodes.end(), v) == nodes.end()) {
    throw Error(ErrorCode::NotAnEndNode, "'" + d.label(v) + "' is not a node of the subtree");
  }
  int node_neighbours = 0;
  for (const auto& inc : d.incident(v)) {
    if (std::find(nodes.begin(), nodes.end(), inc.neighbor) != nodes.end()) ++node_neighbours;
  }
  if (node_neighbours != 1) {
    throw Error(ErrorCode::NotAnEndNode, "'" + d.label(v) + "' is adjacent to " + std::to_string(node_neighbours) +
                                             " nodes of the subtree");
  }
  std::vector<VertexId> keep{v};
  for (VertexId l : subtree_leaves(d, t)) {
    if (!d.edge_between(v, l)) keep.push_back(l);
  }
  return convex_hull(d, keep);
}

namespace {

// Each node is determined by how its branches split the leaves.
using NodeSignature = std::vector<std::pair<std::vector<std::string>, std::int64_t>>;

std::multiset<NodeSignature> signatures(const SpliceDiagram& d) {
  std::multiset<NodeSignature> out;
  for (int j = 0; j < d.num_nodes(); ++j) {
    const VertexId v = d.node_id(j);
    NodeSignature sig;
    const auto br = branches(d, v);
    const auto inc = d.incident(v);
    for (std::size_t i = 0; i < br.size(); ++i) {
      std::vector<std::string> leaves;
      for (VertexId x : br[i]) {
        if (d.is_leaf(x)) leaves.push_back(d.label(x));
      }
      std::sort(leaves.begin(), leaves.end());
      sig.emplace_back(std::move(leaves), inc[i].weight);
    }
    std::sort(sig.begin(), sig.end());
    out.insert(std::move(sig));
  }
  return out;
}

}  // namespace

bool isomorphic(const SpliceDiagram& a, const SpliceDiagram& b) {
  if (!a.valid() || !b.valid()) return false;
  if (a.num_nodes() != b.num_nodes()) return false;
  std::vector<std::string> la = a.leaf_labels(), lb = b.leaf_labels();
  std::sort(la.begin(), la.end());
  std::sort(lb.begin(), lb.end());
  if (la != lb) return false;
  return signatures(a) == signatures(b);
}

}  // namespace splice
