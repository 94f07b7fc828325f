#include "splice/recover.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <tuple>

#include "splice/error.hpp"

namespace splice {

namespace {

// The fan's link: unit rays are leaves (by coordinate), other rays nodes.
struct Link {
  std::vector<std::string> leaves;  // coordinate order
  std::vector<int> nodes;           // indices into fan.rays, fan order
  std::map<std::string, std::vector<std::string>> adjacent;
  std::map<std::string, int> ray_index;
  std::map<std::string, int> leaf_coord;
};

std::optional<int> unit_coordinate(const std::vector<BigInt>& v) {
  std::optional<int> at;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    if (v[i] != 1 || at) return std::nullopt;
    at = static_cast<int>(i);
  }
  return at;
}

Link analyze(const SpliceFan& fan) {
  Link link;
  link.leaves.assign(fan.n, "");
  for (std::size_t r = 0; r < fan.rays.size(); ++r) {
    const Ray& ray = fan.rays[r];
    if (static_cast<int>(ray.vector.size()) != fan.n) {
      throw Error(ErrorCode::ShapeMismatch, "ray '" + ray.label + "' has the wrong length");
    }
    if (!link.ray_index.emplace(ray.label, static_cast<int>(r)).second) {
      throw Error(ErrorCode::NotRealizable, "duplicate ray label '" + ray.label + "'");
    }
    if (auto c = unit_coordinate(ray.vector)) {
      if (!link.leaves[*c].empty()) throw Error(ErrorCode::NotRealizable, "two unit rays on one coordinate");
      link.leaves[*c] = ray.label;
      link.leaf_coord[ray.label] = *c;
      continue;
    }
    for (const auto& x : ray.vector) {
      if (x <= 0) throw Error(ErrorCode::NotRealizable, "node ray '" + ray.label + "' is not strictly positive");
    }
    link.nodes.push_back(static_cast<int>(r));
  }
  for (int i = 0; i < fan.n; ++i) {
    if (link.leaves[i].empty()) throw Error(ErrorCode::NotRealizable, "no unit ray on coordinate " + std::to_string(i + 1));
  }
  if (link.nodes.empty()) throw Error(ErrorCode::NotRealizable, "the fan has no node ray");

  for (const auto& c : fan.cones) {
    if (!link.ray_index.count(c.a) || !link.ray_index.count(c.b) || c.a == c.b) {
      throw Error(ErrorCode::NotRealizable, "cone " + c.a + "-" + c.b + " is malformed");
    }
    link.adjacent[c.a].push_back(c.b);
    link.adjacent[c.b].push_back(c.a);
  }
  // a tree: one fewer cone than rays, and connected
  if (fan.cones.size() + 1 != fan.rays.size()) throw Error(ErrorCode::NotRealizable, "the link of the fan is not a tree");
  std::set<std::string> seen{fan.rays[0].label};
  std::vector<std::string> stack{fan.rays[0].label};
  while (!stack.empty()) {
    const std::string x = stack.back();
    stack.pop_back();
    for (const auto& y : link.adjacent[x]) {
      if (seen.insert(y).second) stack.push_back(y);
    }
  }
  if (seen.size() != fan.rays.size()) throw Error(ErrorCode::NotRealizable, "the link of the fan is not connected");
  for (const auto& l : link.leaves) {
    if (link.adjacent[l].size() != 1) throw Error(ErrorCode::NotRealizable, "leaf ray '" + l + "' must lie on one cone");
  }
  for (int r : link.nodes) {
    const auto& label = fan.rays[r].label;
    if (link.adjacent[label].size() < 3) throw Error(ErrorCode::NotRealizable, "node ray '" + label + "' has valency < 3");
  }
  return link;
}

bool is_node(const Link& link, const std::string& label) { return !link.leaf_coord.count(label); }

using WeightMap = std::map<std::pair<std::string, std::string>, BigInt>;

// d_lambda = gcd of the other entries; the weight vector must come back.
std::vector<BigInt> star_weights(const std::vector<BigInt>& w) {
  const std::size_t n = w.size();
  if (n < 3) throw Error(ErrorCode::NotRealizable, "a star needs at least three leaves");
  std::vector<BigInt> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (w[i] <= 0) throw Error(ErrorCode::NotRealizable, "weight vector must be strictly positive");
    BigInt g = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) g = gcd(g, w[j]);
    }
    d[i] = g;
  }
  for (std::size_t i = 0; i < n; ++i) {
    BigInt prod = 1;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) prod *= d[j];
    }
    if (prod != w[i]) throw Error(ErrorCode::NotRealizable, "no star has this weight vector");
  }
  return d;
}

void solve(const SpliceFan& fan, WeightMap& weights) {
  const Link link = analyze(fan);
  if (link.nodes.size() == 1) {
    const Ray& v = fan.rays[link.nodes[0]];
    const auto d = star_weights(v.vector);
    for (int i = 0; i < fan.n; ++i) weights[{v.label, link.leaves[i]}] = d[i];
    return;
  }
  const PruneStep step = prune_step(fan);
  solve(step.pruned, weights);
  for (std::size_t i = 0; i < step.removed_leaves.size(); ++i) {
    weights[{step.end_node, step.removed_leaves[i]}] = step.leaf_weights[i];
  }
  for (const auto& y : link.adjacent.at(step.end_node)) {
    if (is_node(link, y)) weights[{step.end_node, y}] = step.d_uv;
  }
}

std::int64_t small(const BigInt& x) {
  if (!fits_int64(x)) throw Error(ErrorCode::NotRealizable, "recovered weight " + to_string(x) + " is too large");
  return to_int64(x);
}

// Equal up to the order of rays and cones (and cone orientation).
bool same_fan(const SpliceFan& a, const SpliceFan& b) {
  if (a.n != b.n || a.rays.size() != b.rays.size() || a.cones.size() != b.cones.size()) return false;
  for (const auto& r : a.rays) {
    const Ray* s = b.ray(r.label);
    if (!s || s->vector != r.vector) return false;
  }
  auto cone_set = [](const SpliceFan& f) {
    std::set<std::tuple<std::string, std::string, std::string>> out;
    for (const auto& c : f.cones) out.emplace(std::min(c.a, c.b), std::max(c.a, c.b), to_string(c.multiplicity));
    return out;
  };
  return cone_set(a) == cone_set(b);
}

}  // namespace

SpliceDiagram recover_star(const std::vector<BigInt>& w, std::vector<std::string> leaf_labels,
                           const std::string& node_label) {
  if (leaf_labels.empty()) {
    for (std::size_t i = 0; i < w.size(); ++i) leaf_labels.push_back("l" + std::to_string(i + 1));
  }
  if (leaf_labels.size() != w.size()) throw Error(ErrorCode::ShapeMismatch, "one label per entry is needed");
  const auto d = star_weights(w);
  std::vector<EdgeSpec> edges;
  for (std::size_t i = 0; i < w.size(); ++i) edges.push_back({node_label, leaf_labels[i], small(d[i]), {}});
  SpliceDiagram out(leaf_labels, {node_label}, edges);
  if (node_weight_vector(out, out.node_id(0)).entries != w) {
    throw Error(ErrorCode::NotRealizable, "reconstructed star does not reproduce the weight vector");
  }
  return out;
}

PruneStep prune_step(const SpliceFan& fan) {
  const Link link = analyze(fan);
  if (link.nodes.size() < 2) throw Error(ErrorCode::InvalidArgument, "pruning needs at least two node rays");

  std::optional<std::string> u;
  for (int r : link.nodes) {
    const auto& label = fan.rays[r].label;
    const auto& adj = link.adjacent.at(label);
    const auto node_neighbours = std::count_if(adj.begin(), adj.end(), [&](const std::string& y) { return is_node(link, y); });
    if (node_neighbours == 1 && (!u || label < *u)) u = label;
  }
  if (!u) throw Error(ErrorCode::NotRealizable, "no end node in the link");

  PruneStep step;
  step.end_node = *u;
  const auto& wu = fan.ray(*u)->vector;
  std::vector<int> removed;
  for (const auto& y : link.adjacent.at(*u)) {
    if (!is_node(link, y)) removed.push_back(link.leaf_coord.at(y));
  }
  std::sort(removed.begin(), removed.end());
  step.d_uv = 0;
  step.d_u = 1;
  for (int c : removed) {
    step.removed_leaves.push_back(link.leaves[c]);
    step.d_uv = gcd(step.d_uv, wu[c]);
    step.d_u = lcm(step.d_u, wu[c]);
  }
  for (int c : removed) step.leaf_weights.push_back(step.d_u / wu[c]);

  std::vector<int> surviving;
  for (int c = 0; c < fan.n; ++c) {
    if (!std::binary_search(removed.begin(), removed.end(), c)) surviving.push_back(c);
  }
  const int m = 1 + static_cast<int>(surviving.size());
  step.matrix.assign(fan.n, std::vector<BigInt>(m, 0));
  for (int c : removed) {
    if (wu[c] % step.d_uv != 0) throw Error(ErrorCode::SolveFailed, "pruning matrix is not integral");
    step.matrix[c][0] = wu[c] / step.d_uv;
  }
  for (std::size_t k = 0; k < surviving.size(); ++k) step.matrix[surviving[k]][k + 1] = 1;

  SpliceFan& pruned = step.pruned;
  pruned.n = m;
  {
    std::vector<BigInt> unit(m, 0);
    unit[0] = 1;
    pruned.rays.push_back({*u, unit});
    for (std::size_t k = 0; k < surviving.size(); ++k) {
      std::vector<BigInt> e(m, 0);
      e[k + 1] = 1;
      pruned.rays.push_back({link.leaves[surviving[k]], e});
    }
  }
  for (int r : link.nodes) {
    const Ray& ray = fan.rays[r];
    if (ray.label == *u) continue;
    // A x = w: the u coordinate is read off any removed leaf, the rest is copied
    std::optional<BigInt> xu;
    for (int c : removed) {
      const BigInt num = ray.vector[c] * step.d_uv;
      if (num % wu[c] != 0) throw Error(ErrorCode::SolveFailed, "no integral solution for ray '" + ray.label + "'");
      const BigInt val = num / wu[c];
      if (xu && *xu != val) throw Error(ErrorCode::SolveFailed, "inconsistent pruning solve for ray '" + ray.label + "'");
      xu = val;
    }
    std::vector<BigInt> x{*xu};
    for (int c : surviving) x.push_back(ray.vector[c]);
    for (int c = 0; c < fan.n; ++c) {
      BigInt ax = 0;
      for (int k = 0; k < m; ++k) ax += step.matrix[c][k] * x[k];
      if (ax != ray.vector[c]) throw Error(ErrorCode::SolveFailed, "pruning solve does not reproduce ray '" + ray.label + "'");
    }
    pruned.rays.push_back({ray.label, std::move(x)});
  }
  for (const auto& c : fan.cones) {
    const bool dropped = (c.a == *u && !is_node(link, c.b)) || (c.b == *u && !is_node(link, c.a));
    if (!dropped) pruned.cones.push_back(c);
  }
  return step;
}

SpliceDiagram recover(const SpliceFan& fan) {
  for (const auto& c : fan.cones) {
    if (c.multiplicity != 1) {
      throw Error(ErrorCode::NonCoprimeFan, "cone " + c.a + "-" + c.b + " has multiplicity " + to_string(c.multiplicity));
    }
  }
  const Link link = analyze(fan);
  WeightMap weights;
  solve(fan, weights);

  std::vector<std::string> nodes;
  for (int r : link.nodes) nodes.push_back(fan.rays[r].label);
  std::vector<EdgeSpec> edges;
  for (const auto& c : fan.cones) {
    EdgeSpec e{c.a, c.b, {}, {}};
    if (is_node(link, c.a)) e.wa = small(weights.at({c.a, c.b}));
    if (is_node(link, c.b)) e.wb = small(weights.at({c.b, c.a}));
    edges.push_back(e);
  }
  SpliceDiagram d(link.leaves, nodes, edges);
  if (!d.valid()) throw Error(ErrorCode::VerificationFailed, "recovered tree is not a splice diagram");
  if (!check_conditions(d).all()) throw Error(ErrorCode::VerificationFailed, "recovered diagram fails the splice conditions");
  if (!same_fan(splice_fan(d), fan)) throw Error(ErrorCode::VerificationFailed, "recovered diagram has a different fan");
  return d;
}

bool roundtrip(const SpliceDiagram& d) { return isomorphic(recover(splice_fan(d)), d); }

}  // namespace splice
