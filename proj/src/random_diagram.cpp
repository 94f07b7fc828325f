#include <algorithm>
#include <map>
#include <tuple>
#include <limits>
#include <numeric>
#include <random>

#include "splice/diagram.hpp"
#include "splice/error.hpp"

namespace splice {

namespace {

constexpr int kRetryCap = 10000;
constexpr std::int64_t kMaxWeight = 1'000'000;

constexpr std::int64_t kPool[] = {2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32, 37, 41, 43, 47, 49};
constexpr int kPoolSize = static_cast<int>(std::size(kPool));

// Hand-rolled draws so the stream does not depend on the standard library's
// distribution implementations.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
      x = rng_();
    } while (x >= limit);
    return x % n;
  }

  int index(int n) { return static_cast<int>(below(static_cast<std::uint64_t>(n))); }

  std::int64_t small_weight() { return kPool[std::min(index(kPoolSize), index(kPoolSize))]; }

 private:
  std::mt19937_64 rng_;
};

struct Shape {
  std::vector<std::pair<int, int>> node_edges;  // node index pairs, first < second
  std::vector<int> leaf_owner;                  // node index of each leaf
};

std::optional<Shape> draw_shape(Draw& draw, int n_leaves, int n_nodes) {
  Shape s;
  std::vector<int> degree(n_nodes, 0);
  for (int j = 1; j < n_nodes; ++j) {
    const int parent = draw.index(j);
    s.node_edges.emplace_back(parent, j);
    ++degree[parent];
    ++degree[j];
  }
  std::vector<int> owners;
  for (int j = 0; j < n_nodes; ++j) {
    for (int k = degree[j]; k < 3; ++k) owners.push_back(j);
  }
  if (static_cast<int>(owners.size()) > n_leaves) return std::nullopt;
  while (static_cast<int>(owners.size()) < n_leaves) owners.push_back(draw.index(n_nodes));
  // Fisher-Yates so that leaf order is not grouped by node
  for (int i = static_cast<int>(owners.size()) - 1; i > 0; --i) std::swap(owners[i], owners[draw.index(i + 1)]);
  s.leaf_owner = std::move(owners);
  return s;
}

bool coprime_with_all(std::int64_t w, const std::vector<std::int64_t>& others) {
  return std::all_of(others.begin(), others.end(), [w](std::int64_t o) { return std::gcd(w, o) == 1; });
}

}  // namespace

SpliceDiagram random_diagram(int n_leaves, int n_nodes, std::uint64_t seed, bool require_coprime) {
  if (n_leaves < 3 || n_nodes < 1 || n_leaves < n_nodes + 2) {
    throw Error(ErrorCode::GenerationExhausted, "no splice diagram has " + std::to_string(n_leaves) + " leaves and " +
                                                    std::to_string(n_nodes) + " nodes");
  }
  Draw draw(seed);

  std::vector<std::string> leaves, nodes;
  for (int i = 0; i < n_leaves; ++i) leaves.push_back("l" + std::to_string(i + 1));
  for (int j = 0; j < n_nodes; ++j) nodes.push_back("v" + std::to_string(j + 1));
  const int nv = n_leaves + n_nodes;

  for (int attempt = 0; attempt < kRetryCap; ++attempt) {
    auto shape = draw_shape(draw, n_leaves, n_nodes);
    if (!shape) continue;

    // weight[x][y]: weight at node x on the edge toward neighbour y
    std::vector<std::vector<int>> adj(nv);
    std::map<std::pair<int, int>, std::int64_t> weight;
    std::vector<std::vector<std::int64_t>> around(n_nodes);
    bool ok = true;
    for (int i = 0; i < n_leaves && ok; ++i) {
      const int node = n_leaves + shape->leaf_owner[i];
      adj[node].push_back(i);
      adj[i].push_back(node);
      int tries = 0;
      std::int64_t w = draw.small_weight();
      while (require_coprime && !coprime_with_all(w, around[node - n_leaves]) && ++tries < 64) w = draw.small_weight();
      if (tries >= 64) ok = false;
      around[node - n_leaves].push_back(w);
      weight[{node, i}] = w;
    }
    if (!ok) continue;
    for (const auto& [p, q] : shape->node_edges) {
      adj[n_leaves + p].push_back(n_leaves + q);
      adj[n_leaves + q].push_back(n_leaves + p);
    }

    // Internal half-edges u -> v only depend on the half-edges pointing away
    // from u beyond v, so settle them in order of the size of that branch.
    auto beyond = [&](int u, int v) {
      std::vector<int> out;
      std::vector<std::pair<int, int>> stack{{v, u}};
      while (!stack.empty()) {
        auto [x, from] = stack.back();
        stack.pop_back();
        out.push_back(x);
        for (int y : adj[x]) {
          if (y != from) stack.push_back({y, x});
        }
      }
      return out;
    };
    std::vector<std::tuple<std::size_t, int, int>> half_edges;
    for (const auto& [p, q] : shape->node_edges) {
      const int a = n_leaves + p, b = n_leaves + q;
      half_edges.emplace_back(beyond(a, b).size(), a, b);
      half_edges.emplace_back(beyond(b, a).size(), b, a);
    }
    std::sort(half_edges.begin(), half_edges.end());

    for (const auto& [size, u, v] : half_edges) {
      (void)size;
      // reduced linking numbers from u to the leaves beyond v
      std::vector<std::int64_t> gens;
      std::vector<std::tuple<int, int, std::int64_t>> stack{{v, u, 1}};
      while (!stack.empty() && ok) {
        auto [x, from, acc] = stack.back();
        stack.pop_back();
        if (x < n_leaves) {
          gens.push_back(acc);
          continue;
        }
        for (int y : adj[x]) {
          if (y == from) continue;
          std::int64_t prod = acc;
          for (int z : adj[x]) {
            if (z != from && z != y) prod *= weight.at({x, z});
          }
          if (prod > (std::int64_t{1} << 40)) ok = false;
          stack.emplace_back(y, x, prod);
        }
      }
      if (!ok) break;
      std::int64_t w = 0;
      for (int tries = 0; tries < 64; ++tries) {
        // one or two generators with bounded multipliers keeps the weights modest
        w = gens[draw.index(static_cast<int>(gens.size()))] * (1 + draw.index(48));
        if (draw.index(2) == 0) w += gens[draw.index(static_cast<int>(gens.size()))] * (1 + draw.index(4));
        if (w > 0 && (!require_coprime || coprime_with_all(w, around[u - n_leaves]))) break;
        w = 0;
      }
      if (w == 0 || w > kMaxWeight) {
        ok = false;
        break;
      }
      around[u - n_leaves].push_back(w);
      weight[{u, v}] = w;
    }
    if (!ok) continue;

    // node endpoint first, then sorted by vertex id
    std::vector<std::pair<int, int>> oriented;
    for (int i = 0; i < n_leaves; ++i) oriented.emplace_back(n_leaves + shape->leaf_owner[i], i);
    for (const auto& [p, q] : shape->node_edges) oriented.emplace_back(n_leaves + p, n_leaves + q);
    std::sort(oriented.begin(), oriented.end());
    auto name = [&](int id) { return id < n_leaves ? leaves[id] : nodes[id - n_leaves]; };
    std::vector<EdgeSpec> specs;
    for (const auto& [a, b] : oriented) {
      EdgeSpec e{name(a), name(b), weight.at({a, b}), std::nullopt};
      if (b >= n_leaves) e.wb = weight.at({b, a});
      specs.push_back(std::move(e));
    }

    SpliceDiagram d(leaves, nodes, specs);
    if (!d.valid()) continue;
    const ConditionReport rep = check_conditions(d);
    if (rep.edge_determinant && rep.semigroup && (!require_coprime || rep.coprime)) return d;
  }
  throw Error(ErrorCode::GenerationExhausted, "no diagram with " + std::to_string(n_leaves) + " leaves and " +
                                                  std::to_string(n_nodes) + " nodes after " +
                                                  std::to_string(kRetryCap) + " attempts");
}

}  // namespace splice
