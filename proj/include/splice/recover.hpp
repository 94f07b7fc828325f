#pragma once

#include <string>
#include <vector>

#include "splice/fan.hpp"
#include "splice/linalg.hpp"

namespace splice {

/// Star diagram whose single node has weight vector w; leaf labels default to
/// l1..ln. Throws NotRealizable.
SpliceDiagram recover_star(const std::vector<BigInt>& w, std::vector<std::string> leaf_labels = {},
                           const std::string& node_label = "v");

/// One pruning step: the end node u is replaced by a leaf.
struct PruneStep {
  std::string end_node;
  std::vector<std::string> removed_leaves;
  BigInt d_uv;
  BigInt d_u;
  std::vector<BigInt> leaf_weights;  // d_{u,lambda} for removed_leaves
  /// Rows indexed by the old coordinates, columns by the new ones (u first,
  /// then the surviving leaves in order).
  ZMatrix matrix;
  SpliceFan pruned;
};

/// Prunes the end node with the smallest label. Requires at least two node rays.
/// Throws NotRealizable, SolveFailed.
PruneStep prune_step(const SpliceFan& fan);

/// The coprime splice diagram with this fan. Throws NonCoprimeFan,
/// NotRealizable, SolveFailed, VerificationFailed.
SpliceDiagram recover(const SpliceFan& fan);

/// recover(splice_fan(d)) is isomorphic to d.
bool roundtrip(const SpliceDiagram& d);

}  // namespace splice
