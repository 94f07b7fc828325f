#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "splice/diagram.hpp"
#include "splice/polynomial.hpp"

namespace splice {

struct Ray {
  std::string label;
  std::vector<BigInt> vector;  // primitive, non-negative
};

struct Cone2 {
  std::string a;
  std::string b;
  BigInt multiplicity;
};

/// Rays are the leaves then the nodes in declaration order; one cone per edge
/// in edge order. Also the input format of recovery.
struct SpliceFan {
  int n = 0;
  std::vector<Ray> rays;
  std::vector<Cone2> cones;

  const Ray* ray(const std::string& label) const;
  bool operator==(const SpliceFan& other) const;
};

/// Requires both diagram conditions. Throws ConditionViolation or NonIntegralMultiplicity.
SpliceFan splice_fan(const SpliceDiagram& d);

/// Closed-form tropical multiplicity of the cone over edge e.
BigInt cone_multiplicity(const SpliceDiagram& d, int edge);

/// Point of the standard simplex: w_v / |w_v| for nodes, e_lambda for leaves.
std::vector<Rational> embed_vertex(const SpliceDiagram& d, VertexId v);

/// sum over lambda in leaves of (l_{v lambda} / l) e_lambda, l the sum of those linking numbers.
std::vector<Rational> barycenter(const SpliceDiagram& d, VertexId v, const std::vector<VertexId>& leaves);

enum class CellKind { OnRay, InCone, Outside };

struct CellLocation {
  CellKind kind = CellKind::Outside;
  std::string ray;                         // OnRay
  std::pair<std::string, std::string> cone;  // InCone
  std::vector<Rational> coeffs;            // multiple of the ray, or the two cone coefficients
};

std::string to_string(CellKind kind);

/// Exact position of w relative to the fan; shared rays win over cones.
CellLocation locate(const SpliceFan& fan, const WeightVector& w);

/// Balancing at every ray that is not a unit vector (the node rays).
bool check_balancing(const SpliceFan& fan);

}  // namespace splice
