#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "splice/system.hpp"

namespace splice {

struct RootedDiagram {
  const SpliceDiagram* diagram = nullptr;
  VertexId root = -1;
  /// Non-root leaves in declaration order.
  std::vector<VertexId> others;
  /// l_{r lambda} for lambda in others.
  std::vector<BigInt> links;
};

/// Throws NotALeaf.
RootedDiagram root(const SpliceDiagram& d, VertexId r);
RootedDiagram root(const SpliceDiagram& d, const std::string& label);

struct EndCurveEquation {
  VertexId node = -1;
  int index = 1;
  /// In all n variables; the root variable never occurs.
  Polynomial poly;
};

struct EndCurveSystem {
  VertexId root = -1;
  int num_vars = 0;
  std::vector<EndCurveEquation> equations;
  /// Per node, the surviving monomials in adjacency order (column order for
  /// binomial_reduce). Nodes missing here fall back to term order.
  std::vector<std::pair<VertexId, std::vector<ExponentVector>>> columns;
};

/// Each minimal equation without the monomial of the edge pointing at the root.
EndCurveSystem end_curve_system(const SpliceSystem& s, const RootedDiagram& r);

/// z^lead + kappa z^other
struct Binomial {
  VertexId node = -1;
  ExponentVector lead;
  ExponentVector other;
  Rational kappa;
};

Polynomial to_polynomial(const Binomial& b, int num_vars);

struct BinomialSystem {
  VertexId root = -1;
  int num_vars = 0;
  std::vector<Binomial> binomials;
};

/// Row reduction of each node's surviving monomials. Throws EliminationDegenerate.
BinomialSystem binomial_reduce(const EndCurveSystem& ecs);

/// Common pairing of both monomials with (l_{r lambda}); nullopt if they differ.
std::optional<BigInt> binomial_degree(const RootedDiagram& r, const Binomial& b);

using Complex = std::complex<double>;

struct MonomialCurve {
  VertexId root = -1;
  std::vector<VertexId> leaves;
  /// l_{r lambda} / g, primitive.
  std::vector<BigInt> exponents;
  BigInt g = 1;
  /// One coefficient vector per component, indexed like leaves.
  std::vector<std::vector<Complex>> components;
  /// Exact coefficients for components whose coefficients are all rational.
  std::vector<std::optional<std::vector<Rational>>> exact;
};

/// t -> (c_lambda t^{e_lambda}); g components, last coefficient normalized to 1.
/// Throws SolveFailed.
MonomialCurve parameterize(const EndCurveSystem& ecs, const RootedDiagram& r);

/// Substitutes every component into every equation. Exact where the component
/// is rational, otherwise to a relative tolerance of 1e-9 at t = 1 and t = 2.
bool verify_parameterization(const MonomialCurve& curve, const EndCurveSystem& ecs);

/// Largest relative substitution residual over components, equations and t in {1, 2}.
double parameterization_residual(const MonomialCurve& curve, const EndCurveSystem& ecs);

}  // namespace splice
