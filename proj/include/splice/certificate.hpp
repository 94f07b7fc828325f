#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "splice/fan.hpp"
#include "splice/system.hpp"

namespace splice {

/// Leaves whose variables are set to zero.
struct TruncationContext {
  std::vector<VertexId> leaves;
};

/// A combination of the equations at one node whose w-initial form is the
/// single monomial z^monomial.
struct Certificate {
  VertexId node = -1;
  int edge = -1;
  /// w . a_{v,e'} for every incident edge in adjacency order; nullopt when the
  /// monomial is killed by the truncation.
  std::vector<std::optional<Rational>> values;
  /// Coefficients of the node's equations in the combination.
  std::vector<Rational> combination;
  ExponentVector monomial;
  /// The combined (truncated) polynomial, tails included.
  Polynomial combined;
};

/// Scans the nodes in declaration order and returns the first witness.
std::optional<Certificate> certificate_search(const SpliceSystem& s, const WeightVector& w,
                                              const std::optional<TruncationContext>& truncation = std::nullopt);

/// Re-derives the combination and checks that its initial form is the claimed monomial.
bool verify_certificate(const SpliceSystem& s, const WeightVector& w, const Certificate& c,
                        const std::optional<TruncationContext>& truncation = std::nullopt);

struct In {
  CellLocation cell;
};
struct Out {
  Certificate certificate;
};
using Membership = std::variant<In, Out>;

/// Throws Inconsistent when locate and certificate_search both succeed or both fail.
Membership membership(const SpliceSystem& s, const SpliceFan& fan, const WeightVector& w);

/// Brute-force search over target monomials: some rational combination of the
/// generators has initial form exactly that monomial.
std::optional<ExponentVector> monomial_in_span_oracle(const std::vector<Polynomial>& generators, const WeightVector& w);
bool monomial_in_span(const std::vector<Polynomial>& generators, const WeightVector& w, const ExponentVector& target);

struct InitialIdeal {
  std::vector<Polynomial> generators;
  bool monomial_free = true;
};

InitialIdeal initial_ideal_generators(const SpliceSystem& s, const WeightVector& w);

struct BoundaryResult {
  std::optional<std::vector<BigInt>> ray;  // nullopt means Empty
  bool consistent = false;
  int samples = 0;
};

/// Tropicalization of the truncation by a nonempty proper leaf set, cross-checked
/// by certificate_search at sampled positive vectors.
BoundaryResult boundary_trop(const SpliceSystem& s, const std::vector<VertexId>& leaves, int samples = 50,
                             std::uint64_t seed = 1);

}  // namespace splice
