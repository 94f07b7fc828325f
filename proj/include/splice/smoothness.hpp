#pragma once

#include <cstdint>
#include <vector>

#include "splice/system.hpp"

namespace splice {

struct SmoothnessReport {
  int samples = 0;
  int expected_rank = 0;  // n - 2
  /// sigma_{n-2} / sigma_1 of the row-normalized toric Jacobian, per sample.
  std::vector<double> ratios;
  double min_ratio = 0;
  /// Largest relative residual of the initial forms at the sampled points.
  double max_residual = 0;
  bool full_rank = false;
};

constexpr double kRankTolerance = 1e-9;

/// Samples torus points of the initial degeneration at w and checks the
/// Jacobian rank there. Throws NoTorusPoint when no point can be produced.
SmoothnessReport smoothness_smoke(const SpliceSystem& s, const WeightVector& w, int samples, std::uint64_t seed);

}  // namespace splice
