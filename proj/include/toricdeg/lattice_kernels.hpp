#pragma once

// Data-parallel lattice sums over dilated polytopes.
//
// Integer points of m·P are enumerated row by row: the first n-1 coordinates
// range over the bounding box, and for every such prefix the admissible last
// coordinates form one contiguous interval obtained exactly from the facet
// inequalities. Rows are independent, so kernels parallelize over them with
// OpenMP and then reduce the per-row partials serially in row order. The
// result is therefore bit-identical for every thread count.
//
// The `reference` namespace holds straightforward serial implementations
// (full bounding-box scan, point-by-point evaluation) used as oracles in
// tests and as the baseline in the benchmark.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "toricdeg/lattice_geom.hpp"

namespace toricdeg::kernels {

struct LatticeRows {
  int dim = 0;
  /// Bounding box of the first dim-1 coordinates (empty for dim == 1).
  IntVector prefix_lo;
  IntVector prefix_hi;
  /// Admissible interval of the last coordinate per row; lo > hi marks an
  /// empty row.
  std::vector<std::int64_t> row_lo;
  std::vector<std::int64_t> row_hi;

  std::size_t size() const { return row_lo.size(); }
  /// Prefix coordinates of row `index` (lexicographic row order).
  IntVector prefix(std::size_t index) const;
};

/// Row decomposition of m·P ∩ Z^n. Parallel over rows.
LatticeRows enumerate_rows(const LatticePolytope& polytope, std::int64_t m);

std::int64_t count_points(const LatticeRows& rows);

/// Exact per-coordinate sums Σ α_i over all lattice points.
IntVector coordinate_sums(const LatticeRows& rows);

/// Σ_α exp(-scale·⟨α, xi⟩), compensated, reduced in lexicographic row order.
double exp_sum(const LatticeRows& rows, std::span<const double> xi, double scale);

/// All points, lexicographically sorted.
std::vector<IntVector> materialize(const LatticeRows& rows);

namespace reference {

/// Full bounding-box scan testing every facet inequality per point.
std::vector<IntVector> lattice_points_scan(const LatticePolytope& polytope, std::int64_t m);

IntVector coordinate_sums(std::span<const IntVector> points);

/// Point-by-point Σ exp(-scale·⟨α, xi⟩) with compensated summation.
double exp_sum(std::span<const IntVector> points, std::span<const double> xi, double scale);

}  // namespace reference

}  // namespace toricdeg::kernels
