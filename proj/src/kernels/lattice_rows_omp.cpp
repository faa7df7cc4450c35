#include <algorithm>
#include <cmath>
#include <limits>

#include "toricdeg/lattice_kernels.hpp"
#include "toricdeg/numeric.hpp"

namespace toricdeg::kernels {

namespace {

struct RowBounds {
  int dim;
  std::int64_t last_lo;
  std::int64_t last_hi;
  // Facet normals and the integer right-hand sides floor(m·offset).
  std::vector<IntVector> normals;
  std::vector<std::int64_t> rhs;
};

RowBounds make_bounds(const LatticePolytope& polytope, std::int64_t m, IntVector& box_lo, IntVector& box_hi) {
  const int n = polytope.dim();
  box_lo.assign(n, 0);
  box_hi.assign(n, 0);
  const Rational scale(static_cast<long>(m));
  for (int i = 0; i < n; ++i) {
    Rational lo = polytope.vertices().front()[i];
    Rational hi = lo;
    for (const auto& v : polytope.vertices()) {
      if (v[i] < lo) lo = v[i];
      if (v[i] > hi) hi = v[i];
    }
    box_lo[i] = ceil_to_int(lo * scale);
    box_hi[i] = floor_to_int(hi * scale);
  }
  RowBounds b;
  b.dim = n;
  b.last_lo = box_lo[n - 1];
  b.last_hi = box_hi[n - 1];
  for (const auto& f : polytope.facets()) {
    b.normals.push_back(f.normal);
    b.rhs.push_back(floor_to_int(f.offset * scale));
  }
  box_lo.pop_back();
  box_hi.pop_back();
  return b;
}

void decode_prefix(std::size_t index, const IntVector& lo, const IntVector& hi, std::int64_t* out) {
  for (int i = static_cast<int>(lo.size()) - 1; i >= 0; --i) {
    const auto extent = static_cast<std::size_t>(hi[i] - lo[i] + 1);
    out[i] = lo[i] + static_cast<std::int64_t>(index % extent);
    index /= extent;
  }
}

}  // namespace

IntVector LatticeRows::prefix(std::size_t index) const {
  IntVector p(prefix_lo.size());
  decode_prefix(index, prefix_lo, prefix_hi, p.data());
  return p;
}

LatticeRows enumerate_rows(const LatticePolytope& polytope, std::int64_t m) {
  LatticeRows rows;
  rows.dim = polytope.dim();
  const RowBounds bounds = make_bounds(polytope, m, rows.prefix_lo, rows.prefix_hi);

  std::size_t total = 1;
  for (std::size_t i = 0; i < rows.prefix_lo.size(); ++i) {
    if (rows.prefix_hi[i] < rows.prefix_lo[i]) {
      total = 0;
      break;
    }
    total *= static_cast<std::size_t>(rows.prefix_hi[i] - rows.prefix_lo[i] + 1);
  }
  rows.row_lo.assign(total, 1);
  rows.row_hi.assign(total, 0);

  const int n = bounds.dim;
  const std::size_t facet_count = bounds.normals.size();
  const auto total_signed = static_cast<std::int64_t>(total);

#pragma omp parallel
  {
    IntVector prefix(n > 1 ? n - 1 : 1);
#pragma omp for schedule(static)
    for (std::int64_t r = 0; r < total_signed; ++r) {
      const auto idx = static_cast<std::size_t>(r);
      decode_prefix(idx, rows.prefix_lo, rows.prefix_hi, prefix.data());
      std::int64_t lo = bounds.last_lo;
      std::int64_t hi = bounds.last_hi;
      for (std::size_t f = 0; f < facet_count && lo <= hi; ++f) {
        const IntVector& v = bounds.normals[f];
        std::int64_t partial = 0;
        for (int i = 0; i + 1 < n; ++i) partial += v[i] * prefix[i];
        const std::int64_t slack = bounds.rhs[f] - partial;
        const std::int64_t c = v[n - 1];
        if (c == 0) {
          if (slack < 0) hi = lo - 1;
        } else if (c > 0) {
          hi = std::min(hi, floor_div(slack, c));
        } else {
          lo = std::max(lo, ceil_div(slack, c));
        }
      }
      rows.row_lo[idx] = lo;
      rows.row_hi[idx] = hi;
    }
  }
  return rows;
}

std::int64_t count_points(const LatticeRows& rows) {
  std::int64_t count = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows.row_hi[r] >= rows.row_lo[r]) count += rows.row_hi[r] - rows.row_lo[r] + 1;
  }
  return count;
}

IntVector coordinate_sums(const LatticeRows& rows) {
  const int n = rows.dim;
  IntVector sums(n, 0);
  IntVector prefix(rows.prefix_lo.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::int64_t lo = rows.row_lo[r];
    const std::int64_t hi = rows.row_hi[r];
    if (hi < lo) continue;
    const std::int64_t len = hi - lo + 1;
    decode_prefix(r, rows.prefix_lo, rows.prefix_hi, prefix.data());
    for (int i = 0; i + 1 < n; ++i) sums[i] += prefix[i] * len;
    // lo + ... + hi; one of len and lo + hi is even.
    sums[n - 1] += (len % 2 == 0) ? (len / 2) * (lo + hi) : len * ((lo + hi) / 2);
  }
  return sums;
}

double exp_sum(const LatticeRows& rows, std::span<const double> xi, double scale) {
  const int n = rows.dim;
  std::vector<double> partial(rows.size(), 0.0);
  const auto total = static_cast<std::int64_t>(rows.size());
  const double last = xi[n - 1] * scale;

#pragma omp parallel
  {
    IntVector prefix(n > 1 ? n - 1 : 1);
#pragma omp for schedule(static)
    for (std::int64_t r = 0; r < total; ++r) {
      const auto idx = static_cast<std::size_t>(r);
      const std::int64_t lo = rows.row_lo[idx];
      const std::int64_t hi = rows.row_hi[idx];
      if (hi < lo) continue;
      decode_prefix(idx, rows.prefix_lo, rows.prefix_hi, prefix.data());
      double base = 0.0;
      for (int i = 0; i + 1 < n; ++i) base += static_cast<double>(prefix[i]) * xi[i];
      base *= scale;
      KahanSum row;
      for (std::int64_t k = lo; k <= hi; ++k) row += std::exp(-(base + static_cast<double>(k) * last));
      partial[idx] = row.value();
    }
  }

  KahanSum total_sum;
  for (double p : partial) total_sum += p;
  return total_sum.value();
}

std::vector<IntVector> materialize(const LatticeRows& rows) {
  std::vector<IntVector> points;
  points.reserve(static_cast<std::size_t>(count_points(rows)));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows.row_hi[r] < rows.row_lo[r]) continue;
    IntVector p = rows.prefix(r);
    p.push_back(0);
    for (std::int64_t k = rows.row_lo[r]; k <= rows.row_hi[r]; ++k) {
      p.back() = k;
      points.push_back(p);
    }
  }
  return points;
}

}  // namespace toricdeg::kernels
