#include <cmath>

#include "toricdeg/lattice_kernels.hpp"
#include "toricdeg/numeric.hpp"

namespace toricdeg::kernels::reference {

std::vector<IntVector> lattice_points_scan(const LatticePolytope& polytope, std::int64_t m) {
  const int n = polytope.dim();
  const Rational scale(static_cast<long>(m));
  IntVector lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    Rational a = polytope.vertices().front()[i];
    Rational b = a;
    for (const auto& v : polytope.vertices()) {
      if (v[i] < a) a = v[i];
      if (v[i] > b) b = v[i];
    }
    lo[i] = ceil_to_int(a * scale);
    hi[i] = floor_to_int(b * scale);
  }

  std::vector<IntVector> points;
  IntVector p = lo;
  for (int i = 0; i < n; ++i) {
    if (hi[i] < lo[i]) return points;
  }
  while (true) {
    bool inside = true;
    for (const auto& f : polytope.facets()) {
      Rational lhs = 0;
      for (int i = 0; i < n; ++i) lhs += Rational(static_cast<long>(f.normal[i] * p[i]));
      if (lhs > f.offset * scale) {
        inside = false;
        break;
      }
    }
    if (inside) points.push_back(p);

    int i = n - 1;
    while (i >= 0 && p[i] == hi[i]) {
      p[i] = lo[i];
      --i;
    }
    if (i < 0) break;
    ++p[i];
  }
  return points;
}

IntVector coordinate_sums(std::span<const IntVector> points) {
  IntVector sums;
  for (const auto& p : points) {
    if (sums.empty()) sums.assign(p.size(), 0);
    for (std::size_t i = 0; i < p.size(); ++i) sums[i] += p[i];
  }
  return sums;
}

double exp_sum(std::span<const IntVector> points, std::span<const double> xi, double scale) {
  KahanSum s;
  for (const auto& p : points) {
    double w = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) w += static_cast<double>(p[i]) * xi[i];
    s += std::exp(-scale * w);
  }
  return s.value();
}

}  // namespace toricdeg::kernels::reference
