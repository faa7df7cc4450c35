#include <doctest.h>
#include <omp.h>

#include <cmath>
#include <random>

#include "test_support.hpp"
#include "toricdeg/lattice_kernels.hpp"

using namespace toricdeg;
using toricdeg::testing::corpus_names;
using toricdeg::testing::load_corpus;

namespace {

std::vector<LatticePolytope> kernel_cases() {
  std::vector<LatticePolytope> out;
  for (const auto& name : corpus_names()) out.push_back(load_corpus(name));
  out.push_back(translate(load_corpus("dp7"), IntVector{3, -1}));
  out.push_back(build_polytope({{Rational(-1, 2), Rational(-1, 3)},
                                {Rational(5, 2), Rational(0)},
                                {Rational(0), Rational(7, 4)}},
                               "rational_triangle"));
  return out;
}

}  // namespace

TEST_CASE("row enumeration matches the full box scan") {
  for (const auto& P : kernel_cases()) {
    CAPTURE(P.name());
    const int top = P.dim() == 3 ? 4 : 9;
    for (int m = 0; m <= top; ++m) {
      CAPTURE(m);
      const auto rows = kernels::enumerate_rows(P, m);
      const auto pts = kernels::materialize(rows);
      const auto ref = kernels::reference::lattice_points_scan(P, m);
      CHECK(pts == ref);
      CHECK(kernels::count_points(rows) == static_cast<std::int64_t>(ref.size()));
      CHECK(kernels::coordinate_sums(rows) == kernels::reference::coordinate_sums(ref));
    }
  }
}

TEST_CASE("exp_sum agrees with the point-by-point reference") {
  std::mt19937_64 rng(11);
  for (const auto& P : kernel_cases()) {
    CAPTURE(P.name());
    const int m = P.dim() == 3 ? 6 : 17;
    const auto rows = kernels::enumerate_rows(P, m);
    const auto ref = kernels::reference::lattice_points_scan(P, m);
    for (int k = 0; k < 4; ++k) {
      const TorusVector xi = toricdeg::testing::random_xi(rng, P.dim(), 3.0);
      const double a = kernels::exp_sum(rows, xi.span(), 1.0 / m);
      const double b = kernels::reference::exp_sum(ref, xi.span(), 1.0 / m);
      CHECK(std::abs(a - b) <= 1e-13 * std::abs(b));
    }
  }
}

TEST_CASE("kernels are bit-identical across thread counts") {
  const auto P = load_corpus("bl1_p3");
  const TorusVector xi{0.3, -1.1, 0.45};
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto rows1 = kernels::enumerate_rows(P, 20);
  const double s1 = kernels::exp_sum(rows1, xi.span(), 1.0 / 20);
  for (int threads : {2, 3, 8}) {
    omp_set_num_threads(threads);
    const auto rows = kernels::enumerate_rows(P, 20);
    CHECK(rows.row_lo == rows1.row_lo);
    CHECK(rows.row_hi == rows1.row_hi);
    CHECK(kernels::exp_sum(rows, xi.span(), 1.0 / 20) == s1);
  }
  omp_set_num_threads(saved);
}

TEST_CASE("empty rows are tolerated") {
  // thin triangle: most prefixes of the bounding box carry no points
  const auto P = build_polytope({{Rational(0), Rational(0)}, {Rational(7), Rational(1)}, {Rational(1, 3), Rational(1, 2)}});
  for (int m = 1; m <= 6; ++m) {
    const auto rows = kernels::enumerate_rows(P, m);
    CHECK(kernels::materialize(rows) == kernels::reference::lattice_points_scan(P, m));
  }
}

TEST_CASE("zero dilation yields the origin") {
  const auto rows = kernels::enumerate_rows(load_corpus("cube"), 0);
  CHECK(kernels::materialize(rows) == std::vector<IntVector>{IntVector{0, 0, 0}});
}
