// Serial full-scan reference against the OpenMP row kernels for lattice sums over m·P.

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "toricdeg/io.hpp"
#include "toricdeg/lattice_kernels.hpp"

#ifndef TORICDEG_CORPUS_DIR
#error "TORICDEG_CORPUS_DIR must be defined"
#endif

namespace {

using namespace toricdeg;

const LatticePolytope& polytope(const std::string& name) {
  static std::vector<std::pair<std::string, LatticePolytope>> cache;
  for (const auto& [n, p] : cache) {
    if (n == name) return p;
  }
  cache.emplace_back(name, load_polytope(std::string(TORICDEG_CORPUS_DIR) + "/" + name + ".json"));
  return cache.back().second;
}

std::vector<double> sample_xi(int dim) {
  std::vector<double> xi(dim);
  for (int i = 0; i < dim; ++i) xi[i] = 0.7 - 0.4 * i;
  return xi;
}

void BM_reference_exp_sum(benchmark::State& state, const char* name) {
  const auto& P = polytope(name);
  const auto m = state.range(0);
  const auto xi = sample_xi(P.dim());
  for (auto _ : state) {
    const auto points = kernels::reference::lattice_points_scan(P, m);
    benchmark::DoNotOptimize(kernels::reference::exp_sum(points, xi, 1.0 / m));
  }
}

void BM_rows_exp_sum(benchmark::State& state, const char* name) {
  const auto& P = polytope(name);
  const auto m = state.range(0);
  const auto xi = sample_xi(P.dim());
  for (auto _ : state) {
    const auto rows = kernels::enumerate_rows(P, m);
    benchmark::DoNotOptimize(kernels::exp_sum(rows, xi, 1.0 / m));
  }
}

void BM_reference_coordinate_sums(benchmark::State& state, const char* name) {
  const auto& P = polytope(name);
  const auto m = state.range(0);
  for (auto _ : state) {
    const auto points = kernels::reference::lattice_points_scan(P, m);
    benchmark::DoNotOptimize(kernels::reference::coordinate_sums(points));
  }
}

void BM_rows_coordinate_sums(benchmark::State& state, const char* name) {
  const auto& P = polytope(name);
  const auto m = state.range(0);
  for (auto _ : state) {
    const auto rows = kernels::enumerate_rows(P, m);
    benchmark::DoNotOptimize(kernels::coordinate_sums(rows));
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_reference_exp_sum, dp7, "dp7")->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_rows_exp_sum, dp7, "dp7")->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_reference_exp_sum, bl1_p3, "bl1_p3")->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_rows_exp_sum, bl1_p3, "bl1_p3")->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_reference_coordinate_sums, bl1_p3, "bl1_p3")->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_rows_coordinate_sums, bl1_p3, "bl1_p3")->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
