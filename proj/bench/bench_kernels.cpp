// Serial reference vs OpenMP kernels. Arg 1 is the thread count (1 = serial path).
#include <benchmark/benchmark.h>

#include <vector>

#include "netmp/generators.hpp"
#include "netmp/half_edge.hpp"
#include "netmp/oracles.hpp"
#include "netmp/percolation.hpp"

using namespace netmp;

namespace {

const Graph& big_graph() {
  static const Graph g = generate_regular(200000, 3, 1);
  return g;
}

void BM_nb_apply_serial(benchmark::State& state) {
  HalfEdgeIndex idx(big_graph());
  std::vector<double> v(idx.num_directed(), 1.0), out(idx.num_directed());
  for (auto _ : state) {
    nb_apply_serial(idx, v, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(idx.num_directed()));
}
BENCHMARK(BM_nb_apply_serial);

void BM_nb_apply_omp(benchmark::State& state) {
  HalfEdgeIndex idx(big_graph());
  std::vector<double> v(idx.num_directed(), 1.0), out(idx.num_directed());
  for (auto _ : state) {
    nb_apply(idx, v, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(idx.num_directed()));
}
BENCHMARK(BM_nb_apply_omp);

// Fixed number of synchronous percolation sweeps.
void BM_percolation_sweeps(benchmark::State& state) {
  FixedPointConfig cfg;
  cfg.max_iter = 20;
  cfg.tol = 1e-300;
  cfg.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(percolation_messages(big_graph(), 0.7, cfg).report.iterations);
}
BENCHMARK(BM_percolation_sweeps)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

void BM_jacobi(benchmark::State& state) {
  auto g = generate_er(300, 0.02, 2);
  for (auto _ : state) {
    if (state.range(0) == 1)
      benchmark::DoNotOptimize(oracle::dense_spectrum_serial(g));
    else
      benchmark::DoNotOptimize(oracle::dense_spectrum(g, 0));
  }
}
BENCHMARK(BM_jacobi)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

void BM_simulation(benchmark::State& state) {
  auto g = generate_er(20000, 3.0 / 19999, 3);
  for (auto _ : state) {
    if (state.range(0) == 1)
      benchmark::DoNotOptimize(oracle::percolation_sim_serial(g, 0.5, 50, 1).mean_s);
    else
      benchmark::DoNotOptimize(oracle::percolation_sim(g, 0.5, 50, 1, 0).mean_s);
  }
}
BENCHMARK(BM_simulation)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
