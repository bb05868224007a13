#pragma once

// Ground-truth implementations for testing. Nothing here calls into the
// message-passing code or its helpers (half-edge index, union-find, engine).

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "netmp/community.hpp"
#include "netmp/graph.hpp"

namespace netmp::oracle {

struct SimStats {
  std::vector<double> membership;  // per node: fraction of reps in the largest cluster
  double mean_s = 0.0;
  double std_error = 0.0;  // sample std / sqrt(reps)
  std::size_t reps = 0;
  std::uint64_t seed = 0;
};

/// Edge percolation by simulation. Rep k draws from its own stream, so the
/// result is the same for any thread count. The largest cluster is the one
/// with most nodes, ties to the cluster holding the smallest node id; a
/// largest cluster of size 1 counts nobody.
SimStats percolation_sim(const Graph& g, double p, std::size_t reps, std::uint64_t seed, int threads = 0);
SimStats percolation_sim_serial(const Graph& g, double p, std::size_t reps, std::uint64_t seed);

/// Per-node mu_i on a forest by a two-pass (up, then down) recursion.
std::vector<double> tree_percolation_dp(const Graph& forest, double p);

struct IsingExact {
  double log_z = 0.0;
  std::vector<std::array<double, 2>> marginals;  // [P(+1), P(-1)]
};

/// Sum over all 2^n spin states; n <= 20.
IsingExact ising_enumerate(const Graph& g, double beta);

/// Ascending adjacency eigenvalues, n <= 2000, by round-robin parallel Jacobi.
std::vector<double> dense_spectrum(const Graph& g, int threads = 0);
/// Same by the serial cyclic-by-row Jacobi method.
std::vector<double> dense_spectrum_serial(const Graph& g);

/// Eigenvalues of a dense symmetric matrix (row-major, n*n), ascending.
std::vector<double> jacobi_eigenvalues_serial(std::vector<double> a, std::size_t n);
std::vector<double> jacobi_eigenvalues_parallel(std::vector<double> a, std::size_t n, int threads = 0);

/// Exact SBM posterior marginals by summing over all q^n labelings (<= 2^20).
std::vector<std::vector<double>> sbm_posterior_enumerate(const Graph& g, const SBMParams& params);

struct BruteForcePercolation {
  std::vector<double> membership;  // probability of being in the largest cluster
  double s = 0.0;                  // mean membership
};

/// Sum over all 2^m edge subsets; m <= 20.
BruteForcePercolation brute_percolation_enumerate(const Graph& g, double p);

}  // namespace netmp::oracle
