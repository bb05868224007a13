#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "netmp/graph.hpp"
#include "netmp/mp_engine.hpp"

namespace netmp {

struct PercolationResult {
  std::vector<double> node_probabilities;  // mu_i: probability node i is NOT in the giant cluster
  double giant_cluster_fraction = 0.0;     // S = 1 - mean(mu_i)
  double p = 0.0;
  IterationReport report;
};

struct ThresholdResult {
  double lambda = 0.0;
  std::optional<double> p_c;  // empty: no transition (lambda == 0)
};

struct MessageSolution {
  ScalarField messages;
  IterationReport report;
};

/// 0/1 giant-component messages: mu_{i<-j} = prod_{k in N_j, k != i} mu_{j<-k}.
/// Default init: random in (0,1). On a component whose 2-core is a single
/// cycle the update only permutes messages and does not converge.
MessageSolution giant_component_messages(const Graph& g, const FixedPointConfig& cfg = {});

/// Flags node i as in the giant component iff prod_j mu_{i<-j} < 0.5.
std::vector<bool> giant_component_membership(const Graph& g, const FixedPointConfig& cfg = {});
std::vector<bool> giant_component_membership(const Graph& g, const ScalarField& messages);

/// Edge-percolation messages mu_{i<-j} = prod_{k in N_j, k != i} (1 - p + p mu_{j<-k}).
/// Default init is all zeros, which converges monotonically to the smallest
/// (physical) fixed point. `warm` (if given) replaces the init.
MessageSolution percolation_messages(const Graph& g, double p, const FixedPointConfig& cfg = {},
                                     const ScalarField* warm = nullptr);

/// mu_i = prod_{j in N_i} (1 - p + p mu_{i<-j}); isolated nodes get 1.
std::vector<double> percolation_node_probabilities(const Graph& g, const ScalarField& messages, double p);

/// S = 1 - mean(mu_i). Throws on an empty input.
double giant_cluster_size(std::span<const double> node_probabilities);

PercolationResult percolate(const Graph& g, double p, const FixedPointConfig& cfg = {});

/// p_c = 1/lambda of the non-backtracking matrix; empty p_c on forests.
ThresholdResult percolation_threshold(const Graph& g, double tol = 1e-10, std::size_t max_iter = 100000);

struct PercolationSweep {
  std::vector<double> p;
  std::vector<PercolationResult> points;
};

/// S(p) over an ascending grid. Points are solved from the largest p down,
/// each warm-started from its upper neighbour's fixed point (see .cpp).
PercolationSweep sweep_percolation(const Graph& g, std::span<const double> p_grid, const FixedPointConfig& cfg = {},
                                   bool warm_start = true);

}  // namespace netmp
