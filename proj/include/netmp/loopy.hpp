#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "netmp/graph.hpp"
#include "netmp/mp_engine.hpp"
#include "netmp/percolation.hpp"

namespace netmp {

/// Cycles from i of length <= r that contain at least one edge missing from
/// every kept shorter cycle from i. A cycle is an edge-non-repeating closed
/// walk that returns to i only at its last step, listed as [i, v1, ..., vL-1]
/// with v1 < vL-1. Ordered by length, then lexicographically.
std::vector<std::vector<NodeId>> primitive_cycles(const Graph& g, NodeId i, std::size_t r);

/// Edges and nodes around a center node. `nodes` excludes the center.
struct Neighborhood {
  NodeId center = 0;
  std::size_t r = 2;
  std::vector<NodeId> nodes;         // sorted
  std::vector<Edge> internal_edges;  // (u < v), sorted
};

/// N_{i<-j}: N_j minus every node (other than j) and edge of N_i.
struct MessageNeighborhood {
  NodeId receiver = 0;
  NodeId sender = 0;
  std::vector<NodeId> nodes;  // sorted, excludes the sender
  std::vector<Edge> edges;
  // Edges of N_j outside N_i that touched a node of N_i other than j; they
  // come from cycles longer than r through both and are dropped.
  std::size_t overlap_edges = 0;
};

struct EdgeConfiguration {
  std::uint64_t mask = 0;  // bit e set: internal edge e occupied
  std::size_t occupied() const noexcept { return static_cast<std::size_t>(__builtin_popcountll(mask)); }
};

Neighborhood build_neighborhood(const Graph& g, NodeId i, std::size_t r);
MessageNeighborhood build_message_neighborhood(const Neighborhood& receiver_nb, const Neighborhood& sender_nb);

/// sigma per member node: 1 iff an occupied path joins it to the center
/// inside the neighborhood. Needs at most 64 edges.
std::vector<bool> reachability(const Neighborhood& nb, EdgeConfiguration config);
std::vector<bool> reachability(const MessageNeighborhood& nb, EdgeConfiguration config);

struct LoopyMode {
  enum class Kind { exact, monte_carlo };
  Kind kind = Kind::exact;
  std::size_t samples = 10;  // monte_carlo only
  std::uint64_t seed = 0;    // monte_carlo only

  static LoopyMode exact() { return {}; }
  static LoopyMode monte_carlo(std::size_t samples, std::uint64_t seed) {
    return {Kind::monte_carlo, samples, seed};
  }
};

inline constexpr std::size_t kExactEdgeCap = 22;

struct LoopyPercolationResult : PercolationResult {
  std::size_t max_neighborhood_edges = 0;
  std::size_t overlap_edges = 0;  // summed over message neighborhoods
};

/// Precomputed neighborhoods for one (graph, r, mode); solve() then runs at any p.
///
/// Each neighborhood value is a polynomial in its incoming messages: a weight
/// per reachable member subset, summed over edge configurations (all 2^k in
/// exact mode, `samples` fixed seeded draws per neighborhood otherwise).
class LoopyPercolation {
 public:
  LoopyPercolation(const Graph& g, std::size_t r, LoopyMode mode = LoopyMode::exact());

  std::size_t num_messages() const noexcept { return messages_.size(); }
  std::size_t max_neighborhood_edges() const noexcept { return max_edges_; }
  std::size_t overlap_edges() const noexcept { return overlap_edges_; }
  const Neighborhood& neighborhood(NodeId i) const { return nodes_[i].nb; }

  /// Message field over the loopy directed edges (i <- j), j in N_i. Default init zeros.
  MessageSolution messages(double p, const FixedPointConfig& cfg = {}, const ScalarField* warm = nullptr) const;
  std::vector<double> node_probabilities(double p, const ScalarField& messages) const;
  LoopyPercolationResult solve(double p, const FixedPointConfig& cfg = {}, const ScalarField* warm = nullptr) const;

  /// Ascending grid, solved top-down with warm starts like sweep_percolation.
  std::vector<LoopyPercolationResult> sweep(std::span<const double> p_grid, const FixedPointConfig& cfg = {}) const;

  // A neighborhood reduced to its polynomial. Exact mode stores, per reachable
  // subset, configuration counts by occupied-edge number; MC mode stores the
  // per-sample uniforms and re-evaluates reachability at each p.
  struct Poly {
    std::size_t k = 0;                      // edges
    std::vector<EdgeId> inputs;             // message per member bit
    std::vector<std::uint64_t> reach;       // exact: distinct reachable subsets
    std::vector<std::vector<double>> hist;  // exact: counts by occupied number
    std::vector<std::pair<std::uint8_t, std::uint8_t>> local_edges;  // endpoints, 0 = center
    std::vector<double> uniforms;           // MC: samples * k
  };

 private:
  struct Node {
    Neighborhood nb;
    EdgeId first = 0;  // loopy edges (i <- nb.nodes[t]) are first + t
    Poly poly;
  };

  Poly make_poly(NodeId center, std::span<const NodeId> members, std::span<const Edge> edges,
                 std::uint64_t stream) const;
  std::vector<double> weights(const Poly& poly, double p, std::vector<std::uint64_t>& reach) const;
  double evaluate(const Poly& poly, double p, const ScalarField& mu) const;

  const Graph* g_;
  std::size_t r_;
  LoopyMode mode_;
  std::vector<Node> nodes_;
  std::vector<Poly> messages_;
  std::size_t max_edges_ = 0;
  std::size_t overlap_edges_ = 0;
};

/// One-shot convenience wrapper.
LoopyPercolationResult loopy_percolation(const Graph& g, double p, std::size_t r, const FixedPointConfig& cfg = {},
                                         LoopyMode mode = LoopyMode::exact());

}  // namespace netmp
