#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "netmp/graph.hpp"

namespace netmp {

using EdgeId = std::size_t;

// The 2m directed edges of a graph, receiver-major: directed edge e = (i <- j)
// lives in the block [offsets[i], offsets[i+1]) and its sender j is
// adjacency[e]. The non-backtracking successors of (i <- j) are the edges
// (j <- k), k != i, i.e. the block of j without rev(e), so the operator B is
// never materialized.
class HalfEdgeIndex {
 public:
  explicit HalfEdgeIndex(const Graph& g);

  std::size_t num_directed() const noexcept { return sender_.size(); }
  std::size_t num_nodes() const noexcept { return offsets_.size() - 1; }

  NodeId receiver(EdgeId e) const noexcept { return receiver_[e]; }
  NodeId sender(EdgeId e) const noexcept { return sender_[e]; }
  EdgeId rev(EdgeId e) const noexcept { return rev_[e]; }

  /// Directed edges (i <- j) for all neighbors j of i.
  EdgeId incoming_begin(NodeId i) const noexcept { return offsets_[i]; }
  EdgeId incoming_end(NodeId i) const noexcept { return offsets_[i + 1]; }
  std::size_t degree(NodeId i) const noexcept { return offsets_[i + 1] - offsets_[i]; }

  /// Successor range of e is [incoming_begin(sender(e)), incoming_end(sender(e)))
  /// with rev(e) skipped.
  template <class F>
  void for_each_successor(EdgeId e, F&& f) const {
    const NodeId j = sender_[e];
    const EdgeId skip = rev_[e];
    for (EdgeId s = offsets_[j]; s < offsets_[j + 1]; ++s)
      if (s != skip) f(s);
  }

  std::size_t num_successors(EdgeId e) const noexcept { return degree(sender_[e]) - 1; }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> receiver_;
  std::vector<NodeId> sender_;
  std::vector<EdgeId> rev_;
};

/// out = B v. Serial reference.
void nb_apply_serial(const HalfEdgeIndex& idx, std::span<const double> v, std::span<double> out);

/// out = B v, OpenMP-parallel gather over directed edges; bit-identical to the
/// serial reference for any thread count.
void nb_apply(const HalfEdgeIndex& idx, std::span<const double> v, std::span<double> out);

/// Dense 2m x 2m B, row-major. Test/debug helper for small graphs.
std::vector<double> nb_dense(const HalfEdgeIndex& idx);

struct EigenEstimate {
  double lambda = 0.0;
  std::size_t iterations = 0;
};

/// Leading (Perron) eigenvalue of B by power iteration from the all-ones
/// vector with L1 normalization. Returns 0 for forests (B nilpotent).
/// Throws std::invalid_argument if the graph has no edges and
/// ConvergenceError (carrying the last estimate) after max_iter steps.
EigenEstimate nb_leading_eigenvalue(const Graph& g, double tol = 1e-10, std::size_t max_iter = 100000);

}  // namespace netmp
