#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace netmp {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

// Immutable simple undirected graph in offset + sorted neighbor-list layout.
// Node ids are 0..n-1. Every undirected edge appears twice in `neighbors`.
class Graph {
 public:
  Graph() : offsets_{0} {}

  /// Builds from an edge list. Self-loops are dropped and duplicates (in either
  /// orientation) collapse; `n` is raised to max id + 1 when needed.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges);

  std::size_t num_nodes() const noexcept { return offsets_.size() - 1; }
  std::size_t num_edges() const noexcept { return neighbors_.size() / 2; }
  std::size_t degree(NodeId i) const noexcept { return offsets_[i + 1] - offsets_[i]; }

  std::span<const NodeId> neighbors(NodeId i) const noexcept {
    return {neighbors_.data() + offsets_[i], degree(i)};
  }
  bool has_edge(NodeId i, NodeId j) const noexcept;

  std::span<const std::size_t> offsets() const noexcept { return offsets_; }
  std::span<const NodeId> adjacency() const noexcept { return neighbors_; }

  /// Edges with u < v, sorted lexicographically.
  std::vector<Edge> edges() const;

  bool operator==(const Graph&) const = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> neighbors_;
};

struct EdgeListLoad {
  Graph graph;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_dropped = 0;
};

/// Parses whitespace-separated "u v" lines; `#` starts a comment.
/// Throws ParseError on malformed tokens.
EdgeListLoad load_edge_list(std::string_view text);
EdgeListLoad load_edge_list_file(const std::string& path);

/// Canonical export: one "u v" line per edge, u < v, lexicographic order.
std::string write_edge_list(const Graph& g);

/// 64-bit FNV-1a of the canonical export, prefixed by the node count so that
/// isolated trailing nodes change the hash.
std::uint64_t graph_hash(const Graph& g);

struct Components {
  std::vector<std::uint32_t> label;  // per node; labels numbered by smallest member id
  std::vector<std::size_t> sizes;    // indexed by label
  std::uint32_t largest = 0;         // ties go to the smallest label
};

Components components(const Graph& g);

/// Relabels nodes: new id of node i is perm[i].
Graph permute(const Graph& g, std::span<const NodeId> perm);

bool is_forest(const Graph& g);

}  // namespace netmp
