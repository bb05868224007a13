#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "netmp/generators.hpp"
#include "netmp/graph.hpp"
#include "netmp/random.hpp"

namespace netmp::test {

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

inline Graph graph_of(std::size_t n, std::initializer_list<Edge> edges) {
  std::vector<Edge> e(edges);
  return Graph::from_edges(n, e);
}

inline std::vector<NodeId> random_perm(std::size_t n, std::uint64_t seed) {
  std::vector<NodeId> p(n);
  for (NodeId i = 0; i < n; ++i) p[i] = i;
  Rng rng(seed);
  for (std::size_t k = n; k > 1; --k) std::swap(p[k - 1], p[uniform_below(rng, k)]);
  return p;
}

// Greedily keeps edges whose endpoints are at distance >= 4 among the kept
// edges, so the result has no cycle shorter than 5.
inline Graph girth_at_least_5(const Graph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<std::vector<NodeId>> adj(n);
  std::vector<Edge> kept;
  auto close = [&](NodeId u, NodeId v) {
    for (NodeId a : adj[u]) {
      if (a == v) return true;
      for (NodeId b : adj[a]) {
        if (b == v) return true;
        for (NodeId c : adj[b])
          if (c == v) return true;
      }
    }
    return false;
  };
  for (auto [u, v] : g.edges())
    if (!close(u, v)) {
      adj[u].push_back(v);
      adj[v].push_back(u);
      kept.emplace_back(u, v);
    }
  return Graph::from_edges(n, kept);
}

}  // namespace netmp::test
