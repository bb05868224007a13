#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "netmp/graph.hpp"

namespace netmp {

/// G(n, p): each of the n(n-1)/2 pairs independently with probability p.
Graph generate_er(std::size_t n, double p, std::uint64_t seed);

/// Uniform-ish random d-regular simple graph by stub pairing; the whole
/// pairing is redrawn whenever it produces a self-loop or multi-edge.
Graph generate_regular(std::size_t n, std::size_t d, std::uint64_t seed);

struct PlantedGraph {
  Graph graph;
  std::vector<std::uint32_t> truth;  // group label per node
};

/// Stochastic block model with absolute pair probabilities omega (q*q, row-major).
PlantedGraph generate_sbm(std::size_t n, std::span<const double> priors,
                          std::span<const double> omega, std::uint64_t seed);

/// Uniform random labelled tree on n nodes (Pruefer sequence).
Graph generate_random_tree(std::size_t n, std::uint64_t seed);

/// Random graph in which every node sits in `triangles` triangles and has
/// `singles` extra single edges (triangle/stub matching with local repair).
/// Gives a locally tree-of-triangles graph with high clustering.
Graph generate_clustered(std::size_t n, std::size_t triangles, std::size_t singles,
                         std::uint64_t seed);

Graph make_complete(std::size_t n);
Graph make_cycle(std::size_t n);
Graph make_path(std::size_t n);
Graph make_star(std::size_t leaves);

}  // namespace netmp
