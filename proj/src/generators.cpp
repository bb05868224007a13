#include "netmp/generators.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "netmp/random.hpp"

namespace netmp {

namespace {

template <class T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_below(rng, i)]);
}

Edge ordered(NodeId a, NodeId b) { return a < b ? Edge{a, b} : Edge{b, a}; }

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(what) + " must lie in [0,1]");
}

}  // namespace

Graph generate_er(std::size_t n, double p, std::uint64_t seed) {
  check_probability(p, "edge probability");
  Rng rng(seed);
  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j)
      if (uniform01(rng) < p) edges.emplace_back(i, j);
  return Graph::from_edges(n, edges);
}

Graph generate_regular(std::size_t n, std::size_t d, std::uint64_t seed) {
  if ((n * d) % 2 != 0) throw std::invalid_argument("n*d must be even for a d-regular graph");
  if (d >= n && !(n == 0 && d == 0)) throw std::invalid_argument("degree must be smaller than n");
  Rng rng(seed);

  std::vector<NodeId> stubs;
  stubs.reserve(n * d);
  for (NodeId i = 0; i < n; ++i) stubs.insert(stubs.end(), d, i);

  constexpr int kMaxAttempts = 100000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    shuffle(stubs, rng);
    std::vector<Edge> edges;
    edges.reserve(stubs.size() / 2);
    bool simple = true;
    for (std::size_t k = 0; k < stubs.size() && simple; k += 2) {
      if (stubs[k] == stubs[k + 1]) simple = false;
      edges.push_back(ordered(stubs[k], stubs[k + 1]));
    }
    if (!simple) continue;
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) continue;
    return Graph::from_edges(n, edges);
  }
  throw std::runtime_error("stub pairing failed to produce a simple graph; degree too large for rejection sampling");
}

PlantedGraph generate_sbm(std::size_t n, std::span<const double> priors, std::span<const double> omega,
                          std::uint64_t seed) {
  const std::size_t q = priors.size();
  if (q == 0) throw std::invalid_argument("need at least one group");
  if (omega.size() != q * q) throw std::invalid_argument("omega must be q*q");
  double total = 0.0;
  for (double pr : priors) {
    check_probability(pr, "prior");
    total += pr;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("priors must sum to 1");
  for (std::size_t r = 0; r < q; ++r)
    for (std::size_t s = 0; s < q; ++s) {
      check_probability(omega[r * q + s], "omega entry");
      if (omega[r * q + s] != omega[s * q + r]) throw std::invalid_argument("omega must be symmetric");
    }

  Rng rng(seed);
  PlantedGraph out;
  out.truth.resize(n);
  for (auto& label : out.truth) {
    double u = uniform01(rng), acc = 0.0;
    std::uint32_t g = 0;
    for (; g + 1 < q; ++g) {
      acc += priors[g];
      if (u < acc) break;
    }
    label = g;
  }
  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j)
      if (uniform01(rng) < omega[out.truth[i] * q + out.truth[j]]) edges.emplace_back(i, j);
  out.graph = Graph::from_edges(n, edges);
  return out;
}

Graph generate_random_tree(std::size_t n, std::uint64_t seed) {
  if (n <= 1) return Graph::from_edges(n, {});
  if (n == 2) {
    Edge e{0, 1};
    return Graph::from_edges(2, std::span<const Edge>(&e, 1));
  }
  Rng rng(seed);
  std::vector<NodeId> prufer(n - 2);
  for (auto& x : prufer) x = static_cast<NodeId>(uniform_below(rng, n));

  std::vector<std::size_t> degree(n, 1);
  for (NodeId x : prufer) ++degree[x];
  std::set<NodeId> leaves;
  for (NodeId i = 0; i < n; ++i)
    if (degree[i] == 1) leaves.insert(i);

  std::vector<Edge> edges;
  for (NodeId x : prufer) {
    NodeId leaf = *leaves.begin();
    leaves.erase(leaves.begin());
    edges.emplace_back(leaf, x);
    if (--degree[x] == 1) leaves.insert(x);
  }
  NodeId a = *leaves.begin();
  NodeId b = *std::next(leaves.begin());
  edges.emplace_back(a, b);
  return Graph::from_edges(n, edges);
}

Graph generate_clustered(std::size_t n, std::size_t triangles, std::size_t singles, std::uint64_t seed) {
  if ((n * triangles) % 3 != 0) throw std::invalid_argument("n*triangles must be divisible by 3");
  if ((n * singles) % 2 != 0) throw std::invalid_argument("n*singles must be even");
  if (2 * triangles + singles >= n) throw std::invalid_argument("requested degree too large for n");
  Rng rng(seed);

  constexpr int kMaxRestarts = 1000;
  constexpr int kMaxRepairs = 200;
  for (int restart = 0; restart < kMaxRestarts; ++restart) {
    std::set<Edge> used;
    auto fits = [&used](std::span<const NodeId> group) {
      for (std::size_t a = 0; a < group.size(); ++a)
        for (std::size_t b = a + 1; b < group.size(); ++b)
          if (group[a] == group[b] || used.count(ordered(group[a], group[b]))) return false;
      return true;
    };
    auto place = [&](std::vector<NodeId>& stubs, std::size_t width) {
      shuffle(stubs, rng);
      for (std::size_t start = 0; start < stubs.size(); start += width) {
        int repairs = 0;
        while (!fits(std::span<const NodeId>(stubs).subspan(start, width))) {
          if (++repairs > kMaxRepairs || start + width >= stubs.size()) return false;
          // Swap a random member of this group with a random stub further on.
          std::size_t a = start + uniform_below(rng, width);
          std::size_t b = start + width + uniform_below(rng, stubs.size() - start - width);
          std::swap(stubs[a], stubs[b]);
        }
        for (std::size_t a = start; a < start + width; ++a)
          for (std::size_t b = a + 1; b < start + width; ++b) used.insert(ordered(stubs[a], stubs[b]));
      }
      return true;
    };

    std::vector<NodeId> corners, stubs;
    for (NodeId i = 0; i < n; ++i) {
      corners.insert(corners.end(), triangles, i);
      stubs.insert(stubs.end(), singles, i);
    }
    if (!place(corners, 3) || !place(stubs, 2)) continue;
    std::vector<Edge> edges(used.begin(), used.end());
    return Graph::from_edges(n, edges);
  }
  throw std::runtime_error("clustered generator failed; parameters too dense");
}

Graph make_complete(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Graph::from_edges(n, e);
}

Graph make_cycle(std::size_t n) {
  if (n < 3) throw std::invalid_argument("cycle needs at least 3 nodes");
  std::vector<Edge> e;
  for (NodeId i = 0; i < n; ++i) e.emplace_back(i, static_cast<NodeId>((i + 1) % n));
  return Graph::from_edges(n, e);
}

Graph make_path(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph::from_edges(n, e);
}

Graph make_star(std::size_t leaves) {
  std::vector<Edge> e;
  for (NodeId i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return Graph::from_edges(leaves + 1, e);
}

}  // namespace netmp
