#include "netmp/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <omp.h>

#include "netmp/random.hpp"

namespace netmp::oracle {

namespace {

// Cluster labelling by BFS over occupied edges. `occupied(slot)` refers to
// positions in the adjacency array; both orientations of an edge share one
// decision through the `edge_of` map.
struct Clusters {
  std::vector<std::uint32_t> label;
  std::vector<std::uint32_t> size;
};

struct EdgeSlots {
  std::vector<std::size_t> edge_of;  // adjacency position -> undirected edge index
  std::size_t m = 0;

  explicit EdgeSlots(const Graph& g) : edge_of(g.adjacency().size()) {
    const auto off = g.offsets();
    const auto adj = g.adjacency();
    for (NodeId u = 0; u < g.num_nodes(); ++u)
      for (std::size_t s = off[u]; s < off[u + 1]; ++s) {
        const NodeId v = adj[s];
        if (u < v) {
          edge_of[s] = m++;
        } else {
          // matching slot in v's list already numbered
          auto first = adj.begin() + static_cast<std::ptrdiff_t>(off[v]);
          auto last = adj.begin() + static_cast<std::ptrdiff_t>(off[v + 1]);
          edge_of[s] = edge_of[static_cast<std::size_t>(std::lower_bound(first, last, u) - adj.begin())];
        }
      }
  }
};

template <class Occupied>
Clusters label_clusters(const Graph& g, const EdgeSlots& slots, Occupied&& occupied) {
  const std::size_t n = g.num_nodes();
  const auto off = g.offsets();
  const auto adj = g.adjacency();
  Clusters c;
  c.label.assign(n, UINT32_MAX);
  std::vector<NodeId> queue;
  for (NodeId s = 0; s < n; ++s) {
    if (c.label[s] != UINT32_MAX) continue;
    const auto id = static_cast<std::uint32_t>(c.size.size());
    c.label[s] = id;
    queue.assign(1, s);
    for (std::size_t h = 0; h < queue.size(); ++h) {
      const NodeId u = queue[h];
      for (std::size_t k = off[u]; k < off[u + 1]; ++k) {
        if (!occupied(slots.edge_of[k])) continue;
        const NodeId v = adj[k];
        if (c.label[v] == UINT32_MAX) {
          c.label[v] = id;
          queue.push_back(v);
        }
      }
    }
    c.size.push_back(static_cast<std::uint32_t>(queue.size()));
  }
  return c;
}

// Clusters are numbered in order of their smallest node, so the first
// maximum is the tie-break winner. Returns UINT32_MAX for a singleton maximum.
std::uint32_t largest_cluster(const Clusters& c) {
  if (c.size.empty()) return UINT32_MAX;
  auto it = std::max_element(c.size.begin(), c.size.end());
  if (*it < 2) return UINT32_MAX;
  return static_cast<std::uint32_t>(it - c.size.begin());
}

// One simulation rep: occupancy from the rep's own stream, in edge-index order.
std::size_t sim_rep(const Graph& g, const EdgeSlots& slots, double p, std::uint64_t seed, std::size_t rep,
                    std::vector<char>& occ, std::vector<std::uint32_t>& counts) {
  Rng rng(stream_seed(seed, rep));
  for (auto& o : occ) o = uniform01(rng) < p;
  auto c = label_clusters(g, slots, [&](std::size_t e) { return occ[e] != 0; });
  const auto big = largest_cluster(c);
  if (big == UINT32_MAX) return 0;
  for (NodeId v = 0; v < g.num_nodes(); ++v)
    if (c.label[v] == big) ++counts[v];
  return c.size[big];
}

SimStats finish(const Graph& g, std::size_t reps, std::uint64_t seed, const std::vector<std::uint64_t>& counts,
                const std::vector<std::size_t>& sizes) {
  SimStats st;
  st.reps = reps;
  st.seed = seed;
  const double n = static_cast<double>(g.num_nodes());
  st.membership.resize(g.num_nodes());
  for (std::size_t v = 0; v < counts.size(); ++v)
    st.membership[v] = static_cast<double>(counts[v]) / static_cast<double>(reps);
  double sum = 0.0;
  for (auto s : sizes) sum += static_cast<double>(s) / n;
  st.mean_s = sum / static_cast<double>(reps);
  if (reps > 1) {
    double ss = 0.0;
    for (auto s : sizes) ss += (static_cast<double>(s) / n - st.mean_s) * (static_cast<double>(s) / n - st.mean_s);
    st.std_error = std::sqrt(ss / static_cast<double>(reps - 1)) / std::sqrt(static_cast<double>(reps));
  }
  return st;
}

void check_sim(const Graph& g, double p, std::size_t reps) {
  if (g.num_nodes() == 0) throw std::invalid_argument("simulation on an empty graph");
  if (reps == 0) throw std::invalid_argument("reps must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("occupation probability must lie in [0,1]");
}

}  // namespace

SimStats percolation_sim_serial(const Graph& g, double p, std::size_t reps, std::uint64_t seed) {
  check_sim(g, p, reps);
  EdgeSlots slots(g);
  std::vector<char> occ(slots.m);
  std::vector<std::uint32_t> counts(g.num_nodes(), 0);
  std::vector<std::size_t> sizes(reps);
  for (std::size_t r = 0; r < reps; ++r) sizes[r] = sim_rep(g, slots, p, seed, r, occ, counts);
  return finish(g, reps, seed, std::vector<std::uint64_t>(counts.begin(), counts.end()), sizes);
}

SimStats percolation_sim(const Graph& g, double p, std::size_t reps, std::uint64_t seed, int threads) {
  check_sim(g, p, reps);
  if (threads == 1) return percolation_sim_serial(g, p, reps, seed);
  EdgeSlots slots(g);
  const std::size_t n = g.num_nodes();
  std::vector<std::size_t> sizes(reps);
  std::vector<std::uint64_t> total(n, 0);
  const int nt = threads > 0 ? threads : omp_get_max_threads();
  // Integer counts make the cross-thread reduction order-independent.
#pragma omp parallel num_threads(nt)
  {
    std::vector<char> occ(slots.m);
    std::vector<std::uint32_t> counts(n, 0);
    const auto count = static_cast<std::ptrdiff_t>(reps);
#pragma omp for schedule(static)
    for (std::ptrdiff_t r = 0; r < count; ++r)
      sizes[r] = sim_rep(g, slots, p, seed, static_cast<std::size_t>(r), occ, counts);
#pragma omp critical(netmp_sim_reduce)
    for (std::size_t v = 0; v < n; ++v) total[v] += counts[v];
  }
  return finish(g, reps, seed, total, sizes);
}

std::vector<double> tree_percolation_dp(const Graph& g, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("occupation probability must lie in [0,1]");
  const std::size_t n = g.num_nodes();
  std::vector<NodeId> parent(n, UINT32_MAX), order;
  std::vector<char> seen(n, 0);
  order.reserve(n);
  for (NodeId root = 0; root < n; ++root) {
    if (seen[root]) continue;
    seen[root] = 1;
    std::size_t head = order.size();
    order.push_back(root);
    for (; head < order.size(); ++head) {
      const NodeId u = order[head];
      for (NodeId v : g.neighbors(u)) {
        if (v == parent[u]) continue;
        if (seen[v]) throw std::invalid_argument("tree_percolation_dp: graph contains a cycle");
        seen[v] = 1;
        parent[v] = u;
        order.push_back(v);
      }
    }
  }
  const double q = 1.0 - p;
  // up[v]: message from v to its parent; down[v]: message from the parent to v.
  std::vector<double> up(n, 1.0), down(n, 1.0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodeId v = *it;
    double prod = 1.0;
    for (NodeId c : g.neighbors(v))
      if (c != parent[v]) prod *= q + p * up[c];
    up[v] = prod;
  }
  for (NodeId v : order) {
    for (NodeId c : g.neighbors(v)) {
      if (c == parent[v]) continue;
      double prod = parent[v] == UINT32_MAX ? 1.0 : q + p * down[v];
      for (NodeId k : g.neighbors(v))
        if (k != c && k != parent[v]) prod *= q + p * up[k];
      down[c] = prod;
    }
  }
  std::vector<double> mu(n);
  for (NodeId v = 0; v < n; ++v) {
    double prod = parent[v] == UINT32_MAX ? 1.0 : q + p * down[v];
    for (NodeId c : g.neighbors(v))
      if (c != parent[v]) prod *= q + p * up[c];
    mu[v] = prod;
  }
  return mu;
}

IsingExact ising_enumerate(const Graph& g, double beta) {
  const std::size_t n = g.num_nodes();
  if (n > 20) throw std::invalid_argument("ising_enumerate supports n <= 20");
  const auto edges = g.edges();
  const std::uint64_t states = 1ull << n;
  // log weights, then a max-shifted sum
  std::vector<double> logw(states);
  double top = -std::numeric_limits<double>::infinity();
  for (std::uint64_t s = 0; s < states; ++s) {
    long aligned = 0;
    for (auto [u, v] : edges) aligned += (((s >> u) ^ (s >> v)) & 1u) ? -1 : 1;
    logw[s] = beta * static_cast<double>(aligned);
    top = std::max(top, logw[s]);
  }
  double z = 0.0;
  std::vector<double> up(n, 0.0);
  for (std::uint64_t s = 0; s < states; ++s) {
    const double w = std::exp(logw[s] - top);
    z += w;
    for (std::size_t i = 0; i < n; ++i)
      if ((s >> i) & 1u) up[i] += w;
  }
  IsingExact out;
  out.log_z = top + std::log(z);
  out.marginals.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.marginals[i] = {up[i] / z, 1.0 - up[i] / z};
  return out;
}

std::vector<std::vector<double>> sbm_posterior_enumerate(const Graph& g, const SBMParams& params) {
  params.validate();
  const std::size_t n = g.num_nodes(), q = params.q;
  double states_d = std::pow(static_cast<double>(q), static_cast<double>(n));
  if (states_d > static_cast<double>(1u << 20)) throw std::invalid_argument("q^n exceeds the enumeration cap");
  const auto states = static_cast<std::size_t>(states_d);

  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (auto [u, v] : g.edges()) adj[u][v] = adj[v][u] = 1;

  std::vector<std::size_t> s(n);
  std::vector<double> logw(states);
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t code = 0; code < states; ++code) {
    std::size_t c = code;
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = c % q;
      c /= q;
    }
    double lw = 0.0;
    for (std::size_t i = 0; i < n; ++i) lw += std::log(params.priors[s[i]]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double w = params.omega[s[i] * q + s[j]];
        lw += std::log(adj[i][j] ? w : 1.0 - w);
      }
    logw[code] = lw;
    top = std::max(top, lw);
  }
  if (!std::isfinite(top)) throw std::invalid_argument("posterior has no support");
  std::vector<std::vector<double>> marg(n, std::vector<double>(q, 0.0));
  double z = 0.0;
  for (std::size_t code = 0; code < states; ++code) {
    const double w = std::exp(logw[code] - top);
    z += w;
    std::size_t c = code;
    for (std::size_t i = 0; i < n; ++i) {
      marg[i][c % q] += w;
      c /= q;
    }
  }
  for (auto& m : marg)
    for (double& x : m) x /= z;
  return marg;
}

BruteForcePercolation brute_percolation_enumerate(const Graph& g, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("occupation probability must lie in [0,1]");
  const std::size_t n = g.num_nodes();
  if (n == 0) throw std::invalid_argument("enumeration on an empty graph");
  EdgeSlots slots(g);
  if (slots.m > 20) throw std::invalid_argument("brute_percolation_enumerate supports m <= 20");
  BruteForcePercolation out;
  out.membership.assign(n, 0.0);
  const std::uint64_t configs = 1ull << slots.m;
  for (std::uint64_t mask = 0; mask < configs; ++mask) {
    const auto occ = static_cast<std::size_t>(__builtin_popcountll(mask));
    const double w = std::pow(p, static_cast<double>(occ)) * std::pow(1.0 - p, static_cast<double>(slots.m - occ));
    if (w == 0.0) continue;
    auto c = label_clusters(g, slots, [mask](std::size_t e) { return (mask >> e) & 1u; });
    const auto big = largest_cluster(c);
    if (big == UINT32_MAX) continue;
    for (NodeId v = 0; v < n; ++v)
      if (c.label[v] == big) out.membership[v] += w;
  }
  out.s = std::accumulate(out.membership.begin(), out.membership.end(), 0.0) / static_cast<double>(n);
  return out;
}

}  // namespace netmp::oracle
