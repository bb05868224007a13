#include "netmp/loopy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "netmp/random.hpp"

namespace netmp {

namespace {

constexpr std::size_t kMaxMembers = 63;

Edge ordered(NodeId a, NodeId b) { return a < b ? Edge{a, b} : Edge{b, a}; }

void check_r(std::size_t r) {
  if (r < 2) throw std::invalid_argument("cycle length bound r must be >= 2");
}

struct CycleSearch {
  const Graph& g;
  NodeId root;
  std::size_t r;
  std::vector<NodeId> walk;
  std::set<Edge> used;
  // edge set -> smallest canonical walk
  std::map<std::vector<Edge>, std::vector<NodeId>> found;

  void dfs(NodeId v) {
    for (NodeId w : g.neighbors(v)) {
      const Edge e = ordered(v, w);
      if (used.count(e)) continue;
      if (w == root) {
        if (walk.size() < 3 || walk[1] > walk.back()) continue;
        used.insert(e);
        std::vector<Edge> key(used.begin(), used.end());
        used.erase(e);
        auto it = found.find(key);
        if (it == found.end() || walk < it->second) found[key] = walk;
        continue;
      }
      if (walk.size() == r) continue;  // closing edge would make it longer than r
      used.insert(e);
      walk.push_back(w);
      dfs(w);
      walk.pop_back();
      used.erase(e);
    }
  }
};

// Local ids: 0 is the center, members are 1..M in sorted order.
std::uint8_t local_id(NodeId center, std::span<const NodeId> members, NodeId v) {
  if (v == center) return 0;
  auto it = std::lower_bound(members.begin(), members.end(), v);
  return static_cast<std::uint8_t>(1 + (it - members.begin()));
}

// Bit b of the result: member b+1 reachable from the center.
template <class Occupied>
std::uint64_t reach_mask(std::span<const std::pair<std::uint8_t, std::uint8_t>> edges, Occupied&& occupied) {
  std::uint64_t reach = 1;  // local id 0
  bool grown = true;
  while (grown) {
    grown = false;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const std::uint64_t a = 1ull << edges[e].first, b = 1ull << edges[e].second;
      if (((reach & a) != 0) != ((reach & b) != 0) && occupied(e)) {
        reach |= a | b;
        grown = true;
      }
    }
  }
  return reach >> 1;
}

std::vector<std::pair<std::uint8_t, std::uint8_t>> localize(NodeId center, std::span<const NodeId> members,
                                                           std::span<const Edge> edges) {
  if (members.size() > kMaxMembers) throw std::invalid_argument("neighborhood has more than 63 member nodes");
  std::vector<std::pair<std::uint8_t, std::uint8_t>> out;
  out.reserve(edges.size());
  for (auto [u, v] : edges) out.emplace_back(local_id(center, members, u), local_id(center, members, v));
  return out;
}

std::vector<bool> sigma(NodeId center, std::span<const NodeId> members, std::span<const Edge> edges,
                        EdgeConfiguration config) {
  if (edges.size() > 64) throw std::invalid_argument("configuration masks cover at most 64 edges");
  auto local = localize(center, members, edges);
  const std::uint64_t reach = reach_mask(local, [&](std::size_t e) { return (config.mask >> e) & 1u; });
  std::vector<bool> out(members.size());
  for (std::size_t b = 0; b < members.size(); ++b) out[b] = (reach >> b) & 1u;
  return out;
}

}  // namespace

std::vector<std::vector<NodeId>> primitive_cycles(const Graph& g, NodeId i, std::size_t r) {
  check_r(r);
  if (i >= g.num_nodes()) throw std::out_of_range("node id out of range");
  CycleSearch search{g, i, r, {i}, {}, {}};
  search.dfs(i);

  std::vector<std::vector<NodeId>> cycles;
  for (auto& [key, walk] : search.found) cycles.push_back(walk);
  std::sort(cycles.begin(), cycles.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });

  std::set<Edge> covered;  // edges of kept cycles strictly shorter than the current length
  std::vector<Edge> pending;
  std::vector<std::vector<NodeId>> kept;
  std::size_t current = 0;
  for (auto& c : cycles) {
    if (c.size() != current) {
      covered.insert(pending.begin(), pending.end());
      pending.clear();
      current = c.size();
    }
    bool fresh = false;
    for (std::size_t t = 0; t < c.size(); ++t) {
      const Edge e = ordered(c[t], c[(t + 1) % c.size()]);
      if (!covered.count(e)) fresh = true;
    }
    if (!fresh) continue;
    for (std::size_t t = 0; t < c.size(); ++t) pending.push_back(ordered(c[t], c[(t + 1) % c.size()]));
    kept.push_back(std::move(c));
  }
  return kept;
}

Neighborhood build_neighborhood(const Graph& g, NodeId i, std::size_t r) {
  check_r(r);
  Neighborhood nb;
  nb.center = i;
  nb.r = r;
  std::set<NodeId> nodes(g.neighbors(i).begin(), g.neighbors(i).end());
  std::set<Edge> edges;
  for (NodeId j : g.neighbors(i)) edges.insert(ordered(i, j));
  if (r >= 3) {
    for (const auto& c : primitive_cycles(g, i, r))
      for (std::size_t t = 0; t < c.size(); ++t) {
        if (c[t] != i) nodes.insert(c[t]);
        edges.insert(ordered(c[t], c[(t + 1) % c.size()]));
      }
  }
  nb.nodes.assign(nodes.begin(), nodes.end());
  nb.internal_edges.assign(edges.begin(), edges.end());
  return nb;
}

MessageNeighborhood build_message_neighborhood(const Neighborhood& ni, const Neighborhood& nj) {
  MessageNeighborhood m;
  m.receiver = ni.center;
  m.sender = nj.center;
  const NodeId i = ni.center, j = nj.center;
  auto in_ni = [&](NodeId v) {
    return v == i || std::binary_search(ni.nodes.begin(), ni.nodes.end(), v);
  };
  for (NodeId v : nj.nodes)
    if (!in_ni(v)) m.nodes.push_back(v);
  for (const Edge& e : nj.internal_edges) {
    if (std::binary_search(ni.internal_edges.begin(), ni.internal_edges.end(), e)) continue;
    const bool a_ok = e.first == j || !in_ni(e.first);
    const bool b_ok = e.second == j || !in_ni(e.second);
    if (a_ok && b_ok)
      m.edges.push_back(e);
    else
      ++m.overlap_edges;
  }
  return m;
}

std::vector<bool> reachability(const Neighborhood& nb, EdgeConfiguration config) {
  return sigma(nb.center, nb.nodes, nb.internal_edges, config);
}

std::vector<bool> reachability(const MessageNeighborhood& nb, EdgeConfiguration config) {
  return sigma(nb.sender, nb.nodes, nb.edges, config);
}

LoopyPercolation::LoopyPercolation(const Graph& g, std::size_t r, LoopyMode mode) : g_(&g), r_(r), mode_(mode) {
  check_r(r);
  if (mode.kind == LoopyMode::Kind::monte_carlo && mode.samples == 0)
    throw std::invalid_argument("monte carlo mode needs at least one sample");
  const std::size_t n = g.num_nodes();
  nodes_.resize(n);

  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t v = 0; v < count; ++v) nodes_[v].nb = build_neighborhood(g, static_cast<NodeId>(v), r);

  EdgeId next = 0;
  for (auto& node : nodes_) {
    node.first = next;
    next += node.nb.nodes.size();
  }

  std::vector<MessageNeighborhood> mnbs(next);
  for (NodeId i = 0; i < n; ++i)
    for (std::size_t t = 0; t < nodes_[i].nb.nodes.size(); ++t) {
      const NodeId j = nodes_[i].nb.nodes[t];
      mnbs[nodes_[i].first + t] = build_message_neighborhood(nodes_[i].nb, nodes_[j].nb);
    }
  for (const auto& m : mnbs) overlap_edges_ += m.overlap_edges;
  for (const auto& node : nodes_) max_edges_ = std::max(max_edges_, node.nb.internal_edges.size());
  for (const auto& m : mnbs) max_edges_ = std::max(max_edges_, m.edges.size());
  if (mode.kind == LoopyMode::Kind::exact && max_edges_ > kExactEdgeCap)
    throw std::invalid_argument("a neighborhood has " + std::to_string(max_edges_) +
                                " edges, above the exact-enumeration cap of 22; use monte carlo mode");

  messages_.resize(next);
  const auto total = static_cast<std::ptrdiff_t>(n + next);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t s = 0; s < total; ++s) {
    const auto stream = static_cast<std::uint64_t>(s);
    if (static_cast<std::size_t>(s) < n) {
      auto& node = nodes_[s];
      node.poly = make_poly(node.nb.center, node.nb.nodes, node.nb.internal_edges, stream);
      for (std::size_t t = 0; t < node.nb.nodes.size(); ++t) node.poly.inputs[t] = node.first + t;
    } else {
      const EdgeId e = static_cast<EdgeId>(s) - n;
      const auto& m = mnbs[e];
      Poly poly = make_poly(m.sender, m.nodes, m.edges, stream);
      const auto& nj = nodes_[m.sender];
      for (std::size_t b = 0; b < m.nodes.size(); ++b) {
        auto it = std::lower_bound(nj.nb.nodes.begin(), nj.nb.nodes.end(), m.nodes[b]);
        poly.inputs[b] = nj.first + static_cast<EdgeId>(it - nj.nb.nodes.begin());
      }
      messages_[e] = std::move(poly);
    }
  }
}

LoopyPercolation::Poly LoopyPercolation::make_poly(NodeId center, std::span<const NodeId> members,
                                                   std::span<const Edge> edges, std::uint64_t stream) const {
  Poly poly;
  poly.k = edges.size();
  poly.inputs.assign(members.size(), 0);
  poly.local_edges = localize(center, members, edges);
  if (mode_.kind == LoopyMode::Kind::monte_carlo) {
    Rng rng(stream_seed(mode_.seed, stream));
    poly.uniforms.resize(mode_.samples * poly.k);
    for (double& u : poly.uniforms) u = uniform01(rng);
    return poly;
  }
  std::unordered_map<std::uint64_t, std::vector<double>> hist;
  const std::uint64_t configs = 1ull << poly.k;
  for (std::uint64_t mask = 0; mask < configs; ++mask) {
    const std::uint64_t reach = reach_mask(poly.local_edges, [mask](std::size_t e) { return (mask >> e) & 1u; });
    auto& h = hist[reach];
    if (h.empty()) h.assign(poly.k + 1, 0.0);
    h[static_cast<std::size_t>(__builtin_popcountll(mask))] += 1.0;
  }
  std::vector<std::uint64_t> keys;
  for (auto& kv : hist) keys.push_back(kv.first);
  std::sort(keys.begin(), keys.end());
  for (auto key : keys) {
    poly.reach.push_back(key);
    poly.hist.push_back(std::move(hist[key]));
  }
  return poly;
}

std::vector<double> LoopyPercolation::weights(const Poly& poly, double p, std::vector<std::uint64_t>& reach) const {
  std::vector<double> w;
  if (mode_.kind == LoopyMode::Kind::exact) {
    reach = poly.reach;
    std::vector<double> pm(poly.k + 1);
    for (std::size_t m = 0; m <= poly.k; ++m)
      pm[m] = std::pow(p, static_cast<double>(m)) * std::pow(1.0 - p, static_cast<double>(poly.k - m));
    for (const auto& h : poly.hist) {
      double acc = 0.0;
      for (std::size_t m = 0; m <= poly.k; ++m) acc += h[m] * pm[m];
      w.push_back(acc);
    }
    return w;
  }
  std::map<std::uint64_t, double> acc;
  const double share = 1.0 / static_cast<double>(mode_.samples);
  for (std::size_t s = 0; s < mode_.samples; ++s) {
    const double* u = poly.uniforms.data() + s * poly.k;
    acc[reach_mask(poly.local_edges, [u, p](std::size_t e) { return u[e] < p; })] += share;
  }
  reach.clear();
  for (auto& [key, weight] : acc) {
    reach.push_back(key);
    w.push_back(weight);
  }
  return w;
}

namespace {

struct Terms {
  std::vector<std::uint64_t> reach;
  std::vector<double> weight;
};

double evaluate_terms(const Terms& t, std::span<const EdgeId> inputs, const ScalarField& mu) {
  double total = 0.0;
  for (std::size_t k = 0; k < t.reach.size(); ++k) {
    double prod = t.weight[k];
    for (std::uint64_t bits = t.reach[k]; bits; bits &= bits - 1) prod *= mu.scalar(inputs[__builtin_ctzll(bits)]);
    total += prod;
  }
  return total;
}

}  // namespace

double LoopyPercolation::evaluate(const Poly& poly, double p, const ScalarField& mu) const {
  Terms t;
  t.weight = weights(poly, p, t.reach);
  return evaluate_terms(t, poly.inputs, mu);
}

MessageSolution LoopyPercolation::messages(double p, const FixedPointConfig& cfg, const ScalarField* warm) const {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("occupation probability must lie in [0,1]");
  MessageSolution sol{ScalarField(PayloadKind::probability, messages_.size()), {}};
  if (warm) {
    if (warm->num_edges() != messages_.size()) throw std::invalid_argument("warm-start field has wrong size");
    sol.messages = *warm;
  } else {
    initialize(sol.messages, cfg.init.value_or(InitKind::zeros), cfg.seed);
  }
  std::vector<Terms> terms(messages_.size());
  for (std::size_t e = 0; e < messages_.size(); ++e) terms[e].weight = weights(messages_[e], p, terms[e].reach);
  auto update = [this, &terms](EdgeId e, const ScalarField& mu, std::span<double> out) {
    out[0] = evaluate_terms(terms[e], messages_[e].inputs, mu);
  };
  sol.report = iterate(update, sol.messages, cfg);
  return sol;
}

std::vector<double> LoopyPercolation::node_probabilities(double p, const ScalarField& mu) const {
  if (mu.num_edges() != messages_.size()) throw std::invalid_argument("message field has wrong size");
  std::vector<double> out(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) out[i] = std::clamp(evaluate(nodes_[i].poly, p, mu), 0.0, 1.0);
  return out;
}

LoopyPercolationResult LoopyPercolation::solve(double p, const FixedPointConfig& cfg, const ScalarField* warm) const {
  if (nodes_.empty()) throw std::invalid_argument("graph has no nodes");
  auto sol = messages(p, cfg, warm);
  LoopyPercolationResult r;
  r.p = p;
  r.report = sol.report;
  r.node_probabilities = node_probabilities(p, sol.messages);
  r.giant_cluster_fraction = giant_cluster_size(r.node_probabilities);
  r.max_neighborhood_edges = max_edges_;
  r.overlap_edges = overlap_edges_;
  return r;
}

std::vector<LoopyPercolationResult> LoopyPercolation::sweep(std::span<const double> p_grid,
                                                            const FixedPointConfig& cfg) const {
  if (!std::is_sorted(p_grid.begin(), p_grid.end())) throw std::invalid_argument("p grid must be ascending");
  std::vector<LoopyPercolationResult> out(p_grid.size());
  std::optional<ScalarField> previous;
  for (std::size_t k = p_grid.size(); k-- > 0;) {
    auto sol = messages(p_grid[k], cfg, previous ? &*previous : nullptr);
    auto& r = out[k];
    r.p = p_grid[k];
    r.report = sol.report;
    r.node_probabilities = node_probabilities(p_grid[k], sol.messages);
    r.giant_cluster_fraction = giant_cluster_size(r.node_probabilities);
    r.max_neighborhood_edges = max_edges_;
    r.overlap_edges = overlap_edges_;
    previous = std::move(sol.messages);
  }
  return out;
}

LoopyPercolationResult loopy_percolation(const Graph& g, double p, std::size_t r, const FixedPointConfig& cfg,
                                         LoopyMode mode) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("occupation probability must lie in [0,1]");
  return LoopyPercolation(g, r, mode).solve(p, cfg);
}

}  // namespace netmp
