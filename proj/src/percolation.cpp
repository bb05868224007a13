#include "netmp/percolation.hpp"

#include <algorithm>
#include <stdexcept>

namespace netmp {

namespace {

void check_p(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("occupation probability must lie in [0,1]");
}

}  // namespace

MessageSolution giant_component_messages(const Graph& g, const FixedPointConfig& cfg) {
  HalfEdgeIndex idx(g);
  MessageSolution sol{ScalarField(PayloadKind::probability, idx.num_directed()), {}};
  initialize(sol.messages, cfg.init.value_or(InitKind::random), cfg.seed);
  auto update = [&idx](EdgeId e, const ScalarField& mu, std::span<double> out) {
    double prod = 1.0;
    idx.for_each_successor(e, [&](EdgeId s) { prod *= mu.scalar(s); });
    out[0] = prod;
  };
  sol.report = iterate(update, sol.messages, cfg);
  return sol;
}

std::vector<bool> giant_component_membership(const Graph& g, const ScalarField& messages) {
  HalfEdgeIndex idx(g);
  std::vector<bool> in(g.num_nodes(), false);
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    double mu = 1.0;
    for (EdgeId e = idx.incoming_begin(i); e < idx.incoming_end(i); ++e) mu *= messages.scalar(e);
    in[i] = mu < 0.5;
  }
  return in;
}

std::vector<bool> giant_component_membership(const Graph& g, const FixedPointConfig& cfg) {
  return giant_component_membership(g, giant_component_messages(g, cfg).messages);
}

MessageSolution percolation_messages(const Graph& g, double p, const FixedPointConfig& cfg, const ScalarField* warm) {
  check_p(p);
  HalfEdgeIndex idx(g);
  MessageSolution sol{ScalarField(PayloadKind::probability, idx.num_directed()), {}};
  if (warm) {
    if (warm->num_edges() != idx.num_directed()) throw std::invalid_argument("warm-start field has wrong size");
    sol.messages = *warm;
  } else {
    initialize(sol.messages, cfg.init.value_or(InitKind::zeros), cfg.seed);
  }
  const double q = 1.0 - p;
  auto update = [&idx, p, q](EdgeId e, const ScalarField& mu, std::span<double> out) {
    double prod = 1.0;
    idx.for_each_successor(e, [&](EdgeId s) { prod *= q + p * mu.scalar(s); });
    out[0] = prod;
  };
  sol.report = iterate(update, sol.messages, cfg);
  return sol;
}

std::vector<double> percolation_node_probabilities(const Graph& g, const ScalarField& messages, double p) {
  check_p(p);
  HalfEdgeIndex idx(g);
  if (messages.num_edges() != idx.num_directed()) throw std::invalid_argument("message field has wrong size");
  std::vector<double> mu(g.num_nodes(), 1.0);
  for (NodeId i = 0; i < g.num_nodes(); ++i)
    for (EdgeId e = idx.incoming_begin(i); e < idx.incoming_end(i); ++e) mu[i] *= 1.0 - p + p * messages.scalar(e);
  return mu;
}

double giant_cluster_size(std::span<const double> node_probabilities) {
  if (node_probabilities.empty()) throw std::invalid_argument("giant cluster size of an empty graph is undefined");
  double sum = 0.0;
  for (double mu : node_probabilities) sum += mu;
  return std::clamp(1.0 - sum / static_cast<double>(node_probabilities.size()), 0.0, 1.0);
}

PercolationResult percolate(const Graph& g, double p, const FixedPointConfig& cfg) {
  if (g.num_nodes() == 0) throw std::invalid_argument("graph has no nodes");
  auto sol = percolation_messages(g, p, cfg);
  PercolationResult r;
  r.p = p;
  r.report = sol.report;
  r.node_probabilities = percolation_node_probabilities(g, sol.messages, p);
  r.giant_cluster_fraction = giant_cluster_size(r.node_probabilities);
  return r;
}

ThresholdResult percolation_threshold(const Graph& g, double tol, std::size_t max_iter) {
  ThresholdResult t;
  t.lambda = nb_leading_eigenvalue(g, tol, max_iter).lambda;
  if (t.lambda > 0.0) t.p_c = 1.0 / t.lambda;
  return t;
}

// Warm starts run from high p to low p. The update is monotone in mu and
// decreasing in p, so the fixed point found at a larger p lies entrywise below
// the smallest fixed point at a smaller p, and iteration from it climbs to
// exactly the point zero-init would reach. An upward warm start would instead
// stay stuck on the trivial all-ones solution once it had been found below p_c.
PercolationSweep sweep_percolation(const Graph& g, std::span<const double> p_grid, const FixedPointConfig& cfg,
                                   bool warm_start) {
  if (g.num_nodes() == 0) throw std::invalid_argument("graph has no nodes");
  for (double p : p_grid) check_p(p);
  if (!std::is_sorted(p_grid.begin(), p_grid.end())) throw std::invalid_argument("p grid must be ascending");

  PercolationSweep sweep;
  sweep.p.assign(p_grid.begin(), p_grid.end());
  sweep.points.resize(p_grid.size());

  std::optional<ScalarField> previous;
  for (std::size_t k = p_grid.size(); k-- > 0;) {
    const double p = p_grid[k];
    auto sol = percolation_messages(g, p, cfg, warm_start && previous ? &*previous : nullptr);
    auto& point = sweep.points[k];
    point.p = p;
    point.report = sol.report;
    point.node_probabilities = percolation_node_probabilities(g, sol.messages, p);
    point.giant_cluster_fraction = giant_cluster_size(point.node_probabilities);
    if (warm_start) previous = std::move(sol.messages);
  }
  return sweep;
}

}  // namespace netmp
