#include "netmp/half_edge.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "netmp/errors.hpp"

namespace netmp {

HalfEdgeIndex::HalfEdgeIndex(const Graph& g)
    : offsets_(g.offsets().begin(), g.offsets().end()),
      receiver_(g.adjacency().size()),
      sender_(g.adjacency().begin(), g.adjacency().end()),
      rev_(g.adjacency().size()) {
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    for (EdgeId e = offsets_[i]; e < offsets_[i + 1]; ++e) {
      receiver_[e] = i;
      const NodeId j = sender_[e];
      auto nb = g.neighbors(j);
      auto pos = std::lower_bound(nb.begin(), nb.end(), i);
      rev_[e] = offsets_[j] + static_cast<std::size_t>(pos - nb.begin());
    }
  }
}

namespace {

void check_lengths(const HalfEdgeIndex& idx, std::span<const double> v, std::span<double> out) {
  if (v.size() != idx.num_directed() || out.size() != idx.num_directed())
    throw std::invalid_argument("vector length must equal the number of directed edges");
}

inline double gather(const HalfEdgeIndex& idx, std::span<const double> v, EdgeId e) {
  double acc = 0.0;
  idx.for_each_successor(e, [&](EdgeId s) { acc += v[s]; });
  return acc;
}

}  // namespace

void nb_apply_serial(const HalfEdgeIndex& idx, std::span<const double> v, std::span<double> out) {
  check_lengths(idx, v, out);
  for (EdgeId e = 0; e < idx.num_directed(); ++e) out[e] = gather(idx, v, e);
}

void nb_apply(const HalfEdgeIndex& idx, std::span<const double> v, std::span<double> out) {
  check_lengths(idx, v, out);
  const auto count = static_cast<std::ptrdiff_t>(idx.num_directed());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t e = 0; e < count; ++e) out[e] = gather(idx, v, static_cast<EdgeId>(e));
}

std::vector<double> nb_dense(const HalfEdgeIndex& idx) {
  const std::size_t dim = idx.num_directed();
  std::vector<double> b(dim * dim, 0.0);
  // B_{i<-j, k<-l} = delta_{jk} (1 - delta_{il}), written from the definition.
  for (EdgeId row = 0; row < dim; ++row)
    for (EdgeId col = 0; col < dim; ++col)
      if (idx.sender(row) == idx.receiver(col) && idx.receiver(row) != idx.sender(col)) b[row * dim + col] = 1.0;
  return b;
}

EigenEstimate nb_leading_eigenvalue(const Graph& g, double tol, std::size_t max_iter) {
  if (g.num_edges() == 0) throw std::invalid_argument("non-backtracking eigenvalue needs at least one edge");
  if (is_forest(g)) return {0.0, 0};

  // Power iteration on B + I: the shift leaves the Perron vector unchanged but
  // makes its eigenvalue strictly dominant in modulus, so bipartite (periodic)
  // B no longer makes the L1 ratio oscillate.
  HalfEdgeIndex idx(g);
  const std::size_t dim = idx.num_directed();
  std::vector<double> v(dim, 1.0 / static_cast<double>(dim)), bv(dim);
  double estimate = 0.0;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    nb_apply(idx, v, bv);
    double bv_norm = 0.0;
    for (double x : bv) bv_norm += x;  // entries are nonnegative
    if (bv_norm == 0.0) return {0.0, it};
    const double next = bv_norm;  // ||v||_1 == 1
    double shifted_norm = bv_norm + 1.0;
    for (std::size_t k = 0; k < dim; ++k) v[k] = (bv[k] + v[k]) / shifted_norm;
    if (it > 1 && std::abs(next - estimate) < tol) return {next, it};
    estimate = next;
  }
  throw ConvergenceError("non-backtracking power iteration did not converge", estimate);
}

}  // namespace netmp
