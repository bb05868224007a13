// Symmetric eigenvalues by Jacobi rotations. Both variants use the rotation
// t = sgn(theta) / (|theta| + sqrt(theta^2 + 1)), theta = (a_qq - a_pp) / (2 a_pq),
// applied as A <- J^T A J with rows p' = c p - s q, q' = s p + c q.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <omp.h>

#include "netmp/errors.hpp"
#include "netmp/oracles.hpp"

namespace netmp::oracle {

namespace {

constexpr double kRelTol = 1e-10;
constexpr int kMaxSweeps = 100;

struct Rotation {
  std::size_t p, q;
  double c, s;
};

bool rotation_for(const std::vector<double>& a, std::size_t n, std::size_t p, std::size_t q, Rotation& r) {
  const double apq = a[p * n + q];
  if (apq == 0.0) return false;
  const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  r.p = p;
  r.q = q;
  r.c = 1.0 / std::sqrt(t * t + 1.0);
  r.s = t * r.c;
  return true;
}

inline void rotate_rows(std::vector<double>& a, std::size_t n, const Rotation& r) {
  double* rp = a.data() + r.p * n;
  double* rq = a.data() + r.q * n;
  for (std::size_t k = 0; k < n; ++k) {
    const double x = rp[k], y = rq[k];
    rp[k] = r.c * x - r.s * y;
    rq[k] = r.s * x + r.c * y;
  }
}

double frobenius(const std::vector<double>& a) {
  double s = 0.0;
  for (double x : a) s += x * x;
  return std::sqrt(s);
}

double off_norm(const std::vector<double>& a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) s += a[i * n + j] * a[i * n + j];
  return std::sqrt(s);
}

std::vector<double> diagonal_sorted(const std::vector<double>& a, std::size_t n) {
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i * n + i];
  std::sort(d.begin(), d.end());
  return d;
}

void check_square(const std::vector<double>& a, std::size_t n) {
  if (a.size() != n * n) throw std::invalid_argument("matrix size does not match n");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (a[i * n + j] != a[j * n + i]) throw std::invalid_argument("matrix is not symmetric");
}

void transpose_in_place(std::vector<double>& a, std::size_t n, int threads) {
  constexpr std::size_t B = 32;
  const auto blocks = static_cast<std::ptrdiff_t>((n + B - 1) / B);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::ptrdiff_t bi = 0; bi < blocks; ++bi)
    for (std::size_t bj = static_cast<std::size_t>(bi); bj < static_cast<std::size_t>(blocks); ++bj) {
      const std::size_t i0 = static_cast<std::size_t>(bi) * B, j0 = bj * B;
      for (std::size_t i = i0; i < std::min(i0 + B, n); ++i)
        for (std::size_t j = std::max(j0, i + 1); j < std::min(j0 + B, n); ++j) std::swap(a[i * n + j], a[j * n + i]);
    }
}

std::vector<double> adjacency_matrix(const Graph& g) {
  const std::size_t n = g.num_nodes();
  if (n > 2000) throw std::invalid_argument("dense_spectrum supports n <= 2000");
  std::vector<double> a(n * n, 0.0);
  for (auto [u, v] : g.edges()) a[static_cast<std::size_t>(u) * n + v] = a[static_cast<std::size_t>(v) * n + u] = 1.0;
  return a;
}

}  // namespace

std::vector<double> jacobi_eigenvalues_serial(std::vector<double> a, std::size_t n) {
  check_square(a, n);
  const double scale = frobenius(a);
  if (scale == 0.0) return std::vector<double>(n, 0.0);
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_norm(a, n) < kRelTol * scale) return diagonal_sorted(a, n);
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        Rotation r;
        if (!rotation_for(a, n, p, q, r)) continue;
        rotate_rows(a, n, r);
        for (std::size_t k = 0; k < n; ++k) {
          const double x = a[k * n + p], y = a[k * n + q];
          a[k * n + p] = r.c * x - r.s * y;
          a[k * n + q] = r.s * x + r.c * y;
        }
        a[p * n + q] = a[q * n + p] = 0.0;
      }
  }
  throw ConvergenceError("cyclic Jacobi did not converge", off_norm(a, n) / scale);
}

// Brent-Luk ordering: each round rotates n/2 disjoint pairs at once, first on
// rows (J^T A), then, after a transpose, on rows again (giving J^T A J by
// symmetry). Every element sees the same operation sequence for any thread
// count.
std::vector<double> jacobi_eigenvalues_parallel(std::vector<double> a, std::size_t n, int threads) {
  check_square(a, n);
  const int nt = threads > 0 ? threads : omp_get_max_threads();
  const double scale = frobenius(a);
  if (scale == 0.0 || n < 2) return diagonal_sorted(a, n);
  const std::size_t m = n + (n % 2);  // index n is a dummy when n is odd
  std::vector<std::size_t> ring(m);
  for (std::size_t k = 0; k < m; ++k) ring[k] = k;
  std::vector<Rotation> rots;
  rots.reserve(m / 2);

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_norm(a, n) < kRelTol * scale) return diagonal_sorted(a, n);
    for (std::size_t round = 0; round + 1 < m; ++round) {
      rots.clear();
      for (std::size_t k = 0; k < m / 2; ++k) {
        std::size_t p = ring[k], q = ring[m - 1 - k];
        if (p >= n || q >= n) continue;
        if (p > q) std::swap(p, q);
        Rotation r;
        if (rotation_for(a, n, p, q, r)) rots.push_back(r);
      }
      if (!rots.empty()) {
        const auto count = static_cast<std::ptrdiff_t>(rots.size());
        for (int pass = 0; pass < 2; ++pass) {
#pragma omp parallel for schedule(static) num_threads(nt)
          for (std::ptrdiff_t k = 0; k < count; ++k) rotate_rows(a, n, rots[k]);
          if (pass == 0) transpose_in_place(a, n, nt);
        }
        for (const auto& r : rots) a[r.p * n + r.q] = a[r.q * n + r.p] = 0.0;
      }
      // circle method: keep ring[0], rotate the rest by one
      std::rotate(ring.begin() + 1, ring.end() - 1, ring.end());
    }
  }
  throw ConvergenceError("parallel Jacobi did not converge", off_norm(a, n) / scale);
}

std::vector<double> dense_spectrum(const Graph& g, int threads) {
  const std::size_t n = g.num_nodes();
  return jacobi_eigenvalues_parallel(adjacency_matrix(g), n, threads);
}

std::vector<double> dense_spectrum_serial(const Graph& g) {
  const std::size_t n = g.num_nodes();
  return jacobi_eigenvalues_serial(adjacency_matrix(g), n);
}

}  // namespace netmp::oracle
