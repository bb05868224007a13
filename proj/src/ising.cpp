#include "netmp/ising.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace netmp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

// log(e^{beta} up + e^{-beta} down) and log(e^{-beta} up + e^{beta} down),
// written as beta + log(...) with the small factor e^{-2 beta} so nothing
// overflows at any beta.
struct SpinLogs {
  double plus;
  double minus;
};

inline SpinLogs spin_logs(double beta, double damp2, double up, double down) {
  return {beta + std::log(up + damp2 * down), beta + std::log(damp2 * up + down)};
}

void check_beta(double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be finite and >= 0");
}

// Normalized pair from two log weights.
inline void normalize_pair(double log_plus, double log_minus, std::span<double> out) {
  const double d = log_plus - log_minus;
  if (std::isnan(d)) {
    out[0] = out[1] = 0.5;
    return;
  }
  out[0] = 1.0 / (1.0 + std::exp(-d));
  out[1] = 1.0 / (1.0 + std::exp(d));
}

}  // namespace

MessageField<double> ising_tilted_field(const Graph& g, double up) {
  if (!(up >= 0.0 && up <= 1.0)) throw std::invalid_argument("tilt must lie in [0,1]");
  MessageField<double> f(PayloadKind::pair, 2 * g.num_edges(), 2);
  for (EdgeId e = 0; e < f.num_edges(); ++e) {
    f[e][0] = up;
    f[e][1] = 1.0 - up;
  }
  return f;
}

IsingMessages ising_messages(const Graph& g, IsingParams params, const FixedPointConfig& cfg,
                             const MessageField<double>* warm) {
  check_beta(params.beta);
  HalfEdgeIndex idx(g);
  IsingMessages sol{MessageField<double>(PayloadKind::pair, idx.num_directed(), 2), {}};
  if (warm) {
    if (warm->num_edges() != idx.num_directed() || warm->width() != 2)
      throw std::invalid_argument("warm-start field has wrong shape");
    sol.messages = *warm;
  } else {
    initialize(sol.messages, cfg.init.value_or(InitKind::random), cfg.seed);
  }

  const double beta = params.beta;
  const double damp2 = std::exp(-2.0 * beta);
  auto update = [&idx, beta, damp2](EdgeId e, const MessageField<double>& mu, std::span<double> out) {
    double lp = 0.0, lm = 0.0;
    idx.for_each_successor(e, [&](EdgeId s) {
      auto m = mu[s];
      auto t = spin_logs(beta, damp2, m[0], m[1]);
      lp += t.plus;
      lm += t.minus;
    });
    normalize_pair(lp, lm, out);
  };
  sol.report = iterate(update, sol.messages, cfg);
  return sol;
}

IsingResult ising_marginals(const Graph& g, const MessageField<double>& messages, IsingParams params) {
  check_beta(params.beta);
  HalfEdgeIndex idx(g);
  if (messages.num_edges() != idx.num_directed() || messages.width() != 2)
    throw std::invalid_argument("message field has wrong shape");
  const double beta = params.beta;
  const double damp2 = std::exp(-2.0 * beta);
  const std::size_t n = g.num_nodes();

  IsingResult r;
  r.marginals.resize(n);
  r.magnetization_per_node.resize(n);
  r.log_node_norms.resize(n);
  r.log_edge_norms.resize(idx.num_directed());

  for (EdgeId e = 0; e < idx.num_directed(); ++e) {
    double lp = 0.0, lm = 0.0;
    idx.for_each_successor(e, [&](EdgeId s) {
      auto t = spin_logs(beta, damp2, messages[s][0], messages[s][1]);
      lp += t.plus;
      lm += t.minus;
    });
    r.log_edge_norms[e] = log_add(lp, lm);
  }

  double sum_m = 0.0, sum_log_zi = 0.0;
  for (NodeId i = 0; i < n; ++i) {
    double lp = 0.0, lm = 0.0;
    for (EdgeId e = idx.incoming_begin(i); e < idx.incoming_end(i); ++e) {
      auto t = spin_logs(beta, damp2, messages[e][0], messages[e][1]);
      lp += t.plus;
      lm += t.minus;
    }
    r.log_node_norms[i] = log_add(lp, lm);
    std::array<double, 2> pm{};
    normalize_pair(lp, lm, pm);
    r.marginals[i] = pm;
    r.magnetization_per_node[i] = pm[0] - pm[1];
    sum_m += r.magnetization_per_node[i];
    sum_log_zi += r.log_node_norms[i];
  }
  r.magnetization = n ? sum_m / static_cast<double>(n) : 0.0;

  // Edge terms of the Bethe form: Z_ij = sum_{r,s} e^{beta r s} mu^r_{j<-i} mu^s_{i<-j}.
  double sum_log_zij = 0.0, sum_log_zdir = 0.0;
  for (EdgeId e = 0; e < idx.num_directed(); ++e) {
    sum_log_zdir += r.log_edge_norms[e];
    if (idx.receiver(e) > idx.sender(e)) continue;
    auto a = messages[idx.rev(e)];  // cavity distribution of s_i without j
    auto b = messages[e];           // cavity distribution of s_j without i
    const double aligned = a[0] * b[0] + a[1] * b[1];
    const double opposed = a[0] * b[1] + a[1] * b[0];
    sum_log_zij += beta + std::log(aligned + damp2 * opposed);
  }
  r.log_z = sum_log_zi - sum_log_zij;

  if (n > 0) {
    r.log_z_anchored = r.log_node_norms[0];
    for (EdgeId e = idx.incoming_begin(0); e < idx.incoming_end(0); ++e) r.log_z_anchored += r.log_edge_norms[e];
    r.log_z_symmetric = (sum_log_zi + sum_log_zdir) / static_cast<double>(n);
  }
  if (beta > 0.0) r.free_energy = -r.log_z / beta;
  return r;
}

IsingResult solve_ising(const Graph& g, IsingParams params, const FixedPointConfig& cfg,
                        const MessageField<double>* warm) {
  auto sol = ising_messages(g, params, cfg, warm);
  auto r = ising_marginals(g, sol.messages, params);
  r.report = sol.report;
  return r;
}

CriticalTemperature ising_critical_temperature(const Graph& g, double tol, std::size_t max_iter) {
  CriticalTemperature c;
  c.lambda = nb_leading_eigenvalue(g, tol, max_iter).lambda;
  if (c.lambda > 1.0) {
    c.beta_c = std::atanh(1.0 / c.lambda);
    c.t_c = 1.0 / *c.beta_c;
  }
  return c;
}

MagnetizationSweep sweep_magnetization(const Graph& g, std::span<const double> temperatures,
                                       const FixedPointConfig& cfg, bool warm_start) {
  for (double t : temperatures)
    if (!(t > 0.0)) throw std::invalid_argument("temperatures must be positive");
  if (!std::is_sorted(temperatures.begin(), temperatures.end()))
    throw std::invalid_argument("temperature grid must be ascending");

  MagnetizationSweep sweep;
  sweep.temperature.assign(temperatures.begin(), temperatures.end());
  MessageField<double> state = ising_tilted_field(g, 0.51);
  for (double t : temperatures) {
    IsingParams params{1.0 / t};
    MessageField<double> start = warm_start ? state : ising_tilted_field(g, 0.51);
    auto sol = ising_messages(g, params, cfg, &start);
    auto r = ising_marginals(g, sol.messages, params);
    sweep.abs_magnetization.push_back(std::abs(r.magnetization));
    sweep.log_z.push_back(r.log_z);
    sweep.free_energy.push_back(-t * r.log_z);
    sweep.reports.push_back(sol.report);
    state = std::move(sol.messages);
  }
  return sweep;
}

}  // namespace netmp
