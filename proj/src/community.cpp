#include "netmp/community.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace netmp {

namespace {

constexpr std::size_t kMaxGroups = 64;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Normalizes log weights into `out`; false if every weight vanishes.
bool normalize_logs(std::span<const double> logs, std::span<double> out) {
  const double m = *std::max_element(logs.begin(), logs.end());
  if (!(m > kNegInf) || std::isnan(m)) return false;
  double sum = 0.0;
  for (std::size_t r = 0; r < logs.size(); ++r) sum += out[r] = std::exp(logs[r] - m);
  for (double& x : out) x /= sum;
  return true;
}

double safe_log(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

// log(1 - x) floored so that sums and differences of terms stay finite; a
// weight of e^-700 is already zero after normalization.
double non_edge_term(double x) { return std::max(std::log1p(-std::min(x, 1.0)), -700.0); }

class SbmState {
 public:
  SbmState(const Graph& g, const HalfEdgeIndex& idx, const SBMParams& params)
      : g_(g), idx_(idx), p_(params), q_(params.q), n_(g.num_nodes()) {
    log_prior_.resize(q_);
    for (std::size_t r = 0; r < q_; ++r) log_prior_[r] = safe_log(p_.priors[r]);
    total_.assign(q_, 0.0);
    local_.assign(n_ * q_, 0.0);
    term_.assign(n_ * q_, 0.0);
    marg_.assign(n_ * q_, 0.0);
  }

  // log(sum_s omega_{rs} mu^s) for one incoming payload.
  double log_edge_factor(std::size_t r, std::span<const double> mu) const {
    double acc = 0.0;
    for (std::size_t s = 0; s < q_; ++s) acc += p_.w(r, s) * mu[s];
    return safe_log(acc);
  }

  double field(NodeId j, std::size_t r) const { return total_[r] + local_[j * q_ + r]; }

  void message(EdgeId e, const MessageField<double>& mu, std::span<double> out) const {
    const NodeId j = idx_.sender(e);
    std::array<double, kMaxGroups> buf;
    std::span<double> l(buf.data(), q_);
    for (std::size_t r = 0; r < q_; ++r) {
      double acc = log_prior_[r] + field(j, r);
      idx_.for_each_successor(e, [&](EdgeId s) { acc += log_edge_factor(r, mu[s]); });
      l[r] = acc;
    }
    if (!normalize_logs(l, out)) throw NumericDomainError(e, "all-zero unnormalized SBM message");
  }

  void marginal(NodeId i, const MessageField<double>& mu) {
    std::array<double, kMaxGroups> buf;
    std::span<double> l(buf.data(), q_);
    for (std::size_t r = 0; r < q_; ++r) {
      double acc = log_prior_[r] + field(i, r);
      for (EdgeId e = idx_.incoming_begin(i); e < idx_.incoming_end(i); ++e) acc += log_edge_factor(r, mu[e]);
      l[r] = acc;
    }
    if (!normalize_logs(l, std::span<double>(marg_.data() + i * q_, q_)))
      throw NumericDomainError(idx_.incoming_begin(i), "all-zero unnormalized SBM marginal at node " +
                                                           std::to_string(i));
  }

  void marginals(const MessageField<double>& mu) {
    for (NodeId i = 0; i < n_; ++i) marginal(i, mu);
  }

  // h_{j,r} = T_r - term_{j,r} - sum_{k in N_j} term_{k,r}, kept as T_r plus a
  // per-node local part. A sequential fold, so deterministic.
  void refresh_field() {
    std::fill(total_.begin(), total_.end(), 0.0);
    for (NodeId k = 0; k < n_; ++k)
      for (std::size_t r = 0; r < q_; ++r) {
        const double t = term_[k * q_ + r] = non_edge_term(mixed(k, r));
        total_[r] += t;
      }
    for (NodeId j = 0; j < n_; ++j)
      for (std::size_t r = 0; r < q_; ++r) {
        double h = -term_[j * q_ + r];
        for (NodeId k : g_.neighbors(j)) h -= term_[k * q_ + r];
        local_[j * q_ + r] = h;
      }
  }

  // Sequential sweeps: before a message leaves j, recompute j's marginal from
  // its current incoming messages and fold the change of its non-edge term
  // into T and into the local parts of j and its neighbours.
  void refresh_sender(EdgeId e, const MessageField<double>& mu) {
    const NodeId j = idx_.sender(e);
    marginal(j, mu);
    for (std::size_t r = 0; r < q_; ++r) {
      const double t = non_edge_term(mixed(j, r));
      const double delta = t - term_[j * q_ + r];
      if (delta == 0.0) continue;
      term_[j * q_ + r] = t;
      total_[r] += delta;
      local_[j * q_ + r] -= delta;
      for (NodeId k : g_.neighbors(j)) local_[k * q_ + r] -= delta;
    }
  }

  const std::vector<double>& marg() const { return marg_; }

 private:
  double mixed(NodeId k, std::size_t r) const {
    double acc = 0.0;
    for (std::size_t s = 0; s < q_; ++s) acc += marg_[k * q_ + s] * p_.w(r, s);
    return acc;
  }

  const Graph& g_;
  const HalfEdgeIndex& idx_;
  const SBMParams& p_;
  std::size_t q_;
  std::size_t n_;
  std::vector<double> log_prior_;
  std::vector<double> total_;
  std::vector<double> local_;
  std::vector<double> term_;
  std::vector<double> marg_;
};

}  // namespace

void SBMParams::validate() const {
  if (q < 1 || q > kMaxGroups) throw std::invalid_argument("SBM needs 1 <= q <= 64");
  if (priors.size() != q) throw std::invalid_argument("priors must have length q");
  if (omega.size() != q * q) throw std::invalid_argument("omega must be q x q");
  double sum = 0.0;
  for (double p : priors) {
    if (!(p >= 0.0)) throw std::invalid_argument("priors must be nonnegative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("priors must sum to 1");
  for (std::size_t r = 0; r < q; ++r)
    for (std::size_t s = 0; s < q; ++s) {
      if (!(w(r, s) >= 0.0 && w(r, s) <= 1.0)) throw std::invalid_argument("omega entries must lie in [0,1]");
      if (w(r, s) != w(s, r)) throw std::invalid_argument("omega must be symmetric");
    }
}

SBMParams planted_partition(std::size_t n, double c_in, double c_out) {
  const double c[4] = {c_in, c_out, c_out, c_in};
  const double pri[2] = {0.5, 0.5};
  return sbm_from_degrees(n, pri, c);
}

SBMParams sbm_from_degrees(std::size_t n, std::span<const double> priors, std::span<const double> c) {
  if (n == 0) throw std::invalid_argument("n must be positive");
  SBMParams p;
  p.q = priors.size();
  p.priors.assign(priors.begin(), priors.end());
  if (c.size() != p.q * p.q) throw std::invalid_argument("degree matrix must be q x q");
  p.omega.resize(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) p.omega[k] = c[k] / static_cast<double>(n);
  p.validate();
  return p;
}

CommunitySolution sbm_bp(const Graph& g, const SBMParams& params, const FixedPointConfig& cfg,
                         const MessageField<double>* warm) {
  params.validate();
  if (g.num_nodes() == 0) throw std::invalid_argument("graph has no nodes");
  HalfEdgeIndex idx(g);
  const std::size_t q = params.q;
  CommunitySolution sol{MessageField<double>(q == 2 ? PayloadKind::pair : PayloadKind::simplex, idx.num_directed(), q),
                        {}};
  if (warm) {
    if (warm->num_edges() != idx.num_directed() || warm->width() != q)
      throw std::invalid_argument("warm-start field has wrong shape");
    sol.messages = *warm;
  } else {
    initialize(sol.messages, cfg.init.value_or(InitKind::random), cfg.seed);
  }

  FixedPointConfig run = cfg;
  if (!run.schedule) run.schedule = Schedule::sequential;
  SbmState state(g, idx, params);
  const bool incremental = *run.schedule == Schedule::sequential;
  auto update = [&state, incremental](EdgeId e, const MessageField<double>& mu, std::span<double> out) {
    if (incremental) state.refresh_sender(e, mu);
    state.message(e, mu, out);
  };
  auto hook = [&state](const MessageField<double>& mu, std::size_t) {
    state.marginals(mu);
    state.refresh_field();
  };
  sol.result.report = iterate(update, sol.messages, run, hook);

  state.marginals(sol.messages);
  state.refresh_field();
  state.marginals(sol.messages);

  auto& res = sol.result;
  res.marginals.resize(g.num_nodes());
  res.hard_labels.resize(g.num_nodes());
  const auto& m = state.marg();
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    res.marginals[i].assign(m.begin() + i * q, m.begin() + (i + 1) * q);
    // max_element returns the first maximum, i.e. the lowest group on ties
    res.hard_labels[i] =
        static_cast<std::size_t>(std::max_element(res.marginals[i].begin(), res.marginals[i].end()) -
                                 res.marginals[i].begin());
  }
  return sol;
}

double overlap(std::span<const std::size_t> labels, std::span<const std::size_t> truth, std::size_t q) {
  if (labels.size() != truth.size()) throw std::invalid_argument("label vectors differ in length");
  if (q < 2 || q > 8) throw std::invalid_argument("overlap supports 2 <= q <= 8");
  if (labels.empty()) throw std::invalid_argument("overlap of empty labelings is undefined");
  // confusion counts, then a permutation scan
  std::vector<std::size_t> conf(q * q, 0);
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (labels[k] >= q || truth[k] >= q) throw std::invalid_argument("label out of range");
    ++conf[labels[k] * q + truth[k]];
  }
  std::vector<std::size_t> perm(q);
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t best = 0;
  do {
    std::size_t hits = 0;
    for (std::size_t r = 0; r < q; ++r) hits += conf[r * q + perm[r]];
    best = std::max(best, hits);
  } while (std::next_permutation(perm.begin(), perm.end()));
  const double frac = static_cast<double>(best) / static_cast<double>(labels.size());
  const double chance = 1.0 / static_cast<double>(q);
  return std::clamp((frac - chance) / (1.0 - chance), 0.0, 1.0);
}

double detectability_margin(double c_in, double c_out) {
  if (!(c_in >= 0.0) || !(c_out >= 0.0)) throw std::invalid_argument("mean degrees must be nonnegative");
  if (c_in < c_out) throw std::invalid_argument("expected c_in >= c_out");
  return (c_in - c_out) - std::sqrt(2.0 * (c_in + c_out));
}

}  // namespace netmp
