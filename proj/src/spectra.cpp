#include "netmp/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace netmp {

namespace {

using cd = std::complex<double>;

constexpr double kSingular = 1e-14;

FixedPointConfig with_spectral_defaults(FixedPointConfig cfg) {
  if (!cfg.damping) cfg.damping = kSpectralDamping;
  return cfg;
}

}  // namespace

SpectralMessages spectral_messages(const Graph& g, cd z, const FixedPointConfig& cfg_in, const ComplexField* warm) {
  if (!(z.imag() > 0.0)) throw std::invalid_argument("spectral messages need Im z > 0");
  const FixedPointConfig cfg = with_spectral_defaults(cfg_in);
  HalfEdgeIndex idx(g);
  SpectralMessages sol{ComplexField(PayloadKind::complex, idx.num_directed()), {}};
  if (warm) {
    if (warm->num_edges() != idx.num_directed()) throw std::invalid_argument("warm-start field has wrong size");
    sol.messages = *warm;
  } else {
    initialize(sol.messages, cfg.init.value_or(InitKind::zeros), cfg.seed);
  }

  const cd inv_z2 = 1.0 / (z * z);
  auto update = [&idx, inv_z2](EdgeId e, const ComplexField& mu, std::span<cd> out) {
    cd sum = 0.0;
    idx.for_each_successor(e, [&](EdgeId s) { sum += mu.scalar(s); });
    const cd denom = 1.0 - sum;
    if (std::abs(denom) < kSingular) throw NumericDomainError(e, "singular spectral update");
    out[0] = inv_z2 / denom;
  };
  sol.report = iterate(update, sol.messages, cfg);
  return sol;
}

double spectral_density_from_messages(const Graph& g, const ComplexField& messages, cd z) {
  HalfEdgeIndex idx(g);
  if (messages.num_edges() != idx.num_directed()) throw std::invalid_argument("message field has wrong size");
  const std::size_t n = g.num_nodes();
  if (n == 0) throw std::invalid_argument("spectral density of an empty graph is undefined");
  cd total = 0.0;
  for (NodeId i = 0; i < n; ++i) {
    cd sum = 0.0;
    for (EdgeId e = idx.incoming_begin(i); e < idx.incoming_end(i); ++e) sum += messages.scalar(e);
    total += 1.0 / (1.0 - sum);
  }
  const cd rho = -total / (static_cast<double>(n) * std::numbers::pi * z);
  return rho.imag();
}

double spectral_density_at(const Graph& g, double x, double eta, const FixedPointConfig& cfg) {
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  const cd z{x, eta};
  auto sol = spectral_messages(g, z, cfg);
  return std::max(0.0, spectral_density_from_messages(g, sol.messages, z));
}

SpectralDensityResult spectral_density_grid(const Graph& g, const SpectralParams& params, const FixedPointConfig& cfg,
                                            bool warm_start) {
  if (!(params.eta > 0.0)) throw std::invalid_argument("eta must be positive");
  if (!std::is_sorted(params.x_grid.begin(), params.x_grid.end()))
    throw std::invalid_argument("x grid must be ascending");
  if (g.num_nodes() == 0) throw std::invalid_argument("spectral density of an empty graph is undefined");

  SpectralDensityResult r;
  r.x = params.x_grid;
  std::optional<ComplexField> previous;
  for (double x : params.x_grid) {
    const cd z{x, params.eta};
    auto sol = spectral_messages(g, z, cfg, warm_start && previous ? &*previous : nullptr);
    const double raw = spectral_density_from_messages(g, sol.messages, z);
    r.min_unclamped = std::min(r.min_unclamped, raw);
    r.density.push_back(std::max(0.0, raw));
    r.reports.push_back(sol.report);
    if (warm_start) previous = std::move(sol.messages);
  }
  r.mass = trapezoid(r.x, r.density);
  return r;
}

double kesten_mckay(std::size_t d, double x) {
  if (d < 2) throw std::invalid_argument("Kesten-McKay law needs d >= 2");
  const double dd = static_cast<double>(d);
  const double edge2 = 4.0 * (dd - 1.0);
  if (x * x >= edge2) return 0.0;
  return dd / (2.0 * std::numbers::pi) * std::sqrt(edge2 - x * x) / (dd * dd - x * x);
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("trapezoid: length mismatch");
  double acc = 0.0;
  for (std::size_t k = 1; k < x.size(); ++k) acc += 0.5 * (x[k] - x[k - 1]) * (y[k] + y[k - 1]);
  return acc;
}

}  // namespace netmp
