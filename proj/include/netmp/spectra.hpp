#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "netmp/graph.hpp"
#include "netmp/mp_engine.hpp"

namespace netmp {

struct SpectralParams {
  double eta = 0.01;           // Lorentzian half-width, z = x + i eta
  std::vector<double> x_grid;  // ascending
};

struct SpectralDensityResult {
  std::vector<double> x;
  std::vector<double> density;  // clamped at 0
  std::vector<IterationReport> reports;
  double mass = 0.0;            // trapezoid integral over the grid
  double min_unclamped = 0.0;   // most negative raw value seen (numerical dust)
};

struct SpectralMessages {
  ComplexField messages;
  IterationReport report;
};

inline constexpr double kSpectralDamping = 0.5;

/// Fixed point of mu_{i<-j}(z) = z^{-2} / (1 - sum_{k in N_j, k != i} mu_{j<-k}(z)).
/// Requires Im z > 0. Default init zeros, default damping 0.5. A denominator
/// with modulus below 1e-14 raises NumericDomainError naming the edge.
SpectralMessages spectral_messages(const Graph& g, std::complex<double> z, const FixedPointConfig& cfg = {},
                                   const ComplexField* warm = nullptr);

/// rho = Im[-1/(n pi z) sum_i 1/(1 - sum_{j in N_i} mu_{i<-j})] for given messages (unclamped).
double spectral_density_from_messages(const Graph& g, const ComplexField& messages, std::complex<double> z);

/// Density at one point, clamped at 0.
double spectral_density_at(const Graph& g, double x, double eta, const FixedPointConfig& cfg = {});

/// Density over a grid, warm-starting messages from the neighbouring x.
SpectralDensityResult spectral_density_grid(const Graph& g, const SpectralParams& params,
                                            const FixedPointConfig& cfg = {}, bool warm_start = true);

/// Kesten-McKay density of random d-regular graphs.
double kesten_mckay(std::size_t d, double x);

/// Trapezoid rule over an ascending, possibly non-uniform grid.
double trapezoid(std::span<const double> x, std::span<const double> y);

}  // namespace netmp
