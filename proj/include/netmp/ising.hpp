#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "netmp/graph.hpp"
#include "netmp/mp_engine.hpp"

namespace netmp {

// Zero-field ferromagnetic Ising model, H = -sum_{edges} s_i s_j (J = 1).
struct IsingParams {
  double beta = 0.0;  // inverse temperature, >= 0
};

// Pair payloads are stored as [P(+1), P(-1)].
struct IsingResult {
  std::vector<std::array<double, 2>> marginals;
  std::vector<double> magnetization_per_node;  // m_i = P(+) - P(-)
  double magnetization = 0.0;                  // mean of m_i

  // log Z from the Bethe form sum_i log Z_i - sum_{edges} log Z_ij, exact on trees.
  double log_z = 0.0;
  // log Z_0 + sum_{j in N_0} log Z_{0<-j}, with the per-edge normalizers of the
  // message update. Equals log Z only when every neighbour of node 0 is a leaf.
  double log_z_anchored = 0.0;
  // (1/n)(sum_i log Z_i + sum_{i<-j} log Z_{i<-j}): the node-averaged anchored form.
  double log_z_symmetric = 0.0;
  std::optional<double> free_energy;  // -log_z / beta, absent at beta = 0

  std::vector<double> log_node_norms;  // log Z_i
  std::vector<double> log_edge_norms;  // log Z_{i<-j} per directed edge
  IterationReport report;
};

struct IsingMessages {
  MessageField<double> messages;
  IterationReport report;
};

/// Field with every message set to (up, 1 - up); up = 0.51 gives the
/// reproducible "all-up tilt" start.
MessageField<double> ising_tilted_field(const Graph& g, double up);

/// Fixed point of mu^r_{i<-j} ∝ prod_{k in N_j, k != i} (e^{beta r} mu^+_{j<-k} + e^{-beta r} mu^-_{j<-k}),
/// evaluated in the log domain. Default init: random normalized pairs.
IsingMessages ising_messages(const Graph& g, IsingParams params, const FixedPointConfig& cfg = {},
                             const MessageField<double>* warm = nullptr);

/// Marginals, magnetization, normalizers and partition function from messages.
IsingResult ising_marginals(const Graph& g, const MessageField<double>& messages, IsingParams params);

IsingResult solve_ising(const Graph& g, IsingParams params, const FixedPointConfig& cfg = {},
                        const MessageField<double>* warm = nullptr);

struct CriticalTemperature {
  double lambda = 0.0;
  std::optional<double> beta_c;  // empty when lambda <= 1 (no finite transition)
  std::optional<double> t_c;
};

/// tanh(beta_c) = 1/lambda.
CriticalTemperature ising_critical_temperature(const Graph& g, double tol = 1e-10, std::size_t max_iter = 100000);

struct MagnetizationSweep {
  std::vector<double> temperature;
  std::vector<double> abs_magnetization;
  std::vector<double> log_z;        // Bethe form
  std::vector<double> free_energy;  // -T log_z
  std::vector<IterationReport> reports;
};

/// |m|(T) over an ascending temperature grid. The first point starts from the
/// all-up tilt; later points warm-start from the previous fixed point so the
/// broken-symmetry branch is followed upward.
MagnetizationSweep sweep_magnetization(const Graph& g, std::span<const double> temperatures,
                                       const FixedPointConfig& cfg = {}, bool warm_start = true);

}  // namespace netmp
