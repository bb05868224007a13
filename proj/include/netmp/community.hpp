#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "netmp/graph.hpp"
#include "netmp/mp_engine.hpp"

namespace netmp {

struct SBMParams {
  std::size_t q = 2;
  std::vector<double> priors;  // length q, sums to 1
  std::vector<double> omega;   // q*q row-major, symmetric, entries in [0,1]

  double w(std::size_t r, std::size_t s) const { return omega[r * q + s]; }
  void validate() const;
};

/// Two equal groups with omega_in = c_in/n, omega_out = c_out/n (sparse convention).
SBMParams planted_partition(std::size_t n, double c_in, double c_out);

/// Equal priors, omega_{rs} = c_{rs}/n for a q*q matrix of mean degrees.
SBMParams sbm_from_degrees(std::size_t n, std::span<const double> priors, std::span<const double> c);

struct CommunityResult {
  std::vector<std::vector<double>> marginals;  // per node, length q
  std::vector<std::size_t> hard_labels;        // argmax, ties to the lowest group
  IterationReport report;
};

struct CommunitySolution {
  MessageField<double> messages;  // simplex payloads of width q
  CommunityResult result;
};

/// Belief propagation for the SBM with known parameters.
///
/// mu^r_{i<-j} ∝ pi_r exp(h_{j,r}) prod_{k in N_j, k != i} sum_s omega_{rs} mu^s_{j<-k}
/// with the non-edge field h_{j,r} = sum_{k not in {j} ∪ N_j} log(1 - sum_s q_k^s omega_{rs}),
/// refreshed from the current marginals before every sweep. Node marginals use
/// the same field and all incoming messages. Default init: random simplices.
/// Default schedule: sequential, with each sender's marginal and its share of
/// the field refreshed just before its message is computed. Synchronous sweeps
/// refresh the field once per sweep, and the global feedback through the field
/// can make them oscillate.
CommunitySolution sbm_bp(const Graph& g, const SBMParams& params, const FixedPointConfig& cfg = {},
                         const MessageField<double>* warm = nullptr);

/// Chance-corrected agreement maximized over group permutations; q <= 8.
double overlap(std::span<const std::size_t> labels, std::span<const std::size_t> truth, std::size_t q);

/// (c_in - c_out) - sqrt(2 (c_in + c_out)); positive means detectable.
double detectability_margin(double c_in, double c_out);

}  // namespace netmp
