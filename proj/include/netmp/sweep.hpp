#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace netmp {

struct PointStatus {
  bool converged = true;
  std::size_t iterations = 0;
  double residual = 0.0;
};

struct Provenance {
  std::string command;
  std::string version;
  std::uint64_t seed = 0;
  std::uint64_t graph_hash = 0;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::string graph_source;                                 // path or generator spec
  std::vector<std::pair<std::string, std::string>> config;  // in insertion order
};

// One column per series; optional per-node arrays per grid point.
struct SweepResult {
  std::string parameter;  // grid variable name
  std::vector<double> grid;
  std::vector<std::pair<std::string, std::vector<std::optional<double>>>> series;
  std::vector<std::pair<std::string, std::vector<std::vector<double>>>> per_node;  // [point][node]
  std::vector<PointStatus> status;                                                  // empty or one per point
  std::vector<std::pair<std::string, std::optional<double>>> scalars;              // e.g. lambda, overlap
  Provenance provenance;

  void add_series(std::string name, std::vector<double> values);
  void add_series(std::string name, std::vector<std::optional<double>> values);
  bool all_converged() const;
  /// Throws std::logic_error if lengths disagree.
  void validate() const;
};

/// Shortest round-trip decimal form; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double x);

/// `#`-prefixed provenance lines, one header row, then data rows.
/// Per-node arrays become columns name[0], name[1], ...
std::string to_csv(const SweepResult& r);

/// {"meta": ..., "grid": [...], "series": {...}, "per_node": {...}?}; non-finite numbers become null.
std::string to_json(const SweepResult& r);

}  // namespace netmp
