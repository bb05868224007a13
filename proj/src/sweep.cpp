#include "netmp/sweep.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace netmp {

void SweepResult::add_series(std::string name, std::vector<double> values) {
  std::vector<std::optional<double>> v(values.begin(), values.end());
  series.emplace_back(std::move(name), std::move(v));
}

void SweepResult::add_series(std::string name, std::vector<std::optional<double>> values) {
  series.emplace_back(std::move(name), std::move(values));
}

bool SweepResult::all_converged() const {
  for (const auto& s : status)
    if (!s.converged) return false;
  return true;
}

void SweepResult::validate() const {
  const std::size_t n = grid.size();
  for (const auto& [name, values] : series)
    if (values.size() != n) throw std::logic_error("series '" + name + "' does not match the grid length");
  for (const auto& [name, rows] : per_node)
    if (rows.size() != n) throw std::logic_error("per-node '" + name + "' does not match the grid length");
  if (!status.empty() && status.size() != n) throw std::logic_error("status does not match the grid length");
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";  // folds -0
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string cell(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

nlohmann::ordered_json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x == 0.0 ? 0.0 : x;
}

nlohmann::ordered_json number(const std::optional<double>& x) { return x ? number(*x) : nullptr; }

}  // namespace

std::string to_csv(const SweepResult& r) {
  r.validate();
  const auto& p = r.provenance;
  std::string out;
  out += "# command: " + p.command + "\n";
  out += "# version: " + p.version + "\n";
  out += "# seed: " + std::to_string(p.seed) + "\n";
  out += "# graph: " + p.graph_source + " nodes=" + std::to_string(p.nodes) + " edges=" + std::to_string(p.edges) +
         " hash=" + hex64(p.graph_hash) + "\n";
  for (const auto& [k, v] : p.config) out += "# config." + k + ": " + v + "\n";
  for (const auto& [k, v] : r.scalars) out += "# " + k + ": " + (v ? format_number(*v) : "none") + "\n";

  out += r.parameter;
  for (const auto& s : r.series) out += "," + s.first;
  if (!r.status.empty()) out += ",converged,iterations,residual";
  for (const auto& [name, rows] : r.per_node) {
    const std::size_t width = rows.empty() ? 0 : rows.front().size();
    for (std::size_t i = 0; i < width; ++i) out += "," + name + "[" + std::to_string(i) + "]";
  }
  out += "\n";

  for (std::size_t k = 0; k < r.grid.size(); ++k) {
    out += format_number(r.grid[k]);
    for (const auto& s : r.series) out += "," + cell(s.second[k]);
    if (!r.status.empty()) {
      const auto& st = r.status[k];
      out += std::string(",") + (st.converged ? "1" : "0") + "," + std::to_string(st.iterations) + "," +
             format_number(st.residual);
    }
    for (const auto& [name, rows] : r.per_node)
      for (double v : rows[k]) out += "," + format_number(v);
    out += "\n";
  }
  return out;
}

std::string to_json(const SweepResult& r) {
  r.validate();
  using json = nlohmann::ordered_json;
  const auto& p = r.provenance;
  json meta;
  meta["command"] = p.command;
  meta["version"] = p.version;
  meta["seed"] = p.seed;
  meta["parameter"] = r.parameter;
  meta["graph"] = {{"source", p.graph_source}, {"nodes", p.nodes}, {"edges", p.edges}, {"hash", hex64(p.graph_hash)}};
  json cfg = json::object();
  for (const auto& [k, v] : p.config) cfg[k] = v;
  meta["config"] = cfg;
  json scalars = json::object();
  for (const auto& [k, v] : r.scalars) scalars[k] = number(v);
  meta["scalars"] = scalars;
  json status = json::array();
  for (const auto& st : r.status)
    status.push_back({{"converged", st.converged}, {"iterations", st.iterations}, {"residual", number(st.residual)}});
  meta["convergence"] = status;

  json doc;
  doc["meta"] = meta;
  json grid = json::array();
  for (double x : r.grid) grid.push_back(number(x));
  doc["grid"] = grid;
  json series = json::object();
  for (const auto& [name, values] : r.series) {
    json col = json::array();
    for (const auto& v : values) col.push_back(number(v));
    series[name] = col;
  }
  doc["series"] = series;
  if (!r.per_node.empty()) {
    json pn = json::object();
    for (const auto& [name, rows] : r.per_node) {
      json arr = json::array();
      for (const auto& row : rows) {
        json a = json::array();
        for (double v : row) a.push_back(number(v));
        arr.push_back(a);
      }
      pn[name] = arr;
    }
    doc["per_node"] = pn;
  }
  return doc.dump(2) + "\n";
}

}  // namespace netmp
