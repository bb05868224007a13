#include "cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "netmp/community.hpp"
#include "netmp/errors.hpp"
#include "netmp/generators.hpp"
#include "netmp/graph.hpp"
#include "netmp/ising.hpp"
#include "netmp/loopy.hpp"
#include "netmp/oracles.hpp"
#include "netmp/percolation.hpp"
#include "netmp/spectra.hpp"
#include "netmp/sweep.hpp"

#ifndef NETMP_VERSION
#define NETMP_VERSION "0.0.0"
#endif

namespace netmp::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string graph_path;
  std::string gen;
  std::optional<std::uint64_t> seed;
  double tol = 1e-10;
  std::size_t max_iter = 100000;
  std::optional<double> damping;
  int threads = 0;
  std::string schedule;  // empty: the algorithm default
  std::string out_path;
  std::string format = "csv";
  bool per_node = false;

  std::optional<double> point;  // --p / --T
  std::string grid;             // --p-grid / --T-grid / --x
  bool log_z = false;
  double eta = 0.01;
  std::optional<std::size_t> q;
  std::optional<double> c_in, c_out;
  bool truth = false;
  std::string truth_file;
  std::size_t r = 4;
  std::string mode = "exact";
  std::size_t reps = 1000;
  std::string spec;  // generate
};

// ---- parsing helpers ----

template <class T>
T parse_number(std::string_view s, const std::string& what) {
  T v{};
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw UsageError("invalid " + what + ": '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

// Grid "a:b:step" (inclusive of b up to rounding) or a single value.
std::vector<double> parse_grid(const std::string& spec, const std::string& what) {
  auto parts = split(spec, ':');
  if (parts.size() == 1) return {parse_number<double>(parts[0], what)};
  if (parts.size() != 3) throw UsageError(what + " must be a:b:step");
  const double a = parse_number<double>(parts[0], what), b = parse_number<double>(parts[1], what),
               step = parse_number<double>(parts[2], what);
  if (!(step > 0.0) || !(b >= a)) throw UsageError(what + " needs step > 0 and b >= a");
  const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
  if (count > 10000000) throw UsageError(what + " has too many points");
  std::vector<double> g(count);
  for (std::size_t k = 0; k < count; ++k) g[k] = std::round((a + static_cast<double>(k) * step) * 1e12) / 1e12;
  return g;
}

struct Source {
  Graph graph;
  std::string description;
  std::optional<std::vector<std::uint32_t>> truth;
  std::optional<SBMParams> sbm;
};

Source make_source(const Options& o, std::uint64_t seed) {
  if (o.graph_path.empty() == o.gen.empty()) throw UsageError("give exactly one of --graph or --gen");
  Source src;
  if (!o.graph_path.empty()) {
    try {
      src.graph = load_edge_list_file(o.graph_path).graph;
    } catch (const ParseError& e) {
      throw IoError(o.graph_path + ": " + e.what());
    } catch (const std::runtime_error& e) {
      throw IoError(e.what());
    }
    src.description = o.graph_path;
    return src;
  }
  src.description = o.gen;
  auto parts = split(o.gen, ':');
  const std::string kind(parts[0]);
  auto need = [&](std::size_t k) {
    if (parts.size() != k + 1) throw UsageError("generator '" + kind + "' takes " + std::to_string(k) + " arguments");
  };
  auto sz = [&](std::size_t k) { return parse_number<std::size_t>(parts[k], "generator argument"); };
  auto real = [&](std::size_t k) { return parse_number<double>(parts[k], "generator argument"); };
  try {
    if (kind == "er") {
      need(2);
      src.graph = generate_er(sz(1), real(2), seed);
    } else if (kind == "regular") {
      need(2);
      src.graph = generate_regular(sz(1), sz(2), seed);
    } else if (kind == "sbm") {
      need(4);
      const std::size_t n = sz(1), q = sz(2);
      const double cin = real(3), cout = real(4);
      if (q < 1) throw UsageError("sbm needs q >= 1");
      std::vector<double> priors(q, 1.0 / static_cast<double>(q)), c(q * q, cout);
      for (std::size_t r = 0; r < q; ++r) c[r * q + r] = cin;
      SBMParams params = sbm_from_degrees(n, priors, c);
      auto planted = generate_sbm(n, params.priors, params.omega, seed);
      src.graph = std::move(planted.graph);
      src.truth = std::move(planted.truth);
      src.sbm = std::move(params);
    } else if (kind == "clustered") {
      need(3);
      src.graph = generate_clustered(sz(1), sz(2), sz(3), seed);
    } else if (kind == "tree") {
      need(1);
      src.graph = generate_random_tree(sz(1), seed);
    } else if (kind == "complete") {
      need(1);
      src.graph = make_complete(sz(1));
    } else if (kind == "cycle") {
      need(1);
      src.graph = make_cycle(sz(1));
    } else if (kind == "path") {
      need(1);
      src.graph = make_path(sz(1));
    } else if (kind == "star") {
      need(1);
      src.graph = make_star(sz(1));
    } else {
      throw UsageError("unknown generator '" + kind + "'");
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("generator: ") + e.what());
  }
  return src;
}

std::uint64_t resolve_seed(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("NETMP_SEED"); env && *env)
    return parse_number<std::uint64_t>(env, "NETMP_SEED");
  return 0;
}

FixedPointConfig solver_config(const Options& o, std::uint64_t seed) {
  FixedPointConfig cfg;
  cfg.tol = o.tol;
  cfg.max_iter = o.max_iter;
  cfg.damping = o.damping;
  cfg.threads = o.threads;
  cfg.seed = seed;
  if (o.schedule == "sync")
    cfg.schedule = Schedule::synchronous;
  else if (o.schedule == "seq")
    cfg.schedule = Schedule::sequential;
  else if (!o.schedule.empty())
    throw UsageError("--schedule must be sync or seq");
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

Provenance provenance(const std::string& command, const Source& src, const Options& o, std::uint64_t seed) {
  Provenance p;
  p.command = command;
  p.version = NETMP_VERSION;
  p.seed = seed;
  p.graph_hash = graph_hash(src.graph);
  p.nodes = src.graph.num_nodes();
  p.edges = src.graph.num_edges();
  p.graph_source = src.description;
  p.config = {{"tol", format_number(o.tol)},
              {"max_iter", std::to_string(o.max_iter)},
              {"damping", o.damping ? format_number(*o.damping) : "default"},
              {"schedule", o.schedule.empty() ? "default" : o.schedule}};
  return p;
}

PointStatus status_of(const IterationReport& r) { return {r.converged, r.iterations, r.residual}; }

void require_nodes(const Graph& g) {
  if (g.num_nodes() == 0) throw IoError("graph has no nodes");
}

std::vector<double> points(const Options& o, const char* single, const char* grid) {
  if (o.point.has_value() == !o.grid.empty())
    throw UsageError(std::string("give exactly one of ") + single + " or " + grid);
  return o.point ? std::vector<double>{*o.point} : parse_grid(o.grid, grid);
}

void emit(const std::string& text, const Options& o, std::ostream& out) {
  if (o.out_path.empty()) {
    out << text;
    return;
  }
  namespace fs = std::filesystem;
  const fs::path target(o.out_path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + tmp.string());
    f << text;
    f.flush();
    if (!f) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into place: " + target.string());
  }
}

int finish(SweepResult& r, const Options& o, std::ostream& out, bool converged) {
  if (o.format != "csv" && o.format != "json") throw UsageError("--format must be csv or json");
  emit(o.format == "csv" ? to_csv(r) : to_json(r), o, out);
  return converged ? ok : unconverged;
}

// ---- commands ----

int cmd_percolate(const Options& o, std::ostream& out) {
  const auto seed = resolve_seed(o);
  auto grid = points(o, "--p", "--p-grid");
  auto cfg = solver_config(o, seed);
  auto src = make_source(o, seed);
  require_nodes(src.graph);
  auto sweep = sweep_percolation(src.graph, grid, cfg);
  SweepResult r;
  r.parameter = "p";
  r.grid = grid;
  std::vector<double> s;
  std::vector<std::vector<double>> mu;
  for (const auto& pt : sweep.points) {
    s.push_back(pt.giant_cluster_fraction);
    r.status.push_back(status_of(pt.report));
    if (o.per_node) mu.push_back(pt.node_probabilities);
  }
  r.add_series("S", s);
  if (o.per_node) r.per_node.emplace_back("mu", std::move(mu));
  r.provenance = provenance("percolate", src, o, seed);
  return finish(r, o, out, r.all_converged());
}

int cmd_threshold(const Options& o, std::ostream& out) {
  const auto seed = resolve_seed(o);
  auto src = make_source(o, seed);
  require_nodes(src.graph);
  if (src.graph.num_edges() == 0) throw IoError("graph has no edges");
  const auto t = percolation_threshold(src.graph, o.tol, o.max_iter);
  std::optional<double> beta_c, t_c;
  if (t.lambda > 1.0) {
    beta_c = std::atanh(1.0 / t.lambda);
    t_c = 1.0 / *beta_c;
  }
  if (o.format == "text") {
    std::string text = "lambda " + format_number(t.lambda) + "\n";
    if (!t.p_c) {
      text += "no transition\n";
    } else {
      text += "p_c " + format_number(*t.p_c) + "\n";
      if (beta_c)
        text += "beta_c " + format_number(*beta_c) + "\nT_c " + format_number(*t_c) + "\n";
      else
        text += "no finite T_c\n";
    }
    emit(text, o, out);
    return ok;
  }
  SweepResult r;
  r.parameter = "graph";
  r.grid = {0.0};
  r.add_series("lambda", std::vector<double>{t.lambda});
  r.add_series("p_c", std::vector<std::optional<double>>{t.p_c});
  r.add_series("beta_c", std::vector<std::optional<double>>{beta_c});
  r.add_series("T_c", std::vector<std::optional<double>>{t_c});
  r.provenance = provenance("threshold", src, o, seed);
  return finish(r, o, out, true);
}

int cmd_ising(const Options& o, std::ostream& out) {
  const auto seed = resolve_seed(o);
  auto temps = points(o, "--T", "--T-grid");
  for (double t : temps)
    if (!(t > 0.0)) throw UsageError("temperatures must be positive");
  auto cfg = solver_config(o, seed);
  auto src = make_source(o, seed);
  require_nodes(src.graph);
  auto sweep = sweep_magnetization(src.graph, temps, cfg);
  SweepResult r;
  r.parameter = "T";
  r.grid = temps;
  r.add_series("abs_m", sweep.abs_magnetization);
  if (o.log_z) {
    r.add_series("log_z", sweep.log_z);
    r.add_series("free_energy", sweep.free_energy);
  }
  for (const auto& rep : sweep.reports) r.status.push_back(status_of(rep));
  r.provenance = provenance("ising", src, o, seed);
  return finish(r, o, out, r.all_converged());
}

int cmd_spectrum(const Options& o, std::ostream& out) {
  const auto seed = resolve_seed(o);
  if (o.grid.empty()) throw UsageError("--x is required");
  if (!(o.eta > 0.0)) throw UsageError("--eta must be positive");
  SpectralParams params{o.eta, parse_grid(o.grid, "--x")};
  auto cfg = solver_config(o, seed);
  auto src = make_source(o, seed);
  require_nodes(src.graph);
  auto res = spectral_density_grid(src.graph, params, cfg);
  SweepResult r;
  r.parameter = "x";
  r.grid = res.x;
  r.add_series("rho", res.density);
  for (const auto& rep : res.reports) r.status.push_back(status_of(rep));
  r.scalars.emplace_back("mass", res.mass);
  r.provenance = provenance("spectrum", src, o, seed);
  r.provenance.config.emplace_back("eta", format_number(o.eta));
  return finish(r, o, out, r.all_converged());
}

std::vector<std::uint32_t> read_labels(const std::string& path, std::size_t n) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read " + path);
  std::vector<std::uint32_t> labels;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    labels.push_back(parse_number<std::uint32_t>(line, "label in " + path));
  }
  if (labels.size() != n) throw IoError(path + ": expected " + std::to_string(n) + " labels");
  return labels;
}

int cmd_communities(const Options& o, std::ostream& out) {
  const auto seed = resolve_seed(o);
  auto cfg = solver_config(o, seed);
  auto src = make_source(o, seed);
  require_nodes(src.graph);
  const std::size_t n = src.graph.num_nodes();

  SBMParams params;
  if (src.sbm && !o.q && !o.c_in && !o.c_out) {
    params = *src.sbm;
  } else {
    if (!o.q || !o.c_in || !o.c_out) throw UsageError("--q, --c-in and --c-out are required for this graph source");
    std::vector<double> priors(*o.q, 1.0 / static_cast<double>(*o.q)), c(*o.q * *o.q, *o.c_out);
    for (std::size_t k = 0; k < *o.q; ++k) c[k * *o.q + k] = *o.c_in;
    try {
      params = sbm_from_degrees(n, priors, c);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }

  std::optional<std::vector<std::uint32_t>> truth;
  if (o.truth) {
    if (!src.truth) throw UsageError("--truth needs an sbm generator; use --truth-file for edge lists");
    truth = src.truth;
  } else if (!o.truth_file.empty()) {
    truth = read_labels(o.truth_file, n);
  }

  auto sol = sbm_bp(src.graph, params, cfg);
  const auto& res = sol.result;
  SweepResult r;
  r.parameter = "node";
  for (std::size_t i = 0; i < n; ++i) r.grid.push_back(static_cast<double>(i));
  for (std::size_t k = 0; k < params.q; ++k) {
    std::vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = res.marginals[i][k];
    r.add_series("q" + std::to_string(k), std::move(col));
  }
  r.add_series("label", std::vector<double>(res.hard_labels.begin(), res.hard_labels.end()));
  if (truth) {
    r.add_series("truth", std::vector<double>(truth->begin(), truth->end()));
    std::vector<std::size_t> t(truth->begin(), truth->end());
    r.scalars.emplace_back("overlap", overlap(res.hard_labels, t, params.q));
  }
  if (params.q == 2) {
    const double cin = params.omega[0] * static_cast<double>(n), cout = params.omega[1] * static_cast<double>(n);
    if (cin >= cout) r.scalars.emplace_back("detectability_margin", detectability_margin(cin, cout));
  }
  r.scalars.emplace_back("converged", res.report.converged ? 1.0 : 0.0);
  r.scalars.emplace_back("iterations", static_cast<double>(res.report.iterations));
  r.scalars.emplace_back("residual", res.report.residual);
  r.provenance = provenance("communities", src, o, seed);
  r.provenance.config.emplace_back("q", std::to_string(params.q));
  return finish(r, o, out, res.report.converged);
}

LoopyMode parse_mode(const std::string& m, std::uint64_t seed) {
  if (m == "exact") return LoopyMode::exact();
  auto parts = split(m, ':');
  if (parts.size() == 2 && parts[0] == "mc") {
    const auto samples = parse_number<std::size_t>(parts[1], "sample count");
    if (samples == 0) throw UsageError("mc mode needs at least one sample");
    return LoopyMode::monte_carlo(samples, seed);
  }
  throw UsageError("--mode must be exact or mc:SAMPLES");
}

int cmd_loopy(const Options& o, std::ostream& out) {
  const auto seed = resolve_seed(o);
  auto grid = points(o, "--p", "--p-grid");
  for (double p : grid)
    if (!(p >= 0.0 && p <= 1.0)) throw UsageError("p must lie in [0,1]");
  if (o.r < 2) throw UsageError("--r must be >= 2");
  auto mode = parse_mode(o.mode, seed);
  auto cfg = solver_config(o, seed);
  auto src = make_source(o, seed);
  require_nodes(src.graph);
  std::optional<LoopyPercolation> model;
  try {
    model.emplace(src.graph, o.r, mode);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  auto results = model->sweep(grid, cfg);
  SweepResult r;
  r.parameter = "p";
  r.grid = grid;
  std::vector<double> s;
  std::vector<std::vector<double>> mu;
  for (const auto& pt : results) {
    s.push_back(pt.giant_cluster_fraction);
    r.status.push_back(status_of(pt.report));
    if (o.per_node) mu.push_back(pt.node_probabilities);
  }
  r.add_series("S", s);
  if (o.per_node) r.per_node.emplace_back("mu", std::move(mu));
  r.scalars.emplace_back("max_neighborhood_edges", static_cast<double>(model->max_neighborhood_edges()));
  r.scalars.emplace_back("overlap_edges", static_cast<double>(model->overlap_edges()));
  r.provenance = provenance("loopy-percolate", src, o, seed);
  r.provenance.config.emplace_back("r", std::to_string(o.r));
  r.provenance.config.emplace_back("mode", o.mode);
  return finish(r, o, out, r.all_converged());
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const auto seed = resolve_seed(o);
  auto grid = points(o, "--p", "--p-grid");
  for (double p : grid)
    if (!(p >= 0.0 && p <= 1.0)) throw UsageError("p must lie in [0,1]");
  if (o.reps == 0) throw UsageError("--reps must be >= 1");
  auto src = make_source(o, seed);
  require_nodes(src.graph);
  SweepResult r;
  r.parameter = "p";
  r.grid = grid;
  std::vector<double> s, se;
  std::vector<std::vector<double>> mem;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    // one stream family per grid point
    auto st = oracle::percolation_sim(src.graph, grid[k], o.reps, stream_seed(seed, k), o.threads);
    s.push_back(st.mean_s);
    se.push_back(st.std_error);
    if (o.per_node) mem.push_back(st.membership);
  }
  r.add_series("S", s);
  r.add_series("std_error", se);
  if (o.per_node) r.per_node.emplace_back("membership", std::move(mem));
  r.provenance = provenance("simulate", src, o, seed);
  r.provenance.config = {{"reps", std::to_string(o.reps)}};
  return finish(r, o, out, true);
}

int cmd_generate(const Options& o, std::ostream& out) {
  const auto seed = resolve_seed(o);
  Options g = o;
  g.gen = o.spec;
  g.graph_path.clear();
  auto src = make_source(g, seed);
  emit(write_edge_list(src.graph), o, out);
  return ok;
}

void add_source(CLI::App* sub, Options& o) {
  sub->add_option("--graph", o.graph_path, "edge-list file");
  sub->add_option("--gen", o.gen, "generator kind:args (er:n:p, regular:n:d, sbm:n:q:cin:cout, clustered:n:t:s, "
                                  "tree:n, complete:n, cycle:n, path:n, star:k)");
  sub->add_option("--seed", o.seed, "random seed (fallback: NETMP_SEED, then 0)");
  sub->add_option("--out", o.out_path, "output file (written atomically)");
}

void add_solver(CLI::App* sub, Options& o) {
  sub->add_option("--tol", o.tol, "convergence tolerance (L-inf change per sweep)");
  sub->add_option("--max-iter", o.max_iter, "maximum sweeps per point");
  sub->add_option("--damping", o.damping, "fraction of the old message kept each sweep");
  sub->add_option("--schedule", o.schedule, "sync or seq (default: seq for communities, sync otherwise)");
  sub->add_option("--threads", o.threads, "OpenMP threads (0: default, 1: serial)");
  sub->add_option("--format", o.format, "csv or json");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Message passing on sparse networks", "netmp"};
  app.require_subcommand(1);
  app.set_version_flag("--version", NETMP_VERSION);
  Options o;

  auto* perc = app.add_subcommand("percolate", "bond percolation S(p) by message passing");
  add_source(perc, o);
  add_solver(perc, o);
  perc->add_option("--p", o.point, "single occupation probability");
  perc->add_option("--p-grid", o.grid, "a:b:step");
  perc->add_flag("--per-node", o.per_node, "also emit per-node mu_i");

  auto* thr = app.add_subcommand("threshold", "non-backtracking eigenvalue, p_c and T_c");
  add_source(thr, o);
  thr->add_option("--tol", o.tol, "power-iteration tolerance");
  thr->add_option("--max-iter", o.max_iter, "power-iteration steps");
  thr->add_option("--format", o.format, "text, csv or json")->default_str("text");

  auto* ising = app.add_subcommand("ising", "Ising magnetization |m|(T)");
  add_source(ising, o);
  add_solver(ising, o);
  ising->add_option("--T", o.point, "single temperature");
  ising->add_option("--T-grid", o.grid, "a:b:step, ascending");
  ising->add_flag("--log-z", o.log_z, "also emit log Z and free energy");

  auto* spec = app.add_subcommand("spectrum", "adjacency spectral density");
  add_source(spec, o);
  add_solver(spec, o);
  spec->add_option("--eta", o.eta, "Lorentzian broadening")->capture_default_str();
  spec->add_option("--x", o.grid, "a:b:step or single x");

  auto* comm = app.add_subcommand("communities", "SBM belief propagation");
  add_source(comm, o);
  add_solver(comm, o);
  comm->add_option("--q", o.q, "number of groups");
  comm->add_option("--c-in", o.c_in, "mean within-group degree parameter");
  comm->add_option("--c-out", o.c_out, "mean between-group degree parameter");
  comm->add_flag("--truth", o.truth, "score against the planted labels");
  comm->add_option("--truth-file", o.truth_file, "labels, one per line");

  auto* loopy = app.add_subcommand("loopy-percolate", "percolation with short loops");
  add_source(loopy, o);
  add_solver(loopy, o);
  loopy->add_option("--p", o.point, "single occupation probability");
  loopy->add_option("--p-grid", o.grid, "a:b:step");
  loopy->add_option("--r", o.r, "maximum primitive-cycle length")->capture_default_str();
  loopy->add_option("--mode", o.mode, "exact or mc:SAMPLES")->capture_default_str();
  loopy->add_flag("--per-node", o.per_node, "also emit per-node mu_i");

  auto* sim = app.add_subcommand("simulate", "direct percolation simulation");
  add_source(sim, o);
  sim->add_option("--p", o.point, "single occupation probability");
  sim->add_option("--p-grid", o.grid, "a:b:step");
  sim->add_option("--reps", o.reps, "repetitions per point")->capture_default_str();
  sim->add_option("--threads", o.threads, "OpenMP threads (0: default, 1: serial)");
  sim->add_option("--format", o.format, "csv or json");
  sim->add_flag("--per-node", o.per_node, "also emit per-node membership");

  auto* gen = app.add_subcommand("generate", "write a generated graph as an edge list");
  gen->add_option("spec", o.spec, "generator kind:args")->required();
  gen->add_option("--seed", o.seed, "random seed (fallback: NETMP_SEED, then 0)");
  gen->add_option("--out", o.out_path, "output file (written atomically)");

  std::vector<const char*> argv{"netmp"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return usage;
  }

  if (thr->parsed() && o.format == "csv" && thr->count("--format") == 0) o.format = "text";
  try {
    if (perc->parsed()) return cmd_percolate(o, out);
    if (thr->parsed()) return cmd_threshold(o, out);
    if (ising->parsed()) return cmd_ising(o, out);
    if (spec->parsed()) return cmd_spectrum(o, out);
    if (comm->parsed()) return cmd_communities(o, out);
    if (loopy->parsed()) return cmd_loopy(o, out);
    if (sim->parsed()) return cmd_simulate(o, out);
    if (gen->parsed()) return cmd_generate(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return failure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return failure;
  }
  return usage;
}

}  // namespace netmp::cli
