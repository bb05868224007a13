#include "netmp/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "netmp/errors.hpp"
#include "netmp/union_find.hpp"

namespace netmp {

namespace {

struct Canonical {
  std::vector<Edge> edges;
  std::size_t self_loops = 0;
  std::size_t duplicates = 0;
};

Canonical canonicalize(std::span<const Edge> raw) {
  Canonical c;
  c.edges.reserve(raw.size());
  for (auto [u, v] : raw) {
    if (u == v) {
      ++c.self_loops;
      continue;
    }
    c.edges.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(c.edges.begin(), c.edges.end());
  auto last = std::unique(c.edges.begin(), c.edges.end());
  c.duplicates = static_cast<std::size_t>(c.edges.end() - last);
  c.edges.erase(last, c.edges.end());
  return c;
}

}  // namespace

Graph Graph::from_edges(std::size_t n, std::span<const Edge> raw) {
  Canonical c = canonicalize(raw);
  for (auto [u, v] : c.edges) n = std::max<std::size_t>(n, std::size_t{v} + 1);

  Graph g;
  g.offsets_.assign(n + 1, 0);
  for (auto [u, v] : c.edges) {
    ++g.offsets_[u + 1];
    ++g.offsets_[v + 1];
  }
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];

  g.neighbors_.resize(2 * c.edges.size());
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (auto [u, v] : c.edges) {
    g.neighbors_[cursor[u]++] = v;
    g.neighbors_[cursor[v]++] = u;
  }
  // Edges arrive sorted by (u, v) so each list is already sorted for the
  // larger-id neighbors, but the smaller-id ones are appended out of order.
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]),
              g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]));
  }
  return g;
}

bool Graph::has_edge(NodeId i, NodeId j) const noexcept {
  auto nb = neighbors(i);
  return std::binary_search(nb.begin(), nb.end(), j);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (NodeId i = 0; i < num_nodes(); ++i)
    for (NodeId j : neighbors(i))
      if (i < j) out.emplace_back(i, j);
  return out;
}

EdgeListLoad load_edge_list(std::string_view text) {
  std::vector<Edge> raw;
  std::size_t max_id_plus_one = 0;
  std::size_t line_no = 0;

  while (!text.empty()) {
    ++line_no;
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    std::uint64_t ids[2];
    int count = 0;
    std::size_t pos = 0;
    while (true) {
      while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
      if (pos == line.size()) break;
      std::size_t end = pos;
      while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) ++end;
      std::string_view tok = line.substr(pos, end - pos);
      if (count == 2) throw ParseError(line_no, "expected two node ids, found extra token '" + std::string(tok) + "'");
      std::uint64_t value = 0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
      if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw ParseError(line_no, "malformed node id '" + std::string(tok) + "'");
      if (value >= UINT32_MAX) throw ParseError(line_no, "node id out of range");
      ids[count++] = value;
      pos = end;
    }
    if (count == 0) continue;
    if (count == 1) throw ParseError(line_no, "expected two node ids, found one");
    raw.emplace_back(static_cast<NodeId>(ids[0]), static_cast<NodeId>(ids[1]));
    max_id_plus_one = std::max<std::size_t>(max_id_plus_one, std::max(ids[0], ids[1]) + 1);
  }

  Canonical c = canonicalize(raw);
  EdgeListLoad out;
  out.self_loops_dropped = c.self_loops;
  out.duplicates_dropped = c.duplicates;
  out.graph = Graph::from_edges(max_id_plus_one, c.edges);
  return out;
}

EdgeListLoad load_edge_list_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_edge_list(ss.str());
}

std::string write_edge_list(const Graph& g) {
  std::string out;
  out.reserve(g.num_edges() * 12);
  char buf[16];
  for (auto [u, v] : g.edges()) {
    out.append(buf, std::to_chars(buf, buf + sizeof buf, u).ptr);
    out += ' ';
    out.append(buf, std::to_chars(buf, buf + sizeof buf, v).ptr);
    out += '\n';
  }
  return out;
}

std::uint64_t graph_hash(const Graph& g) {
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&h](std::string_view s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 1099511628211ull;
    }
  };
  mix("n=" + std::to_string(g.num_nodes()) + "\n");
  mix(write_edge_list(g));
  return h;
}

Components components(const Graph& g) {
  const std::size_t n = g.num_nodes();
  UnionFind uf(n);
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j : g.neighbors(i))
      if (i < j) uf.unite(i, j);

  Components c;
  c.label.assign(n, 0);
  std::vector<std::uint32_t> root_label(n, UINT32_MAX);
  for (NodeId i = 0; i < n; ++i) {
    auto r = uf.find(i);
    if (root_label[r] == UINT32_MAX) {
      root_label[r] = static_cast<std::uint32_t>(c.sizes.size());
      c.sizes.push_back(0);
    }
    c.label[i] = root_label[r];
    ++c.sizes[c.label[i]];
  }
  for (std::uint32_t l = 0; l < c.sizes.size(); ++l)
    if (c.sizes[l] > c.sizes[c.largest]) c.largest = l;
  return c;
}

Graph permute(const Graph& g, std::span<const NodeId> perm) {
  if (perm.size() != g.num_nodes()) throw std::invalid_argument("permutation length mismatch");
  std::vector<Edge> edges;
  for (auto [u, v] : g.edges()) edges.emplace_back(perm[u], perm[v]);
  return Graph::from_edges(g.num_nodes(), edges);
}

bool is_forest(const Graph& g) {
  auto c = components(g);
  return g.num_edges() + c.sizes.size() == g.num_nodes();
}

}  // namespace netmp
