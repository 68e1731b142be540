#include "lpcc/graph.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

namespace lpcc {

namespace {

template <class T>
void sort_unique(std::vector<T>& values) {
  if (!std::is_sorted(values.begin(), values.end())) std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

// Unbiased draw in [0, bound) by rejection; output depends only on mt19937_64.
std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

}  // namespace

Graph::Graph(std::vector<VertexId> vertices, std::vector<UndirectedEdge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
  sort_unique(vertices_);
  if (!vertices_.empty() && vertices_.back() > kMaxVertexId)
    throw std::invalid_argument("vertex id exceeds 2^63-1");
  for (auto& e : edges_) {
    if (e.a == e.b) throw std::invalid_argument("graph contains a loop at " + std::to_string(e.a));
    if (e.a > e.b) std::swap(e.a, e.b);
  }
  sort_unique(edges_);
  contiguous_ = !vertices_.empty() && vertices_.back() - vertices_.front() + 1 == vertices_.size();
  for (const auto& e : edges_) {
    if (!contains(e.a) || !contains(e.b))
      throw std::invalid_argument("edge endpoint outside the vertex universe");
  }
}

bool Graph::contains(VertexId id) const noexcept {
  if (vertices_.empty()) return false;
  if (contiguous_) return id >= vertices_.front() && id <= vertices_.back();
  return std::binary_search(vertices_.begin(), vertices_.end(), id);
}

std::size_t Graph::index_of(VertexId id) const {
  if (!contains(id)) throw std::out_of_range("vertex " + std::to_string(id) + " not in graph");
  if (contiguous_) return static_cast<std::size_t>(id - vertices_.front());
  return static_cast<std::size_t>(std::lower_bound(vertices_.begin(), vertices_.end(), id) -
                                  vertices_.begin());
}

LoadResult load_edge_list(std::string_view text) {
  LoadResult result;
  std::vector<VertexId> vertices;
  std::vector<UndirectedEdge> edges;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    std::size_t i = 0;
    while (i < line.size() && is_space(line[i])) ++i;
    if (i == line.size() || line[i] == '#') continue;

    VertexId ids[2];
    for (int t = 0; t < 2; ++t) {
      while (i < line.size() && is_space(line[i])) ++i;
      if (i == line.size()) throw ParseError(line_no, "expected two vertex ids");
      const char* first = line.data() + i;
      const char* last = line.data() + line.size();
      auto [ptr, ec] = std::from_chars(first, last, ids[t]);
      if (ec == std::errc::result_out_of_range || (ec == std::errc{} && ids[t] > kMaxVertexId))
        throw ParseError(line_no, "vertex id out of range (must be < 2^63)");
      if (ec != std::errc{} || (ptr != last && !is_space(*ptr)))
        throw ParseError(line_no, "malformed vertex id '" +
                                      std::string(first, std::find_if(first, last, is_space)) + "'");
      i = static_cast<std::size_t>(ptr - line.data());
    }
    while (i < line.size() && is_space(line[i])) ++i;
    if (i != line.size()) throw ParseError(line_no, "trailing tokens after two vertex ids");

    vertices.push_back(ids[0]);
    vertices.push_back(ids[1]);
    if (ids[0] == ids[1]) {
      ++result.report.loops_dropped;
      continue;
    }
    edges.push_back({std::min(ids[0], ids[1]), std::max(ids[0], ids[1])});
  }
  result.report.lines = line_no;
  const std::size_t raw_edges = edges.size();
  sort_unique(edges);
  result.report.duplicates_dropped = raw_edges - edges.size();
  result.graph = Graph(std::move(vertices), std::move(edges));
  return result;
}

LoadResult load_edge_list_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open edge list " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw std::runtime_error("read failed for " + path.string());
  try {
    return load_edge_list(text);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path.string() + ": " + e.what());
  }
}

void write_edge_list(const Graph& graph, std::ostream& out) {
  std::vector<bool> touched(graph.n(), false);
  for (const auto& e : graph.edges()) {
    touched[graph.index_of(e.a)] = true;
    touched[graph.index_of(e.b)] = true;
  }
  for (std::size_t i = 0; i < graph.n(); ++i)
    if (!touched[i]) out << graph.id_at(i) << ' ' << graph.id_at(i) << '\n';
  for (const auto& e : graph.edges()) out << e.a << ' ' << e.b << '\n';
  if (!out) throw std::runtime_error("failed writing edge list");
}

Graph generate_seq_path(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("path needs at least one vertex");
  std::vector<VertexId> vertices(n);
  std::iota(vertices.begin(), vertices.end(), VertexId{1});
  std::vector<UndirectedEdge> edges;
  edges.reserve(n - 1);
  for (VertexId v = 1; v < n; ++v) edges.push_back({v, v + 1});
  return Graph(std::move(vertices), std::move(edges));
}

std::vector<VertexId> shuffled_path_order(std::uint64_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("path needs at least one vertex");
  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), VertexId{1});
  std::mt19937_64 rng(seed);
  for (std::uint64_t i = n - 1; i > 0; --i) std::swap(order[i], order[bounded_draw(rng, i + 1)]);
  return order;
}

Graph generate_shuffled_path(std::uint64_t n, std::uint64_t seed) {
  auto order = shuffled_path_order(n, seed);
  std::vector<UndirectedEdge> edges;
  edges.reserve(n - 1);
  for (std::size_t i = 0; i + 1 < order.size(); ++i)
    edges.push_back({std::min(order[i], order[i + 1]), std::max(order[i], order[i + 1])});
  return Graph(std::move(order), std::move(edges));
}

Graph generate_gnp(std::uint64_t n, double c, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("G(n,p) needs at least one vertex");
  if (!(c >= 0.0)) throw std::invalid_argument("G(n,p) needs c >= 0");
  std::vector<VertexId> vertices(n);
  std::iota(vertices.begin(), vertices.end(), VertexId{0});
  std::vector<UndirectedEdge> edges;
  const double p = std::min(1.0, c / static_cast<double>(n));
  if (p > 0.0 && n > 1) {
    std::mt19937_64 rng(seed);
    auto uniform = [&] { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; };
    const double log_q = std::log1p(-p);
    // Walk the strictly upper triangle row by row: (v, w) with w < v.
    std::uint64_t v = 1;
    std::int64_t w = -1;
    while (v < n) {
      const double skip = p >= 1.0 ? 0.0 : std::floor(std::log(uniform()) / log_q);
      w += 1 + static_cast<std::int64_t>(std::min(skip, 1e18));
      while (v < n && w >= static_cast<std::int64_t>(v)) {
        w -= static_cast<std::int64_t>(v);
        ++v;
      }
      if (v < n) edges.push_back({static_cast<VertexId>(w), v});
    }
  }
  return Graph(std::move(vertices), std::move(edges));
}

StarPair generate_star_pair(std::uint64_t left_leaves, std::uint64_t right_leaves,
                            LinkDirection link) {
  constexpr std::uint64_t kLimit = std::uint64_t{1} << 40;
  if (left_leaves > kLimit || right_leaves > kLimit)
    throw std::invalid_argument("star size too large");
  const VertexId left_root = 1;
  const VertexId right_root = left_leaves + 2;
  const VertexId last = right_root + right_leaves;
  std::vector<VertexId> vertices(last);
  std::iota(vertices.begin(), vertices.end(), VertexId{1});
  std::vector<UndirectedEdge> edges;
  for (VertexId leaf = left_root + 1; leaf < right_root; ++leaf) edges.push_back({left_root, leaf});
  for (VertexId leaf = right_root + 1; leaf <= last; ++leaf) edges.push_back({right_root, leaf});
  edges.push_back({left_root, right_root});
  return {Graph(std::move(vertices), std::move(edges)), left_root, right_root, link};
}

DenseState to_initial_state(const Graph& graph) {
  DenseState state;
  state.n = graph.n();
  state.labels.resize(state.n);
  std::iota(state.labels.begin(), state.labels.end(), VertexId{0});
  state.edges.reserve(2 * graph.m());
  for (const auto& e : graph.edges()) {
    const VertexId a = graph.index_of(e.a);
    const VertexId b = graph.index_of(e.b);
    state.edges.push_back({a, b});
    state.edges.push_back({b, a});
    state.labels[a] = std::min(state.labels[a], b);
    state.labels[b] = std::min(state.labels[b], a);
  }
  return state;
}

DenseState star_pair_state(const StarPair& fixture) {
  const Graph& g = fixture.graph;
  const VertexId left = g.index_of(fixture.left_root);
  const VertexId right = g.index_of(fixture.right_root);
  DenseState state;
  state.n = g.n();
  state.labels.resize(state.n);
  std::iota(state.labels.begin(), state.labels.end(), VertexId{0});
  for (const auto& e : g.edges()) {
    const VertexId a = g.index_of(e.a);
    const VertexId b = g.index_of(e.b);
    if ((a == left && b == right) || (a == right && b == left)) continue;
    state.edges.push_back({a, b});
    state.edges.push_back({b, a});
  }
  if (fixture.link == LinkDirection::LeftToRight)
    state.edges.push_back({left, right});
  else
    state.edges.push_back({right, left});
  for (const auto& e : state.edges) {
    state.labels[e.v] = std::min(state.labels[e.v], e.u);
    state.labels[e.u] = std::min(state.labels[e.u], e.v);
  }
  return state;
}

std::vector<DirectedEdge> to_ids(const Graph& graph, std::span<const DirectedEdge> dense) {
  std::vector<DirectedEdge> out;
  out.reserve(dense.size());
  for (const auto& e : dense) out.push_back({graph.id_at(e.v), graph.id_at(e.u)});
  return out;
}

std::vector<VertexId> labels_to_ids(const Graph& graph, std::span<const VertexId> dense) {
  std::vector<VertexId> out(dense.size());
  for (std::size_t i = 0; i < dense.size(); ++i) out[i] = graph.id_at(dense[i]);
  return out;
}

void write_labels(const Graph& graph, std::span<const VertexId> labels, std::ostream& out) {
  if (labels.size() != graph.n())
    throw std::invalid_argument("label array does not cover the vertex universe");
  std::string buffer;
  buffer.reserve(1 << 16);
  char tmp[48];
  for (std::size_t i = 0; i < labels.size(); ++i) {
    // 20 digits max per id.
    auto* p = std::to_chars(tmp, tmp + 20, graph.id_at(i)).ptr;
    *p = '\t';
    p = std::to_chars(p + 1, p + 21, labels[i]).ptr;
    *p = '\n';
    buffer.append(tmp, p + 1);
    if (buffer.size() > (1 << 16) - 64) {
      out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
      buffer.clear();
    }
  }
  out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
  if (!out) throw std::runtime_error("failed writing labels");
}

std::vector<std::pair<VertexId, VertexId>> read_labels(std::string_view text) {
  std::vector<std::pair<VertexId, VertexId>> out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) throw ParseError(line_no, "expected 'v<TAB>label'");
    VertexId v = 0;
    VertexId label = 0;
    auto r1 = std::from_chars(line.data(), line.data() + tab, v);
    auto r2 = std::from_chars(line.data() + tab + 1, line.data() + line.size(), label);
    if (r1.ec != std::errc{} || r1.ptr != line.data() + tab || r2.ec != std::errc{} ||
        r2.ptr != line.data() + line.size())
      throw ParseError(line_no, "malformed label line");
    out.emplace_back(v, label);
  }
  return out;
}

void write_stats(std::span<const StepStats> stats, std::ostream& out) {
  out << kStatsHeader << '\n';
  for (const auto& s : stats) {
    out << s.step << ',' << s.edges_in << ',' << s.edges_out << ',' << s.lp_count << ','
        << s.sym_count << ',' << s.label_changes << ',' << s.dups_removed << ',' << s.comm_pairs
        << ',' << std::fixed << std::setprecision(3) << s.wall_ms << '\n';
  }
  if (!out) throw std::runtime_error("failed writing stats");
}

std::size_t default_max_steps(std::size_t n) {
  const std::size_t log2n = n <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(n - 1));
  return 4 * (log2n + 8);
}

}  // namespace lpcc
