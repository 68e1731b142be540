#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "lpcc/types.hpp"

namespace lpcc {

/// Undirected edge stored canonically with a < b.
struct UndirectedEdge {
  VertexId a;
  VertexId b;

  friend constexpr auto operator<=>(const UndirectedEdge&, const UndirectedEdge&) = default;
};

/// Simple undirected graph over an explicit, sorted vertex universe.
///
/// Engines work on dense indices: index i stands for vertices()[i]. Since the
/// universe is sorted the mapping preserves order, and every algorithm here
/// only compares ids, so dense execution is equivalent to raw-id execution.
class Graph {
 public:
  Graph() = default;
  /// Takes any vertex list and edge list; normalizes both. Throws
  /// std::invalid_argument on loops, ids above kMaxVertexId, or endpoints
  /// outside the universe. Duplicate edges are collapsed.
  Graph(std::vector<VertexId> vertices, std::vector<UndirectedEdge> edges);

  std::size_t n() const noexcept { return vertices_.size(); }
  std::size_t m() const noexcept { return edges_.size(); }
  std::span<const VertexId> vertices() const noexcept { return vertices_; }
  std::span<const UndirectedEdge> edges() const noexcept { return edges_; }

  /// Dense index of an id; throws std::out_of_range if the id is not a vertex.
  std::size_t index_of(VertexId id) const;
  VertexId id_at(std::size_t index) const noexcept {
    return contiguous_ ? vertices_.front() + index : vertices_[index];
  }
  bool contains(VertexId id) const noexcept;

  friend bool operator==(const Graph& x, const Graph& y) {
    return x.vertices_ == y.vertices_ && x.edges_ == y.edges_;
  }

 private:
  std::vector<VertexId> vertices_;
  std::vector<UndirectedEdge> edges_;
  bool contiguous_ = false;
};

struct LoadReport {
  std::size_t lines = 0;
  std::size_t loops_dropped = 0;
  std::size_t duplicates_dropped = 0;
};

struct LoadResult {
  Graph graph;
  LoadReport report;
};

/// Parses a SNAP-style edge list: '#' comment lines, two whitespace-separated
/// ids per line. Loops are dropped but their vertex stays in the universe.
/// Reversed and repeated pairs collapse into one undirected edge.
LoadResult load_edge_list(std::string_view text);
LoadResult load_edge_list_file(const std::filesystem::path& path);

/// Writes one "a b" line per edge and a "v v" line per isolated vertex.
void write_edge_list(const Graph& graph, std::ostream& out);

Graph generate_seq_path(std::uint64_t n);
/// Path whose i-th vertex is perm[i], perm a Fisher-Yates shuffle of 1..n
/// driven by std::mt19937_64(seed).
Graph generate_shuffled_path(std::uint64_t n, std::uint64_t seed);
/// The permutation used by generate_shuffled_path, in path order.
std::vector<VertexId> shuffled_path_order(std::uint64_t n, std::uint64_t seed);

/// Sparse G(n, p) with p = c / n over ids 0..n-1, by geometric skipping over
/// the pairs i < j with a std::mt19937_64(seed) stream.
Graph generate_gnp(std::uint64_t n, double c, std::uint64_t seed);

enum class LinkDirection { LeftToRight, RightToLeft };

struct StarPair {
  Graph graph;
  VertexId left_root;
  VertexId right_root;
  LinkDirection link;
};

/// Two stars with `left_leaves` and `right_leaves` leaves. Left ids are
/// 1..left_leaves+1 (root 1); right ids follow (root left_leaves+2). The roots
/// are joined by one edge.
StarPair generate_star_pair(std::uint64_t left_leaves, std::uint64_t right_leaves,
                            LinkDirection link = LinkDirection::LeftToRight);

/// Returns a copy of `graph` with every vertex id v replaced by mapping(v).
/// `mapping` must be injective on the universe.
template <class Mapping>
Graph relabel(const Graph& graph, Mapping&& mapping) {
  std::vector<VertexId> vertices;
  vertices.reserve(graph.n());
  for (VertexId v : graph.vertices()) vertices.push_back(mapping(v));
  std::vector<UndirectedEdge> edges;
  edges.reserve(graph.m());
  for (const auto& e : graph.edges()) {
    VertexId a = mapping(e.a);
    VertexId b = mapping(e.b);
    edges.push_back(a < b ? UndirectedEdge{a, b} : UndirectedEdge{b, a});
  }
  return Graph(std::move(vertices), std::move(edges));
}

/// Per-step working state in dense index space.
struct DenseState {
  std::size_t n = 0;
  std::vector<DirectedEdge> edges;
  std::vector<VertexId> labels;
};

/// E_1 holds both twins of every edge; L_1[v] = min of v's closed neighborhood.
DenseState to_initial_state(const Graph& graph);

/// Dense star-pair state: all twins of the star edges, one directed edge
/// between the roots (orientation from `link`), and closed-neighborhood labels.
DenseState star_pair_state(const StarPair& fixture);

/// Maps a dense edge sequence back to vertex ids.
std::vector<DirectedEdge> to_ids(const Graph& graph, std::span<const DirectedEdge> dense);
/// Maps dense labels (dense values) to id-space labels aligned with vertices().
std::vector<VertexId> labels_to_ids(const Graph& graph, std::span<const VertexId> dense);

/// "v<TAB>label\n" per vertex, ascending v. `labels` is aligned with vertices().
void write_labels(const Graph& graph, std::span<const VertexId> labels, std::ostream& out);
/// Parses a labels file into (vertex, label) pairs in file order.
std::vector<std::pair<VertexId, VertexId>> read_labels(std::string_view text);

inline constexpr std::string_view kStatsHeader =
    "step,edges_in,edges_out,lp_count,sym_count,label_changes,dups_removed,comm_pairs,wall_ms";

void write_stats(std::span<const StepStats> stats, std::ostream& out);

/// Step budget used by every engine unless overridden: 4 * (ceil(log2 n) + 8).
std::size_t default_max_steps(std::size_t n);

}  // namespace lpcc
