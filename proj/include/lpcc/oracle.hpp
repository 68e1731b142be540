#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lpcc/graph.hpp"
#include "lpcc/types.hpp"

namespace lpcc::oracle {

/// Canonical labeling: label(v) = minimum id in v's component, aligned with
/// `vertices`.
struct ComponentLabeling {
  std::vector<VertexId> vertices;
  std::vector<VertexId> labels;

  std::size_t components() const;
  friend bool operator==(const ComponentLabeling&, const ComponentLabeling&) = default;
};

/// Union-find ground truth.
ComponentLabeling oracle_components(const Graph& graph);

/// Wraps an engine's id-space labels (aligned with graph.vertices()).
ComponentLabeling labeling_of(const Graph& graph, std::vector<VertexId> labels);

/// Dense union-find labels (dense values) over `n` vertices and `edges`.
std::vector<VertexId> dense_components(std::size_t n, std::span<const DirectedEdge> edges);

struct Mismatch {
  VertexId vertex;
  VertexId expected;
  VertexId actual;
};

struct PartitionDiff {
  bool same = true;
  std::size_t mismatches = 0;
  std::vector<Mismatch> first;  // at most 100

  std::string report() const;
};

/// Throws std::invalid_argument if the two labelings cover different universes.
PartitionDiff assert_same_partition(const ComponentLabeling& expected,
                                    const ComponentLabeling& actual);

/// G_1 = 2, G_2 = 3, G_k = G_{k-1} + G_{k-2}; saturates at UINT64_MAX.
std::uint64_t fib_gap(std::size_t k);

struct FibVerdict {
  bool pass = true;
  VertexId vertex = 0;
  VertexId expected = 0;
  VertexId actual = 0;
};

/// Labels after exactly k steps on generate_seq_path(n); `labels[i]` is the
/// label of vertex i+1. Every v with v-1 >= G_k must hold v - G_k, every
/// other v must hold 1. Throws std::invalid_argument for k == 0 or a size
/// mismatch.
FibVerdict check_fib_profile(std::uint64_t n, std::size_t k, std::span<const VertexId> labels);

/// Same check against a recorded history (history[k] = labels after k steps);
/// throws std::out_of_range when k is not recorded.
FibVerdict check_fib_profile(std::uint64_t n, std::size_t k,
                             std::span<const std::vector<VertexId>> history);

enum class GraphKind { FourPath, StarPair, SeqPath, Path };

/// Parses "four_path", "star_pair", "seq_path", "path"; throws std::invalid_argument otherwise.
GraphKind parse_graph_kind(std::string_view name);

/// Step bound for a kind: 3, 3, ceil(log_phi n) + 3, 3 + 3 * log2 n.
double step_bound(GraphKind kind, std::uint64_t n);
bool check_step_bounds(GraphKind kind, std::uint64_t n, std::size_t observed_steps);

struct DuplicationReport {
  std::uint64_t n = 0;
  std::size_t two_m = 0;
  std::vector<std::size_t> edges_with_dedup;
  std::vector<std::size_t> edges_without_dedup;
  std::size_t max_with_dedup = 0;
  /// Longest run of strictly increasing per-step counts without dedup.
  std::size_t longest_growth_run = 0;
  /// Vertex holding label 2 in L_1, L_2, ... on the same path (pram label arrays).
  std::vector<VertexId> label_two_holders;
  bool sequence_matches = false;

  bool bounded() const noexcept { return max_with_dedup <= two_m; }
};

/// Runs the extended operations on generate_seq_path(n) with and without
/// inter-step dedup. Throws std::invalid_argument for n < 16.
DuplicationReport duplication_stress(std::uint64_t n);

/// First terms of the label-2 holder sequence: 3, 4, 5, 7, 10, 15, 23, ...
std::vector<VertexId> expected_label_two_holders(std::size_t terms);

}  // namespace lpcc::oracle
