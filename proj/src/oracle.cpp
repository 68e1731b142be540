#include "lpcc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "lpcc/pram.hpp"
#include "lpcc/stream.hpp"

namespace lpcc::oracle {

namespace {

// Union by smaller root keeps every root the minimum of its set.
class MinUnionFind {
 public:
  explicit MinUnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), VertexId{0});
  }

  VertexId find(VertexId x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(VertexId a, VertexId b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent_[a] = b;
  }

 private:
  std::vector<VertexId> parent_;
};

}  // namespace

std::size_t ComponentLabeling::components() const {
  std::size_t count = 0;
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (labels[i] == vertices[i]) ++count;
  return count;
}

std::vector<VertexId> dense_components(std::size_t n, std::span<const DirectedEdge> edges) {
  MinUnionFind uf(n);
  for (const auto& e : edges) uf.unite(e.v, e.u);
  std::vector<VertexId> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = uf.find(i);
  return labels;
}

ComponentLabeling oracle_components(const Graph& graph) {
  MinUnionFind uf(graph.n());
  for (const auto& e : graph.edges()) uf.unite(graph.index_of(e.a), graph.index_of(e.b));
  ComponentLabeling out;
  out.vertices.assign(graph.vertices().begin(), graph.vertices().end());
  out.labels.resize(graph.n());
  for (std::size_t i = 0; i < graph.n(); ++i) out.labels[i] = graph.id_at(uf.find(i));
  return out;
}

ComponentLabeling labeling_of(const Graph& graph, std::vector<VertexId> labels) {
  if (labels.size() != graph.n()) throw std::invalid_argument("labels do not cover the graph");
  return {{graph.vertices().begin(), graph.vertices().end()}, std::move(labels)};
}

std::string PartitionDiff::report() const {
  std::ostringstream out;
  if (same) {
    out << "labelings identical\n";
    return out.str();
  }
  out << mismatches << " vertices differ";
  if (mismatches > first.size()) out << " (first " << first.size() << " shown)";
  out << '\n';
  for (const auto& m : first)
    out << "  vertex " << m.vertex << ": expected " << m.expected << ", got " << m.actual << '\n';
  return out.str();
}

PartitionDiff assert_same_partition(const ComponentLabeling& expected,
                                    const ComponentLabeling& actual) {
  if (expected.vertices != actual.vertices)
    throw std::invalid_argument("labelings cover different vertex universes");
  PartitionDiff diff;
  for (std::size_t i = 0; i < expected.vertices.size(); ++i) {
    if (expected.labels[i] == actual.labels[i]) continue;
    diff.same = false;
    ++diff.mismatches;
    if (diff.first.size() < 100)
      diff.first.push_back({expected.vertices[i], expected.labels[i], actual.labels[i]});
  }
  return diff;
}

std::uint64_t fib_gap(std::size_t k) {
  if (k == 0) throw std::invalid_argument("G_k is defined for k >= 1");
  std::uint64_t prev = 1, cur = 2;  // G_0 = 1 continues the recurrence backwards
  for (std::size_t i = 1; i < k; ++i) {
    const std::uint64_t next =
        prev > std::numeric_limits<std::uint64_t>::max() - cur ? std::numeric_limits<std::uint64_t>::max()
                                                                : prev + cur;
    prev = cur;
    cur = next;
  }
  return cur;
}

FibVerdict check_fib_profile(std::uint64_t n, std::size_t k, std::span<const VertexId> labels) {
  if (k == 0) throw std::invalid_argument("fib profile is defined after at least one step");
  if (labels.size() != n) throw std::invalid_argument("label array size differs from n");
  const std::uint64_t gap = fib_gap(k);
  for (VertexId v = 1; v <= n; ++v) {
    const VertexId expected = v - 1 >= gap ? v - gap : 1;
    if (labels[v - 1] != expected) return {false, v, expected, labels[v - 1]};
  }
  return {};
}

FibVerdict check_fib_profile(std::uint64_t n, std::size_t k,
                             std::span<const std::vector<VertexId>> history) {
  if (k >= history.size())
    throw std::out_of_range("step " + std::to_string(k) + " not in recorded history");
  return check_fib_profile(n, k, history[k]);
}

GraphKind parse_graph_kind(std::string_view name) {
  if (name == "four_path") return GraphKind::FourPath;
  if (name == "star_pair") return GraphKind::StarPair;
  if (name == "seq_path") return GraphKind::SeqPath;
  if (name == "path") return GraphKind::Path;
  throw std::invalid_argument("unknown graph kind '" + std::string(name) + "'");
}

double step_bound(GraphKind kind, std::uint64_t n) {
  const double log_n = std::log2(static_cast<double>(std::max<std::uint64_t>(n, 1)));
  switch (kind) {
    case GraphKind::FourPath:
    case GraphKind::StarPair:
      return 3.0;
    case GraphKind::SeqPath: {
      const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
      return std::ceil(log_n / std::log2(phi) - 1e-9) + 3.0;
    }
    case GraphKind::Path:
      return 3.0 + 3.0 * log_n;
  }
  throw std::invalid_argument("unknown graph kind");
}

bool check_step_bounds(GraphKind kind, std::uint64_t n, std::size_t observed_steps) {
  return static_cast<double>(observed_steps) <= step_bound(kind, n);
}

std::vector<VertexId> expected_label_two_holders(std::size_t terms) {
  std::vector<VertexId> out;
  for (std::size_t j = 0; j < terms; ++j) out.push_back(j == 0 ? 3 : 2 + fib_gap(j));
  return out;
}

DuplicationReport duplication_stress(std::uint64_t n) {
  if (n < 16) throw std::invalid_argument("duplication stress needs n >= 16");
  const Graph path = generate_seq_path(n);
  DuplicationReport report;
  report.n = n;
  report.two_m = 2 * path.m();

  stream::Options with;
  with.observer = [&](std::size_t, std::span<const DirectedEdge> edges) {
    report.edges_with_dedup.push_back(edges.size());
  };
  const auto deduped = stream::run_streamsort(path, with);
  report.max_with_dedup =
      *std::max_element(report.edges_with_dedup.begin(), report.edges_with_dedup.end());

  stream::Options without;
  without.dedup = false;
  without.exact_steps = deduped.run.steps;
  without.observer = [&](std::size_t, std::span<const DirectedEdge> edges) {
    report.edges_without_dedup.push_back(edges.size());
  };
  stream::run_streamsort(path, without);
  std::size_t run = 0;
  std::size_t previous = report.two_m;
  for (std::size_t count : report.edges_without_dedup) {
    run = count > previous ? run + 1 : 0;
    report.longest_growth_run = std::max(report.longest_growth_run, run);
    previous = count;
  }

  // Label-2 holders in L_1, L_2, ... of the base algorithm on the same path.
  auto holder = [](std::span<const VertexId> dense) -> VertexId {
    VertexId found = 0;
    for (std::size_t i = 0; i < dense.size(); ++i) {
      if (dense[i] != 1) continue;  // dense 1 is vertex 2
      if (found != 0) return 0;
      found = i + 1;
    }
    return found;
  };
  DenseState initial = to_initial_state(path);
  std::vector<VertexId> holders{holder(initial.labels)};
  pram::Options options;
  options.threads = 1;
  options.observer = [&](std::size_t, std::span<const DirectedEdge>, std::span<const VertexId> labels) {
    if (holders.back() != 0) holders.push_back(holder(labels));
  };
  pram::run_state(std::move(initial), options);
  while (!holders.empty() && holders.back() == 0) holders.pop_back();
  report.label_two_holders = holders;
  const auto expected = expected_label_two_holders(holders.size());
  report.sequence_matches = holders.size() >= 4 && holders == expected;
  return report;
}

}  // namespace lpcc::oracle
