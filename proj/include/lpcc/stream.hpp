#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "lpcc/graph.hpp"
#include "lpcc/record_stream.hpp"
#include "lpcc/types.hpp"

namespace lpcc::stream {

/// The only mutable cross-record state a streaming stage keeps, besides one
/// lookahead record per input stream.
struct StreamState {
  VertexId last_v = kNoVertex;
  VertexId l_v = kNoVertex;
};

/// What a pass kept between records.
struct PassProbe {
  std::size_t state_bytes = 0;
  std::size_t inputs = 0;
  std::size_t lookahead_per_input = 0;
};

struct Stage1Counts {
  std::size_t records_in = 0;
  std::size_t lp_new = 0;
  std::size_t sym_new = 0;
  std::size_t old = 0;
  PassProbe probe;
};

/// Label propagation and symmetrization over E_k sorted by (v, u).
/// First edge (v,u) of a group sets l(v) = min(v,u) and, if u == l(v), emits
/// ((v,u),NEW), ((u,v),NEW). Every later edge of a group with v != l(v) emits
/// ((u,l(v)),NEW) and ((v,u),OLD). Throws std::runtime_error on unsorted input.
Stage1Counts stage1_pass(const RecordStream& sorted_edges, RecordStream& out);

struct SortOptions {
  ScratchDir* scratch = nullptr;  // required for file-backed input
  std::size_t run_records = std::size_t{1} << 20;
};

/// Orders records by (v, u, tag) with OLD before NEW. Output backend matches `out`.
void sort_pass(const RecordStream& in, RecordStream& out, const SortOptions& options = {});

struct Stage2Counts {
  std::size_t records_in = 0;
  std::size_t emitted = 0;
  std::size_t dups_removed = 0;
  /// Output equals `previous` record for record (only meaningful if previous was given).
  bool same_as_previous = false;
  PassProbe probe;
};

/// Emits each distinct (v,u) once iff it has a NEW copy and no OLD copy.
/// With `dedup` off every NEW copy passes and OLD copies are dropped.
/// If `previous` is given it is scanned in lockstep to detect a fixed point.
/// Throws std::runtime_error on unsorted input.
Stage2Counts stage2_pass(const RecordStream& sorted, const RecordStream* previous,
                         RecordStream& out, bool dedup = true);

// Vector conveniences over the memory backend.
std::vector<TaggedEdge> stage1_pass(std::span<const DirectedEdge> sorted_edges);
std::vector<TaggedEdge> sort_pass(std::span<const TaggedEdge> records);
std::vector<DirectedEdge> stage2_pass(std::span<const TaggedEdge> sorted, bool dedup = true);

struct PassLedger {
  std::size_t streaming_passes = 0;
  std::size_t sorting_passes = 0;
  /// (streaming, sorting) passes spent inside each step.
  std::vector<std::pair<std::size_t, std::size_t>> per_step;
  PassProbe peak;
};

/// Called after step k with the post-dedup E_{k+1} (dense, sorted).
using StepObserver = std::function<void(std::size_t step, std::span<const DirectedEdge>)>;

struct Options {
  /// 0 selects default_max_steps(n).
  std::size_t max_steps = 0;
  Backend backend = Backend::Memory;
  std::optional<std::filesystem::path> scratch_root;
  std::size_t sort_run_records = std::size_t{1} << 20;
  bool dedup = true;
  /// When nonzero, run exactly this many steps without the fixed-point halt.
  std::size_t exact_steps = 0;
  StepObserver observer;
};

struct Result {
  RunResult run;
  PassLedger ledger;
};

/// Labels in the result are vertex ids aligned with graph.vertices().
Result run_streamsort(const Graph& graph, const Options& options = {});

}  // namespace lpcc::stream
