#pragma once

#include <atomic>
#include <functional>
#include <span>

#include "lpcc/graph.hpp"
#include "lpcc/types.hpp"

namespace lpcc::pram {

/// Lowers `cell` to `candidate` if smaller. Compare-and-exchange only tests
/// equality, so the relational test is repeated after every failed exchange;
/// a contender whose value is not below the current one (including the
/// winner, once its value is stored) leaves the loop.
/// Returns the value the cell held when this call lowered it, or kNoVertex
/// if the call did not change the cell.
inline VertexId min_combine(VertexId& cell, VertexId candidate) noexcept {
  std::atomic_ref<VertexId> ref(cell);
  VertexId current = ref.load(std::memory_order_relaxed);
  while (candidate < current) {
    if (ref.compare_exchange_weak(current, candidate, std::memory_order_relaxed)) return current;
  }
  return kNoVertex;
}

/// One step of label propagation + symmetrization over E_k.
///
/// `labels_out` must already hold a copy of `labels_in` (double-buffered mode)
/// or be the same array (eager mode). `out` must have room for in.size()
/// edges; it is filled completely, in an order that depends on scheduling.
/// `threads` <= 0 uses the OpenMP default.
StepStats lp_step(std::span<const DirectedEdge> in, std::span<const VertexId> labels_in,
                  std::span<DirectedEdge> out, std::span<VertexId> labels_out, int threads = 0);

namespace serial {
/// Reference step: out[i] is the replacement of in[i].
StepStats lp_step(std::span<const DirectedEdge> in, std::span<const VertexId> labels_in,
                  std::span<DirectedEdge> out, std::span<VertexId> labels_out);
}  // namespace serial

/// Called after step k with E_{k+1} and L_{k+1} (dense).
using StepObserver =
    std::function<void(std::size_t step, std::span<const DirectedEdge>, std::span<const VertexId>)>;

struct Options {
  int threads = 0;
  /// 0 selects 4 * (ceil(log2 n) + 8).
  std::size_t max_steps = 0;
  /// Single label array read and written in place; gives up schedule determinism.
  bool eager_labels = false;
  /// When nonzero, run exactly this many steps and ignore the halting counter.
  std::size_t fixed_steps = 0;
  /// Use the serial reference kernel.
  bool serial = false;
  StepObserver observer;
};

/// Runs from an arbitrary dense state. Labels in the result are dense.
RunResult run_state(DenseState state, const Options& options = {});

/// Runs on a graph; labels in the result are vertex ids aligned with graph.vertices().
RunResult run(const Graph& graph, const Options& options = {});

}  // namespace lpcc::pram
