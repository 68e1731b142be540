#include "lpcc/pram.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <cassert>
#include <chrono>
#include <string>
#include <vector>

namespace lpcc::pram {

namespace {

// Edges a worker stages before reserving a block of the write half.
constexpr std::size_t kStagingCapacity = std::size_t{1} << 14;

int resolve_threads(int threads) { return threads > 0 ? threads : omp_get_max_threads(); }

}  // namespace

StepStats lp_step(std::span<const DirectedEdge> in, std::span<const VertexId> labels_in,
                  std::span<DirectedEdge> out, std::span<VertexId> labels_out, int threads) {
  const bool eager = labels_in.data() == labels_out.data();
  const std::size_t total = in.size();
  std::atomic<std::size_t> reserved{0};
  std::size_t lp = 0, sym = 0, changes = 0, lowered = 0;

#pragma omp parallel num_threads(resolve_threads(threads)) reduction(+ : lp, sym, changes, lowered)
  {
    const auto workers = static_cast<std::size_t>(omp_get_num_threads());
    const auto id = static_cast<std::size_t>(omp_get_thread_num());
    const std::size_t begin = total * id / workers;
    const std::size_t end = total * (id + 1) / workers;

    std::vector<DirectedEdge> staging;
    staging.reserve(std::min(kStagingCapacity, end - begin));
    auto flush = [&] {
      const std::size_t offset = reserved.fetch_add(staging.size(), std::memory_order_relaxed);
      std::copy(staging.begin(), staging.end(), out.begin() + static_cast<std::ptrdiff_t>(offset));
      staging.clear();
    };

    for (std::size_t i = begin; i < end; ++i) {
      const auto [v, u] = in[i];
      // Eager mode reads cells other workers may be lowering.
      const VertexId lv =
          eager ? std::atomic_ref<VertexId>(const_cast<VertexId&>(labels_in[v])).load(std::memory_order_relaxed)
                : labels_in[v];
      if (u != lv) {
        const VertexId prior = min_combine(labels_out[u], lv);
        if (prior != kNoVertex && (eager || prior == labels_in[u])) ++lowered;
        staging.push_back({u, lv});
        ++lp;
        if (lv != v) ++changes;
      } else {
        assert(u != v);
        staging.push_back({u, v});
        ++sym;
      }
      if (staging.size() == kStagingCapacity) flush();
    }
    if (!staging.empty()) flush();
  }

  StepStats stats;
  stats.edges_in = total;
  stats.edges_out = reserved.load();
  stats.lp_count = lp;
  stats.sym_count = sym;
  stats.label_changes = changes;
  stats.cells_lowered = lowered;
  return stats;
}

RunResult run_state(DenseState state, const Options& options) {
  using clock = std::chrono::steady_clock;
  const std::size_t n = state.n;
  const std::size_t edge_count = state.edges.size();
  const std::size_t max_steps =
      options.max_steps != 0 ? options.max_steps : default_max_steps(n);
  const int threads = resolve_threads(options.threads);

  // One 2|E| work list; halves swap read/write roles every step.
  std::vector<DirectedEdge> work(2 * edge_count);
  std::copy(state.edges.begin(), state.edges.end(), work.begin());
  state.edges = {};
  std::span<DirectedEdge> halves[2] = {std::span(work).first(edge_count),
                                       std::span(work).subspan(edge_count)};

  std::vector<VertexId> current = std::move(state.labels);
  std::vector<VertexId> next;
  if (!options.eager_labels) next.resize(n);

  RunResult result;
  std::size_t last_change_step = 0;
  if (edge_count == 0) {
    result.labels = std::move(current);
    return result;
  }

  for (std::size_t step = 1;; ++step) {
    if (options.fixed_steps == 0 && step > max_steps) {
      throw ConvergenceError("no convergence within " + std::to_string(max_steps) + " steps",
                             std::move(result.per_step));
    }
    const auto t0 = clock::now();
    std::span<const DirectedEdge> read = halves[(step - 1) % 2];
    std::span<DirectedEdge> write = halves[step % 2];
    StepStats stats;
    if (options.eager_labels) {
      stats = options.serial ? serial::lp_step(read, current, write, current)
                             : lp_step(read, current, write, current, threads);
    } else {
#pragma omp parallel for num_threads(threads) schedule(static)
      for (std::size_t i = 0; i < n; ++i) next[i] = current[i];
      stats = options.serial ? serial::lp_step(read, current, write, next)
                             : lp_step(read, current, write, next, threads);
      current.swap(next);
    }
    stats.step = step;
    stats.wall_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    if (stats.cells_lowered != 0) last_change_step = step;
    result.per_step.push_back(stats);
    if (options.observer) options.observer(step, write, current);

    const bool done = options.fixed_steps != 0 ? step == options.fixed_steps
                                               : stats.label_changes == 0;
    if (done) {
      result.steps = step;
      break;
    }
  }
  result.stable_step = last_change_step + 1;
  result.labels = std::move(current);
  return result;
}

RunResult run(const Graph& graph, const Options& options) {
  RunResult result = run_state(to_initial_state(graph), options);
  for (auto& label : result.labels) label = graph.id_at(label);
  return result;
}

}  // namespace lpcc::pram
