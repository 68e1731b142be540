#include "lpcc/mapreduce.hpp"

#include <omp.h>

#include <chrono>
#include <stdexcept>
#include <string>

namespace lpcc::mapreduce {

Reduce1Counts reduce1(VertexId key, std::span<const VertexId> values,
                      std::vector<TaggedKeyValue>& out) {
  Reduce1Counts counts;
  if (values.empty()) return counts;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == key) throw std::runtime_error("reduce-1: loop at key " + std::to_string(key));
    if (i > 0 && values[i] <= values[i - 1])
      throw std::runtime_error("reduce-1: values for key " + std::to_string(key) +
                               " not strictly ascending");
  }
  const VertexId label = std::min(key, values.front());
  if (key == label) return counts;
  out.push_back({key, {label, Tag::New}});
  out.push_back({label, {key, Tag::New}});
  counts.sym_new = 2;
  for (VertexId u : values) {
    if (u == label) continue;
    out.push_back({u, {label, Tag::New}});
    out.push_back({key, {u, Tag::Old}});
    ++counts.lp_new;
    ++counts.old;
  }
  return counts;
}

void reduce2(VertexId key, std::span<const TaggedValue> values, std::vector<KeyValue>& out) {
  for (std::size_t i = 0; i < values.size();) {
    if (i > 0 && values[i] < values[i - 1])
      throw std::runtime_error("reduce-2: values for key " + std::to_string(key) + " not sorted");
    const VertexId u = values[i].vertex;
    if (values[i].tag == Tag::New) out.push_back({key, u});
    for (++i; i < values.size() && values[i].vertex == u; ++i) {
      if (values[i] < values[i - 1])
        throw std::runtime_error("reduce-2: values for key " + std::to_string(key) + " not sorted");
    }
  }
}

namespace {

template <class In, class Out, class Reducer>
std::vector<Out> run_reducers(const ShuffleResult<In>& shuffled, int threads, Reducer&& reducer) {
  const auto tasks = static_cast<std::ptrdiff_t>(shuffled.reducers.size());
  std::vector<std::vector<Out>> outputs(shuffled.reducers.size());
  std::exception_ptr failure;
#pragma omp parallel for num_threads(threads) schedule(dynamic, 1)
  for (std::ptrdiff_t t = 0; t < tasks; ++t) {
    try {
      const auto& input = shuffled.reducers[static_cast<std::size_t>(t)];
      auto& out = outputs[static_cast<std::size_t>(t)];
      for (std::size_t g = 0; g < input.groups(); ++g) reducer(input.keys[g], input.group(g), out);
    } catch (...) {
#pragma omp critical(lpcc_mapreduce_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<Out> merged;
  std::size_t total = 0;
  for (const auto& o : outputs) total += o.size();
  merged.reserve(total);
  for (auto& o : outputs) merged.insert(merged.end(), o.begin(), o.end());
  return merged;
}

}  // namespace

Result run_mapreduce(const Graph& graph, const Options& options) {
  using clock = std::chrono::steady_clock;
  const std::size_t n = graph.n();
  const std::size_t max_steps = options.max_steps != 0 ? options.max_steps : default_max_steps(n);
  const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
  const std::size_t reducers = std::max<std::size_t>(1, options.reducers);

  std::vector<KeyValue> current;
  for (const auto& e : to_initial_state(graph).edges) current.push_back({e.v, e.u});
  std::sort(current.begin(), current.end());

  Result result;
  std::size_t round = 0;
  for (std::size_t step = 1;; ++step) {
    if (step > max_steps) {
      throw ConvergenceError("mapreduce engine: no fixed point within " +
                                 std::to_string(max_steps) + " steps",
                             std::move(result.run.per_step));
    }
    const auto t0 = clock::now();

    // Round 1: identity map, shuffle, Reduce-1.
    auto shuffled1 = shuffle(current, reducers);
    std::size_t old_pairs = 0;
    std::vector<TaggedKeyValue> tagged = run_reducers<VertexId, TaggedKeyValue>(
        shuffled1, threads,
        [](VertexId key, std::span<const VertexId> values, std::vector<TaggedKeyValue>& out) {
          reduce1(key, values, out);
        });
    for (const auto& p : tagged) {
      if (p.value.tag == Tag::Old) ++old_pairs;
    }
    result.rounds.push_back({++round, shuffled1.pairs_routed, tagged.size(), shuffled1.max_group});
    shuffled1 = {};

    // Round 2: identity map, shuffle, Reduce-2.
    const std::size_t tagged_count = tagged.size();
    auto shuffled2 = shuffle(std::move(tagged), reducers);
    std::vector<KeyValue> next = run_reducers<TaggedValue, KeyValue>(
        shuffled2, threads,
        [](VertexId key, std::span<const TaggedValue> values, std::vector<KeyValue>& out) {
          reduce2(key, values, out);
        });
    result.rounds.push_back({++round, shuffled2.pairs_routed, next.size(), shuffled2.max_group});
    shuffled2 = {};
    std::sort(next.begin(), next.end());

    const std::size_t new_count = tagged_count - old_pairs;
    StepStats stats;
    stats.step = step;
    stats.edges_in = current.size();
    stats.edges_out = next.size();
    // Each propagated pair comes with exactly one OLD pair.
    stats.lp_count = old_pairs;
    stats.sym_count = new_count - old_pairs;
    stats.dups_removed = new_count - next.size();
    stats.comm_pairs = tagged_count + next.size();
    stats.wall_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    result.run.per_step.push_back(stats);

    if (options.observer) {
      std::vector<DirectedEdge> edges;
      edges.reserve(next.size());
      for (const auto& p : next) edges.push_back({p.key, p.value});
      options.observer(step, edges);
    }
    const bool fixed_point = next == current;
    current = std::move(next);
    if (fixed_point) {
      result.run.steps = step;
      break;
    }
  }

  std::vector<VertexId> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = graph.id_at(i);
  for (std::size_t i = 0; i < current.size();) {
    const VertexId key = current[i].key;
    labels[key] = graph.id_at(std::min(key, current[i].value));
    while (i < current.size() && current[i].key == key) ++i;
  }
  result.run.labels = std::move(labels);
  return result;
}

}  // namespace lpcc::mapreduce
