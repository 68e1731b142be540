#pragma once

#include <algorithm>
#include <functional>
#include <span>
#include <vector>

#include "lpcc/graph.hpp"
#include "lpcc/types.hpp"

namespace lpcc::mapreduce {

struct TaggedValue {
  VertexId vertex;
  Tag tag;

  friend constexpr auto operator<=>(const TaggedValue&, const TaggedValue&) = default;
};

template <class Value>
struct Pair {
  VertexId key;
  Value value;

  friend constexpr auto operator<=>(const Pair&, const Pair&) = default;
};

using KeyValue = Pair<VertexId>;
using TaggedKeyValue = Pair<TaggedValue>;

/// One reducer's input: groups in ascending key order, values sorted within
/// each group. Group g owns values[offsets[g], offsets[g+1]).
template <class Value>
struct ReducerInput {
  std::vector<VertexId> keys;
  std::vector<std::size_t> offsets{0};
  std::vector<Value> values;

  std::size_t groups() const noexcept { return keys.size(); }
  std::span<const Value> group(std::size_t g) const noexcept {
    return std::span(values).subspan(offsets[g], offsets[g + 1] - offsets[g]);
  }
};

template <class Value>
struct ShuffleResult {
  std::vector<ReducerInput<Value>> reducers;
  std::size_t pairs_routed = 0;
  std::size_t max_group = 0;
};

/// Routes each key to reducer key % reducers. Grouping and value order are
/// independent of the input order.
template <class Value>
ShuffleResult<Value> shuffle(std::vector<Pair<Value>> pairs, std::size_t reducers) {
  if (reducers == 0) reducers = 1;
  std::sort(pairs.begin(), pairs.end());
  ShuffleResult<Value> result;
  result.reducers.resize(reducers);
  result.pairs_routed = pairs.size();
  for (std::size_t i = 0; i < pairs.size();) {
    const VertexId key = pairs[i].key;
    auto& target = result.reducers[key % reducers];
    target.keys.push_back(key);
    std::size_t j = i;
    for (; j < pairs.size() && pairs[j].key == key; ++j) target.values.push_back(pairs[j].value);
    target.offsets.push_back(target.values.size());
    result.max_group = std::max(result.max_group, j - i);
    i = j;
  }
  return result;
}

struct Reduce1Counts {
  std::size_t lp_new = 0;
  std::size_t sym_new = 0;
  std::size_t old = 0;
};

/// Label propagation and symmetrization for one vertex. `values` is N_k(v),
/// strictly ascending and without v. Throws std::runtime_error otherwise.
Reduce1Counts reduce1(VertexId key, std::span<const VertexId> values,
                      std::vector<TaggedKeyValue>& out);

/// Emits <v,u> once per distinct u that has a NEW copy and no OLD copy.
/// `values` must be sorted with OLD before NEW per u.
void reduce2(VertexId key, std::span<const TaggedValue> values, std::vector<KeyValue>& out);

struct RoundLedger {
  std::size_t round = 0;
  std::size_t pairs_routed = 0;  // through the identity map
  std::size_t pairs_emitted = 0;
  std::size_t reducer_max_group = 0;
};

/// Called after step k with the post-Reduce-2 edges (dense, sorted).
using StepObserver = std::function<void(std::size_t step, std::span<const DirectedEdge>)>;

struct Options {
  std::size_t max_steps = 0;
  std::size_t reducers = 1;
  int threads = 0;
  StepObserver observer;
};

struct Result {
  RunResult run;
  std::vector<RoundLedger> rounds;

  std::size_t total_pairs_emitted() const noexcept {
    std::size_t total = 0;
    for (const auto& r : rounds) total += r.pairs_emitted;
    return total;
  }
};

/// Labels in the result are vertex ids aligned with graph.vertices().
Result run_mapreduce(const Graph& graph, const Options& options = {});

}  // namespace lpcc::mapreduce
