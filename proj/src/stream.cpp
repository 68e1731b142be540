#include "lpcc/stream.hpp"

#include <algorithm>
#include <chrono>
#include <queue>
#include <stdexcept>
#include <string>

namespace lpcc::stream {

namespace {

// Stage 1 also remembers the previous target to validate the input order.
struct Stage1State {
  StreamState stream;
  VertexId last_u = 0;
};

// Stage 2 keys its group with StreamState (last_v = v, l_v = u of the group)
// and remembers the previous tag to validate OLD-before-NEW order.
struct Stage2State {
  StreamState group;
  Tag last_tag = Tag::Old;
};

void merge_peak(PassProbe& peak, const PassProbe& probe) {
  peak.state_bytes = std::max(peak.state_bytes, probe.state_bytes);
  peak.inputs = std::max(peak.inputs, probe.inputs);
  peak.lookahead_per_input = std::max(peak.lookahead_per_input, probe.lookahead_per_input);
}

RecordStream memory_from(std::span<const TaggedEdge> records) {
  RecordStream s = RecordStream::memory();
  for (const auto& r : records) s.append(r);
  s.seal();
  return s;
}

std::vector<DirectedEdge> edges_of(const RecordStream& s) {
  std::vector<DirectedEdge> out;
  out.reserve(s.size());
  for (auto r = s.reader(); r.peek() != nullptr; r.advance()) out.push_back(r.peek()->edge);
  return out;
}

}  // namespace

Stage1Counts stage1_pass(const RecordStream& sorted_edges, RecordStream& out) {
  Stage1Counts counts;
  counts.probe = {sizeof(Stage1State), 1, 1};
  Stage1State st;
  StreamState& state = st.stream;
  VertexId& last_u = st.last_u;
  for (auto r = sorted_edges.reader(); r.peek() != nullptr; r.advance()) {
    const auto [v, u] = r.peek()->edge;
    ++counts.records_in;
    if (v != state.last_v) {
      if (state.last_v != kNoVertex && v < state.last_v)
        throw std::runtime_error("stage 1 input not sorted: source vertex decreased");
      state.l_v = std::min(v, u);
      state.last_v = v;
      if (u == state.l_v) {
        out.append({{v, u}, Tag::New});
        out.append({{u, v}, Tag::New});
        counts.sym_new += 2;
      }
    } else {
      if (u < last_u) throw std::runtime_error("stage 1 input not sorted: target decreased in group");
      if (v != state.l_v) {
        out.append({{u, state.l_v}, Tag::New});
        out.append({{v, u}, Tag::Old});
        ++counts.lp_new;
        ++counts.old;
      }
    }
    last_u = u;
  }
  out.seal();
  return counts;
}

void sort_pass(const RecordStream& in, RecordStream& out, const SortOptions& options) {
  if (in.backend() == Backend::Memory || in.size() <= options.run_records) {
    auto records = in.to_vector();
    std::sort(records.begin(), records.end());
    for (const auto& r : records) out.append(r);
    out.seal();
    return;
  }
  if (options.scratch == nullptr) throw std::invalid_argument("external sort needs a scratch directory");

  // Sorted runs, then a k-way merge.
  std::vector<RecordStream> runs;
  std::vector<TaggedEdge> chunk;
  chunk.reserve(options.run_records);
  auto spill = [&] {
    std::sort(chunk.begin(), chunk.end());
    RecordStream run = RecordStream::file(options.scratch->next_path("run"));
    for (const auto& r : chunk) run.append(r);
    run.seal();
    runs.push_back(std::move(run));
    chunk.clear();
  };
  for (auto r = in.reader(); r.peek() != nullptr; r.advance()) {
    chunk.push_back(*r.peek());
    if (chunk.size() == options.run_records) spill();
  }
  if (!chunk.empty()) spill();
  chunk.shrink_to_fit();

  std::vector<RecordStream::Reader> readers;
  readers.reserve(runs.size());
  for (const auto& run : runs) readers.push_back(run.reader());
  using Head = std::pair<TaggedEdge, std::size_t>;
  std::priority_queue<Head, std::vector<Head>, std::greater<>> heap;
  for (std::size_t i = 0; i < readers.size(); ++i)
    if (readers[i].peek() != nullptr) heap.emplace(*readers[i].peek(), i);
  while (!heap.empty()) {
    auto [record, i] = heap.top();
    heap.pop();
    out.append(record);
    readers[i].advance();
    if (readers[i].peek() != nullptr) heap.emplace(*readers[i].peek(), i);
  }
  out.seal();
}

Stage2Counts stage2_pass(const RecordStream& sorted, const RecordStream* previous,
                         RecordStream& out, bool dedup) {
  Stage2Counts counts;
  counts.probe = {sizeof(Stage2State), previous != nullptr ? std::size_t{2} : std::size_t{1}, 1};
  std::optional<RecordStream::Reader> prev;
  if (previous != nullptr) prev.emplace(previous->reader());
  bool same = true;
  auto emit = [&](const DirectedEdge& e) {
    out.append({e, Tag::New});
    ++counts.emitted;
    if (prev) {
      if (prev->peek() == nullptr || prev->peek()->edge != e)
        same = false;
      else
        prev->advance();
    }
  };

  Stage2State st;
  std::size_t new_records = 0;
  for (auto r = sorted.reader(); r.peek() != nullptr; r.advance()) {
    const TaggedEdge rec = *r.peek();
    ++counts.records_in;
    const DirectedEdge key{st.group.last_v, st.group.l_v};
    const bool same_group = st.group.last_v != kNoVertex && rec.edge == key;
    if (same_group ? rec.tag < st.last_tag : (st.group.last_v != kNoVertex && rec.edge < key))
      throw std::runtime_error("stage 2 input not sorted");
    st.last_tag = rec.tag;
    if (!same_group) st.group = {rec.edge.v, rec.edge.u};
    if (rec.tag == Tag::New) {
      ++new_records;
      // OLD sorts first, so a group opening with NEW has no OLD copy.
      if (!dedup || !same_group) emit(rec.edge);
    }
  }
  out.seal();
  counts.dups_removed = new_records - counts.emitted;
  counts.same_as_previous = prev && same && prev->peek() == nullptr;
  return counts;
}

std::vector<TaggedEdge> stage1_pass(std::span<const DirectedEdge> sorted_edges) {
  RecordStream in = RecordStream::memory();
  for (const auto& e : sorted_edges) in.append({e, Tag::New});
  in.seal();
  RecordStream out = RecordStream::memory();
  stage1_pass(in, out);
  return out.to_vector();
}

std::vector<TaggedEdge> sort_pass(std::span<const TaggedEdge> records) {
  RecordStream in = memory_from(records);
  RecordStream out = RecordStream::memory();
  sort_pass(in, out);
  return out.to_vector();
}

std::vector<DirectedEdge> stage2_pass(std::span<const TaggedEdge> sorted, bool dedup) {
  RecordStream in = memory_from(sorted);
  RecordStream out = RecordStream::memory();
  stage2_pass(in, nullptr, out, dedup);
  return edges_of(out);
}

Result run_streamsort(const Graph& graph, const Options& options) {
  using clock = std::chrono::steady_clock;
  const std::size_t n = graph.n();
  const std::size_t max_steps = options.max_steps != 0 ? options.max_steps : default_max_steps(n);
  ScratchDir scratch(options.scratch_root);
  const SortOptions sort_options{&scratch, options.sort_run_records};

  Result result;
  PassLedger& ledger = result.ledger;

  RecordStream current = scratch.make(options.backend, "edges");
  {
    RecordStream initial = scratch.make(options.backend, "initial");
    for (const auto& e : to_initial_state(graph).edges) initial.append({e, Tag::New});
    initial.seal();
    sort_pass(initial, current, sort_options);
    ++ledger.sorting_passes;
  }

  for (std::size_t step = 1;; ++step) {
    if (options.exact_steps == 0 && step > max_steps) {
      throw ConvergenceError("stream engine: no fixed point within " + std::to_string(max_steps) +
                                 " steps",
                             std::move(result.run.per_step));
    }
    const auto t0 = clock::now();
    RecordStream staged = scratch.make(options.backend, "staged");
    const Stage1Counts s1 = stage1_pass(current, staged);
    RecordStream sorted = scratch.make(options.backend, "sorted");
    sort_pass(staged, sorted, sort_options);
    staged = RecordStream::memory();
    RecordStream next = scratch.make(options.backend, "edges");
    const Stage2Counts s2 = stage2_pass(sorted, &current, next, options.dedup);

    ledger.streaming_passes += 2;
    ledger.sorting_passes += 1;
    ledger.per_step.emplace_back(2, 1);
    merge_peak(ledger.peak, s1.probe);
    merge_peak(ledger.peak, s2.probe);

    StepStats stats;
    stats.step = step;
    stats.edges_in = s1.records_in;
    stats.edges_out = s2.emitted;
    stats.lp_count = s1.lp_new;
    stats.sym_count = s1.sym_new;
    stats.dups_removed = s2.dups_removed;
    stats.wall_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    result.run.per_step.push_back(stats);

    if (options.observer) {
      const auto edges = edges_of(next);
      options.observer(step, edges);
    }
    current = std::move(next);
    const bool done =
        options.exact_steps != 0 ? step == options.exact_steps : s2.same_as_previous;
    if (done) {
      result.run.steps = step;
      break;
    }
  }

  // Label extraction: first u of each sorted source group is its minimum neighbor.
  std::vector<VertexId> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = graph.id_at(i);
  StreamState state;
  for (auto r = current.reader(); r.peek() != nullptr; r.advance()) {
    const auto [v, u] = r.peek()->edge;
    if (v == state.last_v) continue;
    state = {v, std::min(v, u)};
    labels[v] = graph.id_at(state.l_v);
  }
  ++ledger.streaming_passes;
  merge_peak(ledger.peak, {sizeof(StreamState), 1, 1});
  result.run.labels = std::move(labels);
  return result;
}

}  // namespace lpcc::stream
