#include <doctest.h>

#include <filesystem>

#include "helpers.hpp"
#include "lpcc/bench.hpp"
#include "lpcc/oracle.hpp"
#include "lpcc/pram.hpp"
#include "lpcc/stream.hpp"

using namespace lpcc;
using lpcc::testing::fig1_graph;
using lpcc::testing::sorted;
using stream::RecordStream;

namespace {

constexpr Tag N = Tag::New;
constexpr Tag O = Tag::Old;

const std::vector<DirectedEdge> kFig1E1{{1, 3}, {2, 4}, {3, 1}, {3, 4}, {4, 2}, {4, 3}};
const std::vector<TaggedEdge> kFig1Stage1{{{3, 1}, N}, {{1, 3}, N}, {{4, 1}, N}, {{3, 4}, O},
                                          {{4, 2}, N}, {{2, 4}, N}, {{3, 2}, N}, {{4, 3}, O}};

std::vector<std::vector<DirectedEdge>> stream_trace(const Graph& g, stream::Options options = {}) {
  std::vector<std::vector<DirectedEdge>> out;
  options.observer = [&](std::size_t, std::span<const DirectedEdge> e) { out.push_back(to_ids(g, e)); };
  stream::run_streamsort(g, options);
  return out;
}

}  // namespace

TEST_SUITE("stream") {
  TEST_CASE("stage 1 on the four-vertex path") {
    CHECK(sorted(stream::stage1_pass(kFig1E1)) == sorted(kFig1Stage1));
    CHECK(stream::stage1_pass(std::vector<DirectedEdge>{{1, 3}, {1, 5}}).empty());
    CHECK(stream::stage1_pass(std::vector<DirectedEdge>{{3, 1}}) ==
          std::vector<TaggedEdge>{{{3, 1}, N}, {{1, 3}, N}});
  }

  TEST_CASE("stage 1 rejects unsorted input") {
    CHECK_THROWS_AS(stream::stage1_pass(std::vector<DirectedEdge>{{3, 1}, {2, 4}}), std::runtime_error);
    CHECK_THROWS_AS(stream::stage1_pass(std::vector<DirectedEdge>{{3, 4}, {3, 1}}), std::runtime_error);
  }

  TEST_CASE("sort pass orders OLD before NEW") {
    CHECK(stream::sort_pass(std::vector<TaggedEdge>{{{3, 1}, N}, {{3, 1}, O}}) ==
          std::vector<TaggedEdge>{{{3, 1}, O}, {{3, 1}, N}});
    CHECK(stream::sort_pass(std::vector<TaggedEdge>{}).empty());
    std::vector<DirectedEdge> keys;
    for (const auto& r : stream::sort_pass(kFig1Stage1)) keys.push_back(r.edge);
    CHECK(keys == std::vector<DirectedEdge>{{1, 3}, {2, 4}, {3, 1}, {3, 2}, {3, 4}, {4, 1}, {4, 2}, {4, 3}});
  }

  TEST_CASE("stage 2 membership and dedup") {
    CHECK(stream::stage2_pass(stream::sort_pass(kFig1Stage1)) ==
          std::vector<DirectedEdge>{{1, 3}, {2, 4}, {3, 1}, {3, 2}, {4, 1}, {4, 2}});
    CHECK(stream::stage2_pass(std::vector<TaggedEdge>{{{5, 2}, N}, {{5, 2}, N}}) ==
          std::vector<DirectedEdge>{{5, 2}});
    CHECK(stream::stage2_pass(std::vector<TaggedEdge>{{{5, 2}, O}, {{5, 2}, N}}).empty());
    CHECK(stream::stage2_pass(std::vector<TaggedEdge>{{{5, 2}, N}, {{5, 2}, N}}, false).size() == 2);
    CHECK_THROWS_AS(stream::stage2_pass(std::vector<TaggedEdge>{{{5, 2}, N}, {{4, 2}, N}}),
                    std::runtime_error);
    CHECK_THROWS_AS(stream::stage2_pass(std::vector<TaggedEdge>{{{5, 2}, N}, {{5, 2}, O}}),
                    std::runtime_error);
  }

  TEST_CASE("record streams round trip through files") {
    stream::ScratchDir scratch;
    auto s = scratch.make(stream::Backend::File, "rt");
    const std::vector<TaggedEdge> records{{{1, 2}, N}, {{kMaxVertexId, 0}, O}, {{5, 5}, N}};
    for (const auto& r : records) s.append(r);
    s.seal();
    CHECK(s.size() == 3);
    CHECK(s.to_vector() == records);
    CHECK_THROWS(s.append(records[0]));
  }

  TEST_CASE("external sort with small runs matches std::sort") {
    stream::ScratchDir scratch;
    auto in = scratch.make(stream::Backend::File, "in");
    std::vector<TaggedEdge> records;
    for (VertexId i = 0; i < 5000; ++i)
      records.push_back({{(i * 7919) % 613, (i * 104729) % 389}, (i % 3) ? N : O});
    for (const auto& r : records) in.append(r);
    in.seal();
    auto out = scratch.make(stream::Backend::File, "out");
    stream::sort_pass(in, out, {&scratch, 97});
    CHECK(out.to_vector() == sorted(records));
  }

  TEST_CASE("run: four-vertex path reaches the rooted star") {
    const auto r = stream::run_streamsort(fig1_graph());
    CHECK(r.run.labels == std::vector<VertexId>{1, 1, 1, 1});
    const auto t = stream_trace(fig1_graph());
    CHECK(t.back() == std::vector<DirectedEdge>{{1, 2}, {1, 3}, {1, 4}, {2, 1}, {3, 1}, {4, 1}});
  }

  TEST_CASE("run: single edge is already a fixed point") {
    const Graph g = load_edge_list("0 1\n").graph;
    const auto r = stream::run_streamsort(g);
    CHECK(r.run.steps == 1);
    CHECK(r.run.labels == std::vector<VertexId>{0, 0});
    CHECK(stream_trace(g) == std::vector<std::vector<DirectedEdge>>{{{0, 1}, {1, 0}}});
  }

  TEST_CASE("run: pass ledger and working-state probe") {
    const Graph g = generate_gnp(300, 2.0, 8);
    const auto r = stream::run_streamsort(g);
    CHECK(r.ledger.per_step.size() == r.run.steps);
    for (const auto& [streaming, sorting] : r.ledger.per_step) {
      CHECK(streaming == 2);
      CHECK(sorting == 1);
    }
    CHECK(r.ledger.streaming_passes <= 2 * (r.run.steps + 2));
    CHECK(r.ledger.peak.state_bytes <= 3 * sizeof(VertexId));
    CHECK(r.ledger.peak.lookahead_per_input == 1);
    CHECK(r.ledger.peak.inputs <= 2);
  }

  TEST_CASE("file backend matches memory backend") {
    const Graph g = generate_gnp(2000, 1.5, 21);
    stream::Options file;
    file.backend = stream::Backend::File;
    file.sort_run_records = 500;
    CHECK(stream_trace(g, file) == stream_trace(g));
    CHECK(stream::run_streamsort(g, file).run.labels == oracle::oracle_components(g).labels);
  }

  TEST_CASE("sequential path: within the bound of the pram engine") {
    const Graph g = generate_seq_path(std::uint64_t{1} << 16);
    const auto s = stream::run_streamsort(g);
    const auto p = pram::run(g);
    CHECK(s.run.labels == p.labels);
    const double slack = oracle::step_bound(oracle::GraphKind::SeqPath, g.n());
    CHECK(static_cast<double>(s.run.steps) <= static_cast<double>(p.steps) + slack);
  }

  TEST_CASE("step budget overrun") {
    stream::Options options;
    options.max_steps = 2;
    CHECK_THROWS_AS(stream::run_streamsort(generate_seq_path(100), options), ConvergenceError);
  }

  TEST_CASE("scratch directory is removed") {
    std::filesystem::path where;
    {
      stream::ScratchDir scratch;
      where = scratch.next_path("x").parent_path();
      CHECK(std::filesystem::exists(where));
    }
    CHECK_FALSE(std::filesystem::exists(where));
  }

  TEST_CASE("labels match the oracle on the corpus") {
    for (const auto& item : bench::test_corpus(100, 128, 77))
      CHECK_MESSAGE(stream::run_streamsort(item.graph).run.labels ==
                        oracle::oracle_components(item.graph).labels,
                    item.name);
  }
}
