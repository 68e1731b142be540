#include <doctest.h>

#include <random>
#include <thread>

#include "helpers.hpp"
#include "lpcc/bench.hpp"
#include "lpcc/oracle.hpp"
#include "lpcc/pram.hpp"

using namespace lpcc;
using lpcc::testing::fig1_graph;
using lpcc::testing::id_multiset;
using lpcc::testing::sorted;

namespace {

struct Step {
  std::vector<DirectedEdge> edges;
  std::vector<VertexId> labels;
  StepStats stats;
};

Step step_of(const std::vector<DirectedEdge>& edges, const std::vector<VertexId>& labels,
             bool use_serial, int threads = 1) {
  Step s{std::vector<DirectedEdge>(edges.size()), labels, {}};
  s.stats = use_serial ? pram::serial::lp_step(edges, labels, s.edges, s.labels)
                       : pram::lp_step(edges, labels, s.edges, s.labels, threads);
  return s;
}

// Per-step edge multisets (sorted) and labels of a run.
struct Trace {
  std::vector<std::vector<DirectedEdge>> edges;
  std::vector<std::vector<VertexId>> labels;
  RunResult result;
};

Trace trace(const Graph& g, pram::Options options) {
  Trace t;
  options.observer = [&](std::size_t, std::span<const DirectedEdge> e, std::span<const VertexId> l) {
    t.edges.push_back(sorted(to_ids(g, e)));
    t.labels.push_back(labels_to_ids(g, l));
  };
  t.result = pram::run(g, options);
  return t;
}

}  // namespace

TEST_SUITE("pram") {
  TEST_CASE("four-vertex path: steps 1 and 2") {
    const Graph g = fig1_graph();
    const DenseState s = to_initial_state(g);
    for (bool use_serial : {true, false}) {
      const Step two = step_of(s.edges, s.labels, use_serial);
      CHECK(id_multiset(g, two.edges) ==
            sorted(std::vector<DirectedEdge>{{3, 1}, {1, 3}, {4, 1}, {3, 2}, {2, 4}, {4, 2}}));
      CHECK(labels_to_ids(g, two.labels) == std::vector<VertexId>{1, 2, 1, 1});

      const Step three = step_of(two.edges, two.labels, use_serial);
      CHECK(id_multiset(g, three.edges) ==
            sorted(std::vector<DirectedEdge>{{1, 3}, {3, 1}, {1, 4}, {2, 1}, {2, 1}, {4, 2}}));
      CHECK(labels_to_ids(g, three.labels) == std::vector<VertexId>{1, 1, 1, 1});
    }
  }

  TEST_CASE("four-vertex path run") {
    const auto t = trace(fig1_graph(), {});
    CHECK(t.result.labels == std::vector<VertexId>{1, 1, 1, 1});
    CHECK(t.result.stable_step == 3);
    CHECK(t.result.steps == 4);
    CHECK(t.result.per_step.back().label_changes == 0);
  }

  TEST_CASE("single edge step") {
    const Graph g = load_edge_list("0 1\n").graph;
    const DenseState s = to_initial_state(g);
    const Step next = step_of(s.edges, s.labels, true);
    CHECK(sorted(next.edges) == sorted(s.edges));
    CHECK(next.labels == s.labels);
    CHECK(next.stats.label_changes == 0);
    const auto r = pram::run(g);
    CHECK(r.steps == 1);
    CHECK(r.labels == std::vector<VertexId>{0, 0});
  }

  TEST_CASE("isolated vertices and empty graph") {
    const Graph g({7, 9}, {});
    const auto r = pram::run(g);
    CHECK(r.labels == std::vector<VertexId>{7, 9});
    CHECK(r.steps == 0);
    CHECK(pram::run(Graph{}).labels.empty());
  }

  TEST_CASE("min_combine") {
    VertexId cell = 7;
    CHECK(pram::min_combine(cell, 5) == 7);
    CHECK(pram::min_combine(cell, 3) == 5);
    CHECK(pram::min_combine(cell, 9) == kNoVertex);
    CHECK(cell == 3);
    VertexId two = 2;
    CHECK(pram::min_combine(two, 2) == kNoVertex);
    CHECK(two == 2);
    VertexId one = 1;
    pram::min_combine(one, 4);
    CHECK(one == 1);
  }

  TEST_CASE("min_combine under contention") {
    VertexId cell = kMaxVertexId;
    std::vector<std::thread> workers;
    for (int t = 0; t < 8; ++t) {
      workers.emplace_back([&cell, t] {
        std::mt19937_64 rng(t);
        for (int i = 0; i < 20000; ++i) pram::min_combine(cell, 100 + rng() % 1000000);
        pram::min_combine(cell, 50 + t);
      });
    }
    for (auto& w : workers) w.join();
    CHECK(cell == 50);
  }

  TEST_CASE("serial and OpenMP kernels agree") {
    for (const auto& item : bench::test_corpus(60, 300, 11)) {
      DenseState s = to_initial_state(item.graph);
      for (int k = 0; k < 6 && !s.edges.empty(); ++k) {
        const Step a = step_of(s.edges, s.labels, true);
        const Step b = step_of(s.edges, s.labels, false, 4);
        REQUIRE_MESSAGE(sorted(a.edges) == sorted(b.edges), item.name);
        REQUIRE(a.labels == b.labels);
        CHECK(a.stats.label_changes == b.stats.label_changes);
        CHECK(a.stats.lp_count == b.stats.lp_count);
        s.edges = a.edges;
        s.labels = a.labels;
      }
    }
  }

  TEST_CASE("per-step properties on the corpus") {
    for (const auto& item : bench::test_corpus(80, 64, 5)) {
      const Graph& g = item.graph;
      const auto truth = oracle::oracle_components(g);
      std::vector<VertexId> previous = labels_to_ids(g, to_initial_state(g).labels);
      pram::Options options;
      options.threads = 2;
      options.observer = [&](std::size_t, std::span<const DirectedEdge> e, std::span<const VertexId> l) {
        CHECK(e.size() == 2 * g.m());
        for (const auto& x : e) REQUIRE(x.v != x.u);
        // Same components as the input graph.
        const auto dense = oracle::dense_components(g.n(), e);
        REQUIRE_MESSAGE(labels_to_ids(g, dense) == truth.labels, item.name);
        const auto now = labels_to_ids(g, l);
        for (std::size_t i = 0; i < now.size(); ++i) REQUIRE(now[i] <= previous[i]);
        previous = now;
      };
      const auto r = pram::run(g, options);
      for (const auto& st : r.per_step) {
        CHECK(st.edges_in == 2 * g.m());
        CHECK(st.edges_out == st.lp_count + st.sym_count);
      }
      CHECK(r.labels == truth.labels);
    }
  }

  TEST_CASE("double-buffered runs are schedule independent") {
    const Graph base = generate_gnp(400, 2.0, 17);
    const auto reference = trace(base, {.threads = 1});
    for (int t : {2, 4, 8}) {
      const auto other = trace(base, {.threads = t});
      CHECK(other.edges == reference.edges);
      CHECK(other.labels == reference.labels);
      CHECK(other.result.steps == reference.result.steps);
    }
    const auto serial_run = trace(base, {.serial = true});
    CHECK(serial_run.edges == reference.edges);
  }

  TEST_CASE("eager labels still find the components") {
    for (const auto& item : bench::test_corpus(40, 200, 3)) {
      pram::Options options;
      options.eager_labels = true;
      options.threads = 4;
      CHECK(pram::run(item.graph, options).labels == oracle::oracle_components(item.graph).labels);
    }
  }

  TEST_CASE("sequential path follows the gap sequence") {
    const std::uint64_t n = 1000;
    std::vector<std::vector<VertexId>> history{{}};
    pram::Options options;
    options.observer = [&](std::size_t, std::span<const DirectedEdge>, std::span<const VertexId> l) {
      std::vector<VertexId> ids(l.begin(), l.end());
      for (auto& x : ids) ++x;
      history.push_back(ids);
    };
    const auto r = pram::run(generate_seq_path(n), options);
    for (std::size_t k = 1; k < history.size() && oracle::fib_gap(k) < n / 2; ++k)
      CHECK_MESSAGE(oracle::check_fib_profile(n, k, history).pass, "k=", k);
    CHECK(oracle::check_step_bounds(oracle::GraphKind::SeqPath, n, r.steps));
  }

  TEST_CASE("step budget overrun reports partial stats") {
    pram::Options options;
    options.max_steps = 3;
    try {
      pram::run(generate_seq_path(256), options);
      FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
      CHECK(e.partial_stats().size() == 3);
    }
  }
}
