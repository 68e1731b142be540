#include <doctest.h>

#include "helpers.hpp"
#include "lpcc/oracle.hpp"
#include "lpcc/pram.hpp"

using namespace lpcc;
using namespace lpcc::oracle;

TEST_SUITE("oracle") {
  TEST_CASE("union-find labels") {
    const Graph g = lpcc::testing::fig1_graph();
    CHECK(oracle_components(g).labels == std::vector<VertexId>{1, 1, 1, 1});
    const Graph iso({7, 9}, {});
    CHECK(oracle_components(iso).labels == std::vector<VertexId>{7, 9});
    CHECK(oracle_components(iso).components() == 2);
  }

  TEST_CASE("partition diff") {
    const Graph g = load_edge_list("0 1\n").graph;
    const auto a = labeling_of(g, {0, 0});
    CHECK(assert_same_partition(a, a).same);
    const auto diff = assert_same_partition(a, labeling_of(g, {0, 1}));
    CHECK_FALSE(diff.same);
    REQUIRE(diff.first.size() == 1);
    CHECK(diff.first[0].vertex == 1);
    CHECK(diff.report().find("vertex 1") != std::string::npos);
    CHECK_THROWS_AS(assert_same_partition(a, labeling_of(Graph({0, 2}, {}), {0, 2})),
                    std::invalid_argument);
    CHECK_THROWS_AS(labeling_of(g, {0}), std::invalid_argument);
  }

  TEST_CASE("gap sequence") {
    CHECK(fib_gap(1) == 2);
    CHECK(fib_gap(2) == 3);
    CHECK(fib_gap(3) == 5);
    CHECK(fib_gap(6) == 21);
    CHECK(fib_gap(200) == std::numeric_limits<std::uint64_t>::max());
    CHECK_THROWS_AS(fib_gap(0), std::invalid_argument);
  }

  TEST_CASE("fib profile examples") {
    // Brute-force three steps of the serial kernel on the 100-path.
    const std::uint64_t n = 100;
    std::vector<std::vector<VertexId>> history{{}};
    pram::Options options;
    options.serial = true;
    options.observer = [&](std::size_t, std::span<const DirectedEdge>, std::span<const VertexId> l) {
      std::vector<VertexId> ids(l.begin(), l.end());
      for (auto& x : ids) ++x;
      history.push_back(ids);
    };
    pram::run(generate_seq_path(n), options);
    CHECK(history[3][49] == 45);
    for (VertexId v = 3; v <= n; ++v) CHECK(history[1][v - 1] == v - 2);
    CHECK(check_fib_profile(n, 3, history).pass);
    CHECK(check_fib_profile(n, 1, history).pass);

    auto broken = history[2];
    broken[60] = 1;
    const auto verdict = check_fib_profile(n, 2, broken);
    CHECK_FALSE(verdict.pass);
    CHECK(verdict.vertex == 61);
    CHECK_THROWS_AS(check_fib_profile(n, history.size(), history), std::out_of_range);
    CHECK(check_fib_profile(4, 30, std::vector<VertexId>{1, 1, 1, 1}).pass);
  }

  TEST_CASE("step bounds") {
    CHECK(check_step_bounds(GraphKind::SeqPath, std::uint64_t{1} << 20, 31));
    CHECK(step_bound(GraphKind::SeqPath, std::uint64_t{1} << 20) == 32.0);
    CHECK(check_step_bounds(GraphKind::FourPath, 4, 3));
    CHECK_FALSE(check_step_bounds(GraphKind::FourPath, 4, 5));
    CHECK(step_bound(GraphKind::Path, 256) == 27.0);
    CHECK(parse_graph_kind("star_pair") == GraphKind::StarPair);
    CHECK_THROWS_AS(parse_graph_kind("tree"), std::invalid_argument);
  }

  TEST_CASE("duplication stress on the 64-path") {
    const auto r = duplication_stress(64);
    CHECK(r.two_m == 126);
    CHECK(r.max_with_dedup <= 126);
    CHECK(r.bounded());
    CHECK(r.longest_growth_run >= 3);
    CHECK(r.sequence_matches);
    CHECK(std::vector<VertexId>(r.label_two_holders.begin(), r.label_two_holders.begin() + 4) ==
          std::vector<VertexId>{3, 4, 5, 7});
    CHECK(expected_label_two_holders(7) == std::vector<VertexId>{3, 4, 5, 7, 10, 15, 23});
    CHECK_THROWS_AS(duplication_stress(8), std::invalid_argument);
  }
}
