// Serial reference vs OpenMP kernel on one label-propagation step.
#include <benchmark/benchmark.h>

#include "lpcc/graph.hpp"
#include "lpcc/pram.hpp"

namespace {

lpcc::DenseState state_for(std::int64_t log2_n) {
  return lpcc::to_initial_state(lpcc::generate_shuffled_path(std::uint64_t{1} << log2_n, 7));
}

void BM_SerialStep(benchmark::State& st) {
  const auto s = state_for(st.range(0));
  std::vector<lpcc::DirectedEdge> out(s.edges.size());
  std::vector<lpcc::VertexId> labels(s.labels);
  for (auto _ : st) {
    labels = s.labels;
    lpcc::pram::serial::lp_step(s.edges, s.labels, out, labels);
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(s.edges.size()));
}

void BM_OpenMPStep(benchmark::State& st) {
  const auto s = state_for(st.range(0));
  std::vector<lpcc::DirectedEdge> out(s.edges.size());
  std::vector<lpcc::VertexId> labels(s.labels);
  for (auto _ : st) {
    labels = s.labels;
    lpcc::pram::lp_step(s.edges, s.labels, out, labels, static_cast<int>(st.range(1)));
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(s.edges.size()));
}

void BM_FullRun(benchmark::State& st) {
  const auto g = lpcc::generate_seq_path(std::uint64_t{1} << st.range(0));
  lpcc::pram::Options options;
  options.serial = st.range(1) == 0;
  options.threads = static_cast<int>(st.range(1));
  for (auto _ : st) benchmark::DoNotOptimize(lpcc::pram::run(g, options).steps);
}

}  // namespace

BENCHMARK(BM_SerialStep)->Arg(16)->Arg(20);
BENCHMARK(BM_OpenMPStep)->Args({16, 1})->Args({20, 1})->Args({20, 2})->Args({20, 4});
// threads == 0 selects the serial reference here.
BENCHMARK(BM_FullRun)->Args({16, 0})->Args({16, 1})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
