#include <CLI11.hpp>

#include <iostream>

#include "lpcc/bench.hpp"

namespace {

lpcc::stream::Backend parse_backend(const std::string& name) {
  if (name == "memory") return lpcc::stream::Backend::Memory;
  if (name == "file") return lpcc::stream::Backend::File;
  throw lpcc::bench::UsageError("unknown backend '" + name + "' (memory|file)");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace lpcc::bench;
  CLI::App app{"Connected components by label propagation"};
  app.require_subcommand(1);

  std::string spec, gen_out;
  std::uint64_t gen_seed = 1;
  auto* gen = app.add_subcommand("gen", "write a generated graph as an edge list");
  gen->add_option("spec", spec, "generator spec, e.g. seqpath:20 or gnp:n=1000:c=2")->required();
  gen->add_option("--out", gen_out, "output edge-list path")->required();
  gen->add_option("--seed", gen_seed, "default seed for randomized generators");

  RunConfig config;
  std::string engine = "pram", backend = "memory";
  auto* run = app.add_subcommand("run", "label a graph's connected components");
  run->add_option("--engine", engine, "pram | stream | mapreduce");
  run->add_option("--input", config.input, "edge-list file");
  run->add_option("--gen", config.gen, "generator spec instead of --input");
  run->add_option("--threads", config.threads, "OpenMP threads (0 = default)");
  run->add_option("--reducers", config.reducers, "reducer count for mapreduce");
  run->add_option("--max-steps", config.max_steps, "abort after this many steps (0 = automatic)");
  run->add_option("--out", config.labels_out, "write vertex<TAB>label lines here");
  run->add_option("--stats", config.stats_out, "write per-step CSV here");
  run->add_option("--backend", backend, "stream storage: memory | file");
  run->add_flag("--eager-labels", config.eager_labels, "pram: read labels as they are lowered");
  run->add_flag("--no-dedup", config.no_dedup, "stream: keep duplicate edges between steps");
  run->add_option("--seed", config.seed, "default seed for --gen");

  std::string verify_input, verify_labels;
  auto* verify = app.add_subcommand("verify", "check a labels file against union-find");
  verify->add_option("--input", verify_input, "edge-list file")->required();
  verify->add_option("--labels", verify_labels, "labels file")->required();

  BenchConfig bench;
  std::string datasets;
  bool small = false;
  auto* bench_cmd = app.add_subcommand("bench", "step-count table and property checks");
  bench_cmd->add_option("--datasets", datasets, "directory holding roadNet-TX.txt / com-orkut.ungraph.txt");
  bench_cmd->add_option("--threads", bench.threads, "OpenMP threads (0 = default)");
  bench_cmd->add_option("--min-log2", bench.min_log2, "smallest path exponent in the sweep");
  bench_cmd->add_option("--max-log2", bench.max_log2, "largest path exponent in the sweep");
  bench_cmd->add_flag("--no-large", small, "skip the 2^22 and 2^24 paths");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen) return cmd_gen(spec, gen_out, gen_seed, std::cerr);
    if (*run) {
      config.engine = parse_engine(engine);
      config.backend = parse_backend(backend);
      return cmd_run(config, std::cout, std::cerr);
    }
    if (*verify) return cmd_verify(verify_input, verify_labels, std::cout, std::cerr);
    if (!datasets.empty()) bench.datasets = datasets;
    bench.large_paths = !small;
    return cmd_bench(bench, std::cout);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "engine error: " << e.what() << '\n';
    return 3;
  }
}
