#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lpcc/graph.hpp"
#include "lpcc/mapreduce.hpp"
#include "lpcc/record_stream.hpp"
#include "lpcc/types.hpp"

namespace lpcc::bench {

enum class Engine { Pram, Stream, MapReduce };

Engine parse_engine(std::string_view name);
std::string_view engine_name(Engine engine);

/// Thrown for bad generator specs and flag combinations (exit code 2).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Generator specs:
///   seqpath:<log2 n>                 sequential path on 1..2^k
///   seqpath-n:<n>                    sequential path on 1..n
///   path:n=<n>[:seed=<s>]            shuffled path (seed defaults to `default_seed`)
///   starpair:<left>:<right>[:rl]     star pair, link stored left-to-right unless ":rl"
///   gnp:n=<n>:c=<c>[:seed=<s>]       sparse G(n, c/n) on 0..n-1
Graph generate_from_spec(std::string_view spec, std::uint64_t default_seed = 1);

struct RunConfig {
  Engine engine = Engine::Pram;
  std::string input;  // edge-list path
  std::string gen;    // generator spec, alternative to input
  int threads = 0;
  std::size_t reducers = 1;
  std::size_t max_steps = 0;
  std::string labels_out;
  std::string stats_out;
  stream::Backend backend = stream::Backend::Memory;
  bool eager_labels = false;
  bool no_dedup = false;
  std::uint64_t seed = 1;
};

struct EngineOutcome {
  RunResult run;
  std::size_t components = 0;
  double wall_seconds = 0.0;
  int threads_used = 1;
  /// Engine-specific summary fields, already formatted as " key=value" pairs.
  std::string extra;
};

/// Throws UsageError for flag combinations the engine does not support.
EngineOutcome run_engine(const Graph& graph, const RunConfig& config);

/// "components=<c> steps=<s> wall_s=<t> threads=<n>" plus engine extras.
std::string summary_line(const EngineOutcome& outcome);

// Subcommands. Each returns the process exit code:
// 0 success, 1 verification failure, 2 usage, 3 engine error.
int cmd_gen(std::string_view spec, const std::filesystem::path& out, std::uint64_t seed,
            std::ostream& log);
int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const std::filesystem::path& input, const std::filesystem::path& labels,
               std::ostream& out, std::ostream& err);

struct BenchConfig {
  /// Directory searched for user-supplied SNAP files (roadNet-TX.txt, com-orkut.ungraph.txt).
  std::optional<std::filesystem::path> datasets;
  unsigned min_log2 = 10;
  unsigned max_log2 = 20;
  bool large_paths = true;  // seqpath22 / seqpath24 when memory permits
  int threads = 0;
};

int cmd_bench(const BenchConfig& config, std::ostream& out);

/// Labeled graph for sweeps.
struct CorpusGraph {
  std::string name;
  Graph graph;
};

/// Deterministic sweep corpus: seeded sparse G(n, c/n) with c in {1, 2, 8}
/// plus paths, shuffled paths, cycles, stars and star pairs, all with n <= max_n.
std::vector<CorpusGraph> test_corpus(std::size_t count, std::size_t max_n, std::uint64_t seed);

/// Rough peak bytes for a pram-engine run on a graph with n vertices and m edges.
std::uint64_t pram_memory_estimate(std::uint64_t n, std::uint64_t m);
/// MemAvailable from /proc/meminfo, if readable.
std::optional<std::uint64_t> available_memory();

/// Least-squares line through (x, y); returns slope, intercept, r^2.
struct LineFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace lpcc::bench
