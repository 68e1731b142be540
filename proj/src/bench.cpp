#include "lpcc/bench.hpp"

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include "lpcc/oracle.hpp"
#include "lpcc/pram.hpp"
#include "lpcc/stream.hpp"

namespace lpcc::bench {

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t at = text.find(sep, start);
    parts.push_back(text.substr(start, at - start));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return parts;
}

std::uint64_t parse_u64(std::string_view text, std::string_view what) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw UsageError("bad " + std::string(what) + " '" + std::string(text) + "'");
  return value;
}

double parse_double(std::string_view text, std::string_view what) {
  try {
    std::size_t used = 0;
    const std::string s(text);
    const double value = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return value;
  } catch (const std::exception&) {
    throw UsageError("bad " + std::string(what) + " '" + std::string(text) + "'");
  }
}

// key=value fields after the generator name.
std::uint64_t field(const std::vector<std::string_view>& parts, std::string_view key,
                    std::optional<std::uint64_t> fallback) {
  for (std::size_t i = 1; i < parts.size(); ++i) {
    if (parts[i].substr(0, key.size() + 1) == std::string(key) + "=")
      return parse_u64(parts[i].substr(key.size() + 1), key);
  }
  if (!fallback) throw UsageError("generator spec needs " + std::string(key) + "=");
  return *fallback;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Graph cycle_graph(std::uint64_t n, std::uint64_t seed) {
  auto order = shuffled_path_order(n, seed);
  std::vector<UndirectedEdge> edges;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const VertexId a = order[i];
    const VertexId b = order[(i + 1) % order.size()];
    if (a != b) edges.push_back({std::min(a, b), std::max(a, b)});
  }
  return Graph(std::move(order), std::move(edges));
}

Graph star_graph(std::uint64_t n, VertexId center) {
  std::vector<VertexId> vertices(n);
  std::iota(vertices.begin(), vertices.end(), VertexId{1});
  std::vector<UndirectedEdge> edges;
  for (VertexId v = 1; v <= n; ++v)
    if (v != center) edges.push_back({std::min(v, center), std::max(v, center)});
  return Graph(std::move(vertices), std::move(edges));
}

}  // namespace

Engine parse_engine(std::string_view name) {
  if (name == "pram") return Engine::Pram;
  if (name == "stream") return Engine::Stream;
  if (name == "mapreduce") return Engine::MapReduce;
  throw UsageError("unknown engine '" + std::string(name) + "' (pram|stream|mapreduce)");
}

std::string_view engine_name(Engine engine) {
  switch (engine) {
    case Engine::Pram: return "pram";
    case Engine::Stream: return "stream";
    case Engine::MapReduce: return "mapreduce";
  }
  return "?";
}

Graph generate_from_spec(std::string_view spec, std::uint64_t default_seed) {
  const auto parts = split(spec, ':');
  const std::string_view kind = parts[0];
  try {
    if (kind == "seqpath" && parts.size() == 2) {
      const std::uint64_t k = parse_u64(parts[1], "log2 n");
      if (k > 40) throw UsageError("seqpath exponent too large");
      return generate_seq_path(std::uint64_t{1} << k);
    }
    if (kind == "seqpath-n" && parts.size() == 2) return generate_seq_path(parse_u64(parts[1], "n"));
    if (kind == "path" && parts.size() >= 2)
      return generate_shuffled_path(field(parts, "n", std::nullopt), field(parts, "seed", default_seed));
    if (kind == "starpair" && (parts.size() == 3 || parts.size() == 4)) {
      LinkDirection link = LinkDirection::LeftToRight;
      if (parts.size() == 4) {
        if (parts[3] == "rl")
          link = LinkDirection::RightToLeft;
        else if (parts[3] != "lr")
          throw UsageError("starpair link must be lr or rl");
      }
      return generate_star_pair(parse_u64(parts[1], "left size"), parse_u64(parts[2], "right size"),
                                link)
          .graph;
    }
    if (kind == "gnp" && parts.size() >= 3) {
      double c = -1;
      for (std::size_t i = 1; i < parts.size(); ++i)
        if (parts[i].substr(0, 2) == "c=") c = parse_double(parts[i].substr(2), "c");
      if (c < 0) throw UsageError("gnp spec needs c=");
      return generate_gnp(field(parts, "n", std::nullopt), c, field(parts, "seed", default_seed));
    }
  } catch (const UsageError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string(spec) + ": " + e.what());
  }
  throw UsageError("bad generator spec '" + std::string(spec) + "'");
}

EngineOutcome run_engine(const Graph& graph, const RunConfig& config) {
  using clock = std::chrono::steady_clock;
  if (config.no_dedup && config.engine != Engine::Stream)
    throw UsageError("--no-dedup is only supported by the stream engine");
  if (config.eager_labels && config.engine != Engine::Pram)
    throw UsageError("--eager-labels is only supported by the pram engine");

  EngineOutcome outcome;
  outcome.threads_used = config.threads > 0 ? config.threads : omp_get_max_threads();
  const auto t0 = clock::now();
  std::ostringstream extra;
  switch (config.engine) {
    case Engine::Pram: {
      pram::Options options;
      options.threads = outcome.threads_used;
      options.max_steps = config.max_steps;
      options.eager_labels = config.eager_labels;
      outcome.run = pram::run(graph, options);
      extra << " stable_step=" << outcome.run.stable_step;
      break;
    }
    case Engine::Stream: {
      stream::Options options;
      options.max_steps = config.max_steps;
      options.backend = config.backend;
      if (config.no_dedup) {
        // Stress mode: as many steps as the deduplicated run needs.
        options.exact_steps = stream::run_streamsort(graph, options).run.steps;
        options.dedup = false;
      }
      auto result = stream::run_streamsort(graph, options);
      outcome.run = std::move(result.run);
      extra << " streaming_passes=" << result.ledger.streaming_passes
            << " sorting_passes=" << result.ledger.sorting_passes;
      break;
    }
    case Engine::MapReduce: {
      mapreduce::Options options;
      options.max_steps = config.max_steps;
      options.reducers = config.reducers;
      options.threads = outcome.threads_used;
      auto result = mapreduce::run_mapreduce(graph, options);
      outcome.run = std::move(result.run);
      extra << " rounds=" << result.rounds.size() << " comm_pairs=" << result.total_pairs_emitted()
            << " reducers=" << std::max<std::size_t>(1, config.reducers);
      break;
    }
  }
  outcome.wall_seconds = std::chrono::duration<double>(clock::now() - t0).count();
  for (std::size_t i = 0; i < graph.n(); ++i)
    if (outcome.run.labels[i] == graph.id_at(i)) ++outcome.components;
  outcome.extra = extra.str();
  return outcome;
}

std::string summary_line(const EngineOutcome& outcome) {
  std::ostringstream out;
  out << "components=" << outcome.components << " steps=" << outcome.run.steps << " wall_s="
      << std::fixed << std::setprecision(3) << outcome.wall_seconds
      << " threads=" << outcome.threads_used << outcome.extra;
  return out.str();
}

int cmd_gen(std::string_view spec, const std::filesystem::path& out, std::uint64_t seed,
            std::ostream& log) {
  Graph graph;
  try {
    graph = generate_from_spec(spec, seed);
  } catch (const UsageError& e) {
    log << "error: " << e.what() << '\n';
    return 2;
  }
  std::ofstream file(out, std::ios::binary);
  if (!file) {
    log << "error: cannot write " << out.string() << '\n';
    return 2;
  }
  write_edge_list(graph, file);
  log << "wrote " << out.string() << " n=" << graph.n() << " m=" << graph.m() << '\n';
  return 0;
}

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.input.empty() == config.gen.empty()) {
    err << "error: give exactly one of --input or --gen\n";
    return 2;
  }
  Graph graph;
  try {
    graph = config.gen.empty() ? load_edge_list_file(config.input).graph
                               : generate_from_spec(config.gen, config.seed);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  auto write_stats_file = [&](std::span<const StepStats> stats) {
    if (config.stats_out.empty()) return;
    std::ofstream file(config.stats_out, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + config.stats_out);
    write_stats(stats, file);
  };

  try {
    const EngineOutcome outcome = run_engine(graph, config);
    if (!config.labels_out.empty()) {
      std::ofstream file(config.labels_out, std::ios::binary);
      if (!file) throw std::runtime_error("cannot write " + config.labels_out);
      write_labels(graph, outcome.run.labels, file);
    }
    write_stats_file(outcome.run.per_step);
    out << summary_line(outcome) << '\n';
    return 0;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ConvergenceError& e) {
    err << "engine error: " << e.what() << '\n';
    try {
      write_stats_file(e.partial_stats());
    } catch (const std::exception& io) {
      err << "error: " << io.what() << '\n';
    }
    return 3;
  } catch (const std::exception& e) {
    err << "engine error: " << e.what() << '\n';
    return 3;
  }
}

int cmd_verify(const std::filesystem::path& input, const std::filesystem::path& labels,
               std::ostream& out, std::ostream& err) {
  Graph graph;
  std::string labels_text;
  try {
    graph = load_edge_list_file(input).graph;
    labels_text = read_file(labels);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  std::vector<std::pair<VertexId, VertexId>> rows;
  try {
    rows = read_labels(labels_text);
  } catch (const ParseError& e) {
    out << "FAIL: labels file: " << e.what() << '\n';
    return 1;
  }
  if (rows.size() != graph.n()) {
    out << "FAIL: labels file has " << rows.size() << " rows, graph has " << graph.n()
        << " vertices\n";
    return 1;
  }
  std::vector<VertexId> vertices;
  std::vector<VertexId> values;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].first != graph.id_at(i)) {
      out << "FAIL: row " << i + 1 << " names vertex " << rows[i].first << ", expected "
          << graph.id_at(i) << " (rows must cover the universe in ascending order)\n";
      return 1;
    }
    values.push_back(rows[i].second);
  }
  const auto expected = oracle::oracle_components(graph);
  const auto diff = oracle::assert_same_partition(expected, oracle::labeling_of(graph, values));
  if (!diff.same) {
    out << "FAIL: " << diff.report();
    return 1;
  }
  out << "OK: " << graph.n() << " vertices, " << expected.components() << " components\n";
  return 0;
}

std::vector<CorpusGraph> test_corpus(std::size_t count, std::size_t max_n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto draw = [&](std::uint64_t lo, std::uint64_t hi) { return lo + rng() % (hi - lo + 1); };
  std::vector<CorpusGraph> corpus;
  corpus.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t n = draw(1, max_n);
    const std::uint64_t s = rng();
    std::ostringstream name;
    Graph g;
    switch (i % 10) {
      case 0:
      case 1:
      case 2:
        g = generate_gnp(n, 1.0, s);
        name << "gnp(n=" << n << ",c=1,seed=" << s << ")";
        break;
      case 3:
      case 4:
        g = generate_gnp(n, 2.0, s);
        name << "gnp(n=" << n << ",c=2,seed=" << s << ")";
        break;
      case 5:
        g = generate_gnp(n, 8.0, s);
        name << "gnp(n=" << n << ",c=8,seed=" << s << ")";
        break;
      case 6:
        if (s % 2 == 0) {
          g = generate_seq_path(n);
          name << "seqpath(n=" << n << ")";
        } else {
          g = generate_shuffled_path(n, s);
          name << "path(n=" << n << ",seed=" << s << ")";
        }
        break;
      case 7:
        g = cycle_graph(n, s);
        name << "cycle(n=" << n << ",seed=" << s << ")";
        break;
      case 8:
        if (s % 2 == 0) {
          const VertexId center = 1 + (s >> 1) % n;
          g = star_graph(n, center);
          name << "star(n=" << n << ",center=" << center << ")";
        } else {
          const std::uint64_t left = (s >> 1) % std::max<std::uint64_t>(1, max_n / 2);
          const std::uint64_t right = (s >> 20) % std::max<std::uint64_t>(1, max_n / 2);
          g = generate_star_pair(left, right, LinkDirection::LeftToRight).graph;
          name << "starpair(" << left << "," << right << ")";
        }
        break;
      default:
        // Gapped, non-contiguous ids.
        g = relabel(generate_gnp(n, 2.0, s), [](VertexId v) { return 1000 + 7 * v; });
        name << "gnp-gapped(n=" << n << ",c=2,seed=" << s << ")";
        break;
    }
    corpus.push_back({name.str(), std::move(g)});
  }
  return corpus;
}

std::uint64_t pram_memory_estimate(std::uint64_t n, std::uint64_t m) {
  // Graph (n ids, m pairs), initial twins (2m) + 4m work list, two label arrays.
  return 8 * n + 16 * m + 16 * 6 * m + 16 * n;
}

std::optional<std::uint64_t> available_memory() {
  std::ifstream in("/proc/meminfo");
  std::string key;
  std::uint64_t value = 0;
  std::string unit;
  while (in >> key >> value) {
    std::getline(in, unit);
    if (key == "MemAvailable:") return value * 1024;
  }
  return std::nullopt;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxx > 0 ? sxy / sxx : 0;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = (sxx > 0 && syy > 0) ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

namespace {

struct ReferenceRow {
  std::string name;
  std::size_t components;
  std::size_t steps;
};

void print_row(std::ostream& out, const std::string& name, const std::string& status,
               const std::string& detail) {
  out << std::left << std::setw(22) << name << std::setw(9) << status << detail << '\n';
}

}  // namespace

int cmd_bench(const BenchConfig& config, std::ostream& out) {
  bool mismatch = false;
  RunConfig run_config;
  run_config.threads = config.threads;

  out << "# sequential path family (pram engine)\n";
  std::vector<double> xs, ys;
  for (unsigned k = config.min_log2; k <= config.max_log2; ++k) {
    const Graph g = generate_seq_path(std::uint64_t{1} << k);
    const auto outcome = run_engine(g, run_config);
    xs.push_back(k);
    ys.push_back(static_cast<double>(outcome.run.steps));
    print_row(out, "seqpath" + std::to_string(k), "ran", summary_line(outcome));
  }
  if (xs.size() >= 2) {
    const LineFit fit = fit_line(xs, ys);
    out << "fit steps ~ " << std::fixed << std::setprecision(3) << fit.slope << " * log2(n) + "
        << fit.intercept << "  r^2=" << fit.r2 << '\n';
  }

  out << "# reported step counts (tolerance +-1 step)\n";
  const std::vector<std::pair<unsigned, std::size_t>> paths{{20, 31}, {22, 34}, {24, 37}};
  const auto mem = available_memory();
  for (const auto& [k, expected_steps] : paths) {
    const std::string name = "seqpath" + std::to_string(k);
    const std::uint64_t n = std::uint64_t{1} << k;
    if (k > 20 && !config.large_paths) {
      print_row(out, name, "skipped", "large paths disabled");
      continue;
    }
    if (mem && pram_memory_estimate(n, n - 1) > *mem * 8 / 10) {
      print_row(out, name, "skipped", "needs ~" + std::to_string(pram_memory_estimate(n, n - 1) >> 20) +
                                          " MiB, available " + std::to_string(*mem >> 20) + " MiB");
      continue;
    }
    const auto outcome = run_engine(generate_seq_path(n), run_config);
    const bool ok = outcome.components == 1 &&
                    outcome.run.steps + 1 >= expected_steps && outcome.run.steps <= expected_steps + 1;
    mismatch |= !ok;
    print_row(out, name, ok ? "ok" : "MISMATCH",
              summary_line(outcome) + " expected components=1 steps=" + std::to_string(expected_steps));
  }

  const std::vector<std::pair<std::string, ReferenceRow>> snap{
      {"roadNet-TX.txt", {"roadNet-TX", 424, 18}},
      {"com-orkut.ungraph.txt", {"com-Orkut", 1, 6}}};
  for (const auto& [file, row] : snap) {
    const auto path = config.datasets ? *config.datasets / file : std::filesystem::path(file);
    if (!config.datasets || !std::filesystem::exists(path)) {
      print_row(out, row.name, "skipped", "dataset file " + file + " not supplied");
      continue;
    }
    const Graph g = load_edge_list_file(path).graph;
    const auto outcome = run_engine(g, run_config);
    const bool ok = outcome.components == row.components && outcome.run.steps + 1 >= row.steps &&
                    outcome.run.steps <= row.steps + 1;
    mismatch |= !ok;
    print_row(out, row.name, ok ? "ok" : "MISMATCH",
              summary_line(outcome) + " expected components=" + std::to_string(row.components) +
                  " steps=" + std::to_string(row.steps));
  }

  out << "# property suite\n";
  {
    const std::uint64_t n = 1 << 12;
    std::vector<std::vector<VertexId>> history{{}};
    pram::Options options;
    options.threads = config.threads;
    options.observer = [&](std::size_t, std::span<const DirectedEdge>, std::span<const VertexId> l) {
      std::vector<VertexId> ids(l.size());
      for (std::size_t i = 0; i < l.size(); ++i) ids[i] = l[i] + 1;
      history.push_back(std::move(ids));
    };
    const auto result = pram::run(generate_seq_path(n), options);
    bool fib_ok = true;
    for (std::size_t k = 1; k < history.size() && oracle::fib_gap(k) < n / 2; ++k)
      fib_ok &= oracle::check_fib_profile(n, k, history).pass;
    const bool bound_ok = oracle::check_step_bounds(oracle::GraphKind::SeqPath, n, result.steps);
    mismatch |= !(fib_ok && bound_ok);
    print_row(out, "fib-profile", fib_ok && bound_ok ? "ok" : "FAIL",
              "seqpath12 steps=" + std::to_string(result.steps));
  }
  {
    const auto report = oracle::duplication_stress(64);
    const bool ok = report.bounded() && report.longest_growth_run >= 3 && report.sequence_matches;
    mismatch |= !ok;
    print_row(out, "duplication", ok ? "ok" : "FAIL",
              "max_dedup=" + std::to_string(report.max_with_dedup) + " 2m=" +
                  std::to_string(report.two_m) + " growth_run=" +
                  std::to_string(report.longest_growth_run));
  }
  {
    std::size_t failures = 0;
    const auto corpus = test_corpus(100, 256, 2024);
    for (const auto& item : corpus) {
      const auto truth = oracle::oracle_components(item.graph);
      pram::Options options;
      options.threads = config.threads;
      const auto pram_run = pram::run(item.graph, options);
      const auto stream_run = stream::run_streamsort(item.graph).run;
      mapreduce::Options mr;
      mr.threads = config.threads;
      const auto mr_run = mapreduce::run_mapreduce(item.graph, mr).run;
      for (const auto* labels : {&pram_run.labels, &stream_run.labels, &mr_run.labels}) {
        if (!oracle::assert_same_partition(truth, oracle::labeling_of(item.graph, *labels)).same)
          ++failures;
      }
    }
    mismatch |= failures != 0;
    print_row(out, "oracle-sweep", failures == 0 ? "ok" : "FAIL",
              std::to_string(corpus.size()) + " graphs x 3 engines, " + std::to_string(failures) +
                  " mismatches");
  }
  return mismatch ? 1 : 0;
}

}  // namespace lpcc::bench
