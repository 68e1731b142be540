#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lpcc {

/// Vertex identifier. Valid ids are below 2^63; the top bit is reserved.
using VertexId = std::uint64_t;

inline constexpr VertexId kMaxVertexId = (VertexId{1} << 63) - 1;
inline constexpr VertexId kNoVertex = ~VertexId{0};

/// Ordered pair (v, u), directed from v to u. Engines never produce v == u.
struct DirectedEdge {
  VertexId v;
  VertexId u;

  friend constexpr auto operator<=>(const DirectedEdge&, const DirectedEdge&) = default;
};

/// OLD sorts before NEW so a stage can decide each (v,u) group from its first record.
enum class Tag : std::uint8_t { Old = 0, New = 1 };

struct TaggedEdge {
  DirectedEdge edge;
  Tag tag;

  friend constexpr auto operator<=>(const TaggedEdge&, const TaggedEdge&) = default;
};

/// Per-step counters shared by all engines. Columns an engine has no use for stay 0.
struct StepStats {
  std::size_t step = 0;
  std::size_t edges_in = 0;
  std::size_t edges_out = 0;
  std::size_t lp_count = 0;
  std::size_t sym_count = 0;
  std::size_t label_changes = 0;  // halting counter
  std::size_t dups_removed = 0;
  std::size_t comm_pairs = 0;
  double wall_ms = 0.0;
  // Not part of the stats file: label cells lowered this step.
  std::size_t cells_lowered = 0;
};

/// Final labels are aligned with Graph::vertices() and hold vertex ids.
struct RunResult {
  std::vector<VertexId> labels;
  std::size_t steps = 0;
  /// Index k of the first label array L_k equal to the final labeling (L_1 is the initial one).
  std::size_t stable_step = 1;
  std::vector<StepStats> per_step;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Raised when an engine exceeds its step budget; keeps the stats gathered so far.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::vector<StepStats> partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const std::vector<StepStats>& partial_stats() const noexcept { return partial_; }

 private:
  std::vector<StepStats> partial_;
};

}  // namespace lpcc
