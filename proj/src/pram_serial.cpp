#include <cassert>

#include "lpcc/pram.hpp"

namespace lpcc::pram::serial {

StepStats lp_step(std::span<const DirectedEdge> in, std::span<const VertexId> labels_in,
                  std::span<DirectedEdge> out, std::span<VertexId> labels_out) {
  StepStats stats;
  stats.edges_in = in.size();
  for (std::size_t i = 0; i < in.size(); ++i) {
    const auto [v, u] = in[i];
    const VertexId lv = labels_in[v];
    if (u != lv) {
      if (labels_out[u] > lv) {
        if (labels_out[u] == labels_in[u]) ++stats.cells_lowered;
        labels_out[u] = lv;
      }
      out[i] = {u, lv};
      ++stats.lp_count;
      if (lv != v) ++stats.label_changes;
    } else {
      assert(u != v);
      out[i] = {u, v};
      ++stats.sym_count;
    }
  }
  stats.edges_out = in.size();
  return stats;
}

}  // namespace lpcc::pram::serial
