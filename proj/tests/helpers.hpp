#pragma once

#include <algorithm>
#include <vector>

#include "lpcc/graph.hpp"

namespace lpcc::testing {

inline Graph fig1_graph() { return load_edge_list("1 3\n3 4\n4 2\n").graph; }

template <class T>
std::vector<T> sorted(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  return v;
}

inline std::vector<DirectedEdge> id_multiset(const Graph& g, std::span<const DirectedEdge> dense) {
  return sorted(to_ids(g, dense));
}

}  // namespace lpcc::testing
