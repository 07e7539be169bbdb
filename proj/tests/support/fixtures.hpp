#pragma once

#include <vector>

#include "pprwatch/graph_store.hpp"

namespace pprwatch::testing {

// Seven-node graph whose 1-hop, 2-hop,
// triadic-closure and hybrid subgraphs around seed 1 are all distinct. Node 0 is unused.
//
//   6 - 1 - 2 - 4
//   |    \ /
//   7     3 - 5
inline DynamicGraph seven_node_graph() {
  const std::vector<WeightedEdge> edges{{1, 2, 1.0}, {1, 3, 1.0}, {1, 6, 1.0}, {2, 3, 1.0},
                                        {2, 4, 1.0}, {3, 5, 1.0}, {6, 7, 1.0}};
  return DynamicGraph::from_initial_edges(edges);
}

}  // namespace pprwatch::testing
