#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pprwatch/graph_store.hpp"

namespace pprwatch {

enum class StrategyKind {
  kSingleton,  // the seed alone; per-node scoring without aggregation
  kKHop,
  kTriadicClosure,
  kHybridTC,
};

// Which core the hybrid boundary is taken around.
enum class BoundaryOf {
  kStrongPlusSeed,  // strong neighbors and the seed
  kStrongOnly,      // strong neighbors only
};

std::string_view to_string(BoundaryOf boundary);
BoundaryOf parse_boundary_of(std::string_view text);

struct SubgraphStrategy {
  StrategyKind kind = StrategyKind::kHybridTC;
  int k = 1;  // KHop only
  BoundaryOf boundary_of = BoundaryOf::kStrongPlusSeed;

  static SubgraphStrategy singleton() { return {StrategyKind::kSingleton, 0}; }
  static SubgraphStrategy k_hop(int k);
  static SubgraphStrategy triadic_closure() { return {StrategyKind::kTriadicClosure, 0}; }
  static SubgraphStrategy hybrid_tc(BoundaryOf boundary = BoundaryOf::kStrongPlusSeed) {
    return {StrategyKind::kHybridTC, 0, boundary};
  }

  // "node", "<k>hop", "tc", "hybrid-tc"
  static SubgraphStrategy parse(std::string_view text);
  std::string name() const;
};

// All sets are sorted ascending.
struct SeedSubgraph {
  NodeId seed = 0;
  std::vector<NodeId> nodes;     // always contains the seed
  std::vector<NodeId> strong;    // triadic strategies only
  std::vector<NodeId> boundary;  // HybridTC only
};

// Nodes within unweighted BFS distance k (weights ignored). k >= 1.
SeedSubgraph k_hop(const DynamicGraph& g, NodeId v, int k);

// Neighbors of v that share at least one common neighbor with v, i.e. the
// nonzero pattern of (A*A)[v] restricted to Nei(v) on the binarized
// structural adjacency. Rows of A*A are realised as sorted-list intersections.
std::vector<NodeId> strong_neighbors(const DynamicGraph& g, NodeId v);

SeedSubgraph triadic_closure(const DynamicGraph& g, NodeId v);

// Strong neighbors plus the frontier around them (and around v for
// kStrongPlusSeed).
SeedSubgraph hybrid_tc(const DynamicGraph& g, NodeId v,
                       BoundaryOf boundary_of = BoundaryOf::kStrongPlusSeed);

SeedSubgraph identify(const DynamicGraph& g, NodeId v, const SubgraphStrategy& strategy);

}  // namespace pprwatch
