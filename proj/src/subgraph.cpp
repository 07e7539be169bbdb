#include "pprwatch/subgraph.hpp"

#include <algorithm>
#include <charconv>
#include <string>
#include <unordered_set>

#include "pprwatch/errors.hpp"

namespace pprwatch {

namespace {

bool sorted_lists_intersect(const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      return true;
    }
  }
  return false;
}

std::vector<NodeId> sorted_unique(std::vector<NodeId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

}  // namespace

std::string_view to_string(BoundaryOf boundary) {
  return boundary == BoundaryOf::kStrongOnly ? "strong-only" : "strong-plus-seed";
}

BoundaryOf parse_boundary_of(std::string_view text) {
  if (text == "strong-plus-seed") return BoundaryOf::kStrongPlusSeed;
  if (text == "strong-only") return BoundaryOf::kStrongOnly;
  throw InvalidInputError("unknown boundary mode: " + std::string(text));
}

SubgraphStrategy SubgraphStrategy::k_hop(int k) {
  if (k < 1) throw InvalidInputError("k-hop strategy needs k >= 1");
  return {StrategyKind::kKHop, k};
}

SubgraphStrategy SubgraphStrategy::parse(std::string_view text) {
  if (text == "node") return singleton();
  if (text == "tc") return triadic_closure();
  if (text == "hybrid-tc") return hybrid_tc();
  if (text.size() > 3 && text.ends_with("hop")) {
    const auto digits = text.substr(0, text.size() - 3);
    int k = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec == std::errc{} && ptr == digits.data() + digits.size()) return k_hop(k);
  }
  throw InvalidInputError("unknown subgraph strategy: " + std::string(text));
}

std::string SubgraphStrategy::name() const {
  switch (kind) {
    case StrategyKind::kSingleton:
      return "node";
    case StrategyKind::kKHop:
      return std::to_string(k) + "hop";
    case StrategyKind::kTriadicClosure:
      return "tc";
    case StrategyKind::kHybridTC:
      return "hybrid-tc";
  }
  return "unknown";
}

SeedSubgraph k_hop(const DynamicGraph& g, NodeId v, int k) {
  if (k < 1) throw InvalidInputError("k-hop strategy needs k >= 1");
  std::unordered_set<NodeId> seen{v};
  std::vector<NodeId> frontier{v};
  std::vector<NodeId> nodes{v};
  for (int depth = 0; depth < k && !frontier.empty(); ++depth) {
    std::vector<NodeId> next;
    for (NodeId u : frontier) {
      for (NodeId w : g.structural_neighbors(u)) {
        if (seen.insert(w).second) {
          next.push_back(w);
          nodes.push_back(w);
        }
      }
    }
    frontier = std::move(next);
  }
  std::sort(nodes.begin(), nodes.end());
  return SeedSubgraph{.seed = v, .nodes = std::move(nodes)};
}

std::vector<NodeId> strong_neighbors(const DynamicGraph& g, NodeId v) {
  const auto around_v = g.structural_neighbors(v);
  std::vector<NodeId> strong;
  for (NodeId u : around_v) {
    if (sorted_lists_intersect(around_v, g.structural_neighbors(u))) strong.push_back(u);
  }
  return strong;
}

SeedSubgraph triadic_closure(const DynamicGraph& g, NodeId v) {
  SeedSubgraph sub{.seed = v, .strong = strong_neighbors(g, v)};
  sub.nodes = sub.strong;
  sub.nodes.push_back(v);
  sub.nodes = sorted_unique(std::move(sub.nodes));
  return sub;
}

SeedSubgraph hybrid_tc(const DynamicGraph& g, NodeId v, BoundaryOf boundary_of) {
  SeedSubgraph sub = triadic_closure(g, v);
  std::vector<NodeId> core = sub.strong;
  if (boundary_of == BoundaryOf::kStrongPlusSeed) core.push_back(v);

  std::vector<NodeId> frontier;
  for (NodeId c : core) {
    for (NodeId w : g.structural_neighbors(c)) {
      if (!std::binary_search(sub.nodes.begin(), sub.nodes.end(), w)) frontier.push_back(w);
    }
  }
  sub.boundary = sorted_unique(std::move(frontier));

  std::vector<NodeId> all;
  all.reserve(sub.nodes.size() + sub.boundary.size());
  std::merge(sub.nodes.begin(), sub.nodes.end(), sub.boundary.begin(), sub.boundary.end(),
             std::back_inserter(all));
  sub.nodes = std::move(all);
  return sub;
}

SeedSubgraph identify(const DynamicGraph& g, NodeId v, const SubgraphStrategy& strategy) {
  switch (strategy.kind) {
    case StrategyKind::kSingleton:
      return SeedSubgraph{.seed = v, .nodes = {v}};
    case StrategyKind::kKHop:
      return k_hop(g, v, strategy.k);
    case StrategyKind::kTriadicClosure:
      return triadic_closure(g, v);
    case StrategyKind::kHybridTC:
      return hybrid_tc(g, v, strategy.boundary_of);
  }
  throw InvalidInputError("unknown subgraph strategy");
}

}  // namespace pprwatch
