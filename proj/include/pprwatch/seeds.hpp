#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "pprwatch/event_log.hpp"
#include "pprwatch/graph_store.hpp"

namespace pprwatch {

struct SeedPolicy {
  enum class Mode { kAllNodes, kHighDegree, kExplicit };

  Mode mode = Mode::kAllNodes;
  std::size_t top_k = 0;
  std::vector<NodeId> explicit_seeds;

  static SeedPolicy all_nodes() { return {}; }
  static SeedPolicy high_degree(std::size_t top_k);
  static SeedPolicy explicit_list(std::vector<NodeId> seeds);

  // "all", "high-degree:K" or "file:PATH". The file lists original ids, one
  // per line; ids missing from `ids` are skipped with a warning.
  static SeedPolicy parse(std::string_view text, const IdMap& ids);
  std::string describe() const;
};

// Sorted seed set for the current graph. Explicit seeds beyond the current
// node range are skipped; `skipped` (if given) receives how many.
std::vector<NodeId> select_seeds(const DynamicGraph& g, const SeedPolicy& policy,
                                 std::size_t* skipped = nullptr);

}  // namespace pprwatch
