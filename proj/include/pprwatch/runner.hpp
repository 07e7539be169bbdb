#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "pprwatch/embedding.hpp"
#include "pprwatch/graph_store.hpp"
#include "pprwatch/ppr_engine.hpp"
#include "pprwatch/scoring.hpp"
#include "pprwatch/seeds.hpp"

namespace pprwatch {

struct RunConfig {
  double alpha = 0.15;
  double epsilon = 0.01;
  SketchConfig sketch;
  ScoringConfig scoring;
  SeedPolicy seeds;
  std::size_t threads = 0;  // 0 = hardware concurrency
  std::uint64_t push_cap = kDefaultPushCap;
  // Sparsification threshold; 0 derives min(1/|V|, 1e-4) from the node count
  // of the whole stream so it stays fixed across snapshots.
  double epsilon_c = 0.0;
  bool keep_seed_detail = false;
};

/// Tracks one push state and one embedding per node and scores snapshots in
/// stream order. Each step applies the snapshot's events to the graph, then
/// adjusts, pushes and re-embeds every state concurrently, and only then
/// identifies subgraphs and aggregates.
class StreamScorer {
 public:
  StreamScorer(DynamicGraph initial, RunConfig config, std::size_t total_node_count);

  SnapshotScore step(std::span<const EdgeEvent> events);

  const DynamicGraph& graph() const noexcept { return graph_; }
  const RunConfig& config() const noexcept { return config_; }
  const SparsifyConfig& sparsify_config() const noexcept { return sparsify_; }
  std::span<const PushState> states() const noexcept { return states_; }
  std::span<const Embedding> embeddings() const noexcept { return embeddings_; }
  // Node scores of the last step, indexed by node id.
  std::span<const double> last_delta() const noexcept { return delta_; }
  const std::vector<std::pair<NodeId, double>>& last_seed_scores() const noexcept {
    return seed_scores_;
  }
  std::size_t snapshots_done() const noexcept { return done_; }
  const PushStats& last_push_stats() const noexcept { return push_stats_; }

 private:
  void add_states(std::size_t up_to, std::vector<char>& dirty);

  DynamicGraph graph_;
  RunConfig config_;
  SparsifyConfig sparsify_;
  std::vector<PushState> states_;
  std::vector<Embedding> embeddings_;
  std::vector<double> delta_;
  std::vector<std::pair<NodeId, double>> seed_scores_;
  std::size_t done_ = 0;
  PushStats push_stats_;
  bool warned_seeds_ = false;
};

// Highest node id seen in the initial graph or any event, plus one.
std::size_t total_node_count(const DynamicGraph& initial,
                             std::span<const std::vector<EdgeEvent>> snapshots);

using SnapshotObserver = std::function<void(const StreamScorer&, const SnapshotScore&)>;

ScoreSeries run(const DynamicGraph& initial, std::span<const std::vector<EdgeEvent>> snapshots,
                const RunConfig& config, const SnapshotObserver& observer = {});

}  // namespace pprwatch
