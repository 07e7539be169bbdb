#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "pprwatch/embedding.hpp"
#include "pprwatch/graph_store.hpp"
#include "pprwatch/subgraph.hpp"

namespace pprwatch {

enum class Aggregator { kMean, kSum, kMax, kMin, kMedian };

std::string_view to_string(Aggregator agg);
Aggregator parse_aggregator(std::string_view text);

// Throws InvalidInputError on an empty input. Median of an even count is the
// mean of the two central order statistics.
double aggregate(std::span<const double> values, Aggregator agg);

struct ScoringConfig {
  SubgraphStrategy strategy = SubgraphStrategy::hybrid_tc();
  Aggregator phi = Aggregator::kSum;
  Aggregator f = Aggregator::kMean;
  Norm norm = Norm::kL2;
};

// Shift of one node's embedding between consecutive snapshots.
double node_score(const Embedding& prev, const Embedding& curr, Norm norm);

// phi over {delta[i] : i in nodes}. `delta` is indexed by node id; ids past
// its end score 0 (node absent at both snapshots).
double subgraph_score(std::span<const double> delta, std::span<const NodeId> nodes, Aggregator phi);

// f over the seed subgraph scores.
double snapshot_score(std::span<const double> sub_scores, Aggregator f);

// Positions of the k' largest scores, ties by ascending position. k' past the
// end is clamped with a warning.
std::vector<std::size_t> rank_snapshots(std::span<const double> scores, std::size_t k_prime);

// 1-based rank of every position under the same ordering.
std::vector<std::size_t> rank_positions(std::span<const double> scores);

struct SnapshotScore {
  std::size_t snapshot = 0;  // 1-based scored snapshot index
  double score = 0.0;
  std::size_t event_count = 0;
  std::size_t seed_count = 0;
};

struct ScoreSeries {
  std::vector<SnapshotScore> snapshots;
  // Optional per-seed SubScore detail, parallel to `snapshots`.
  std::vector<std::vector<std::pair<NodeId, double>>> seed_detail;

  std::vector<double> scores() const;
  // Snapshot indices (not positions) of the top k'.
  std::vector<std::size_t> top(std::size_t k_prime) const;
};

}  // namespace pprwatch
