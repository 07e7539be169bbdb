#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace pprwatch {

using NodeId = std::uint32_t;

enum class Orientation { kUndirected, kDirected };

enum class EventKind { kInsertion, kDeletion, kWeightUpdate };

std::string_view to_string(Orientation orientation);
std::string_view to_string(EventKind kind);

// One timestamped weight delta on an edge. `kind` is informational; the
// graph classifies every event against its own state when applying it.
struct EdgeEvent {
  double time = 0.0;
  NodeId src = 0;
  NodeId dst = 0;
  double delta_weight = 0.0;
  EventKind kind = EventKind::kInsertion;
  bool anomalous = false;
};

struct WeightedEdge {
  NodeId src = 0;
  NodeId dst = 0;
  double weight = 0.0;
};

struct Neighbor {
  NodeId id = 0;
  double weight = 0.0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

// Stored weights at or below this magnitude are treated as a removed edge.
inline constexpr double kZeroWeightTolerance = 1e-12;

/// Event-sourced weighted graph with per-node cached weighted degree.
///
/// Adjacency lists are kept sorted by neighbor id so iteration order is
/// deterministic. In undirected orientation every edge is stored in both
/// endpoint lists with the identical weight value. In directed orientation
/// the in-adjacency is tracked separately for structural queries.
///
/// Nodes with zero weighted degree are "dangling"; consumers that need a
/// degree-normalized quantity for them use `effective_degree`, which models
/// an implicit unit self-loop.
class DynamicGraph {
 public:
  explicit DynamicGraph(Orientation orientation = Orientation::kUndirected);

  /// Builds a graph from (src, dst, weight) triples. In undirected mode each
  /// edge is mirrored; repeated pairs accumulate weight. Throws
  /// InvalidInputError for non-positive weights or self-loops.
  static DynamicGraph from_initial_edges(std::span<const WeightedEdge> edges,
                                         Orientation orientation = Orientation::kUndirected);

  Orientation orientation() const noexcept { return orientation_; }
  bool directed() const noexcept { return orientation_ == Orientation::kDirected; }

  std::size_t node_count() const noexcept { return out_.size(); }
  // Undirected edges are counted once.
  std::size_t edge_count() const noexcept { return edge_count_; }

  // Grows the node id space so that `u` exists.
  void ensure_node(NodeId u);

  // Out-neighbors in ascending id order; empty for unknown ids.
  std::span<const Neighbor> neighbors(NodeId u) const;
  // In-neighbors; identical to `neighbors` in undirected mode.
  std::span<const Neighbor> in_neighbors(NodeId u) const;
  // Sorted union of in- and out-neighbor ids.
  std::vector<NodeId> structural_neighbors(NodeId u) const;

  double degree_sum(NodeId u) const noexcept;
  double effective_degree(NodeId u) const noexcept;
  bool is_dangling(NodeId u) const noexcept { return degree_sum(u) == 0.0; }

  std::optional<double> weight(NodeId u, NodeId v) const;

  // Kind the event would have if applied now. Throws InvalidEventError when
  // the event cannot be applied.
  EventKind classify(const EdgeEvent& e, std::size_t event_index = 0) const;

  // Applies the delta and returns the resulting kind. Inserting an existing
  // edge is a weight update; an edge whose weight reaches zero is removed.
  EventKind apply_event(const EdgeEvent& e, std::size_t event_index = 0);

  // Largest |cached degree - recomputed degree| over all nodes.
  double audit_degrees() const;

  friend bool operator==(const DynamicGraph&, const DynamicGraph&) = default;

 private:
  static void set_arc(std::vector<Neighbor>& list, NodeId v, double new_weight);

  Orientation orientation_;
  std::vector<std::vector<Neighbor>> out_;
  std::vector<std::vector<Neighbor>> in_;  // directed mode only
  std::vector<double> degree_;
  std::size_t edge_count_ = 0;
};

}  // namespace pprwatch
