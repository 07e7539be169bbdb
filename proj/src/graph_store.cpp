#include "pprwatch/graph_store.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pprwatch/errors.hpp"

namespace pprwatch {

namespace {

template <typename List>
auto find_neighbor(List& list, NodeId v) {
  return std::lower_bound(list.begin(), list.end(), v,
                          [](const Neighbor& n, NodeId id) { return n.id < id; });
}

}  // namespace

std::string_view to_string(Orientation orientation) {
  return orientation == Orientation::kDirected ? "directed" : "undirected";
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kInsertion:
      return "insertion";
    case EventKind::kDeletion:
      return "deletion";
    case EventKind::kWeightUpdate:
      return "weight-update";
  }
  return "unknown";
}

DynamicGraph::DynamicGraph(Orientation orientation) : orientation_(orientation) {}

DynamicGraph DynamicGraph::from_initial_edges(std::span<const WeightedEdge> edges,
                                              Orientation orientation) {
  DynamicGraph g(orientation);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw InvalidInputError("initial edge " + std::to_string(i) +
                              " has non-positive weight");
    }
    if (e.src == e.dst) {
      throw InvalidInputError("initial edge " + std::to_string(i) + " is a self-loop");
    }
    g.apply_event(EdgeEvent{.src = e.src, .dst = e.dst, .delta_weight = e.weight}, i);
  }
  return g;
}

void DynamicGraph::ensure_node(NodeId u) {
  if (u < out_.size()) return;
  const std::size_t n = static_cast<std::size_t>(u) + 1;
  out_.resize(n);
  degree_.resize(n, 0.0);
  if (directed()) in_.resize(n);
}

std::span<const Neighbor> DynamicGraph::neighbors(NodeId u) const {
  if (u >= out_.size()) return {};
  return out_[u];
}

std::span<const Neighbor> DynamicGraph::in_neighbors(NodeId u) const {
  if (!directed()) return neighbors(u);
  if (u >= in_.size()) return {};
  return in_[u];
}

std::vector<NodeId> DynamicGraph::structural_neighbors(NodeId u) const {
  std::vector<NodeId> ids;
  const auto out = neighbors(u);
  if (!directed()) {
    ids.reserve(out.size());
    for (const auto& n : out) ids.push_back(n.id);
    return ids;
  }
  const auto in = in_neighbors(u);
  ids.reserve(out.size() + in.size());
  auto a = out.begin();
  auto b = in.begin();
  while (a != out.end() || b != in.end()) {
    if (b == in.end() || (a != out.end() && a->id < b->id)) {
      ids.push_back((a++)->id);
    } else if (a == out.end() || b->id < a->id) {
      ids.push_back((b++)->id);
    } else {
      ids.push_back(a->id);
      ++a;
      ++b;
    }
  }
  return ids;
}

double DynamicGraph::degree_sum(NodeId u) const noexcept {
  return u < degree_.size() ? degree_[u] : 0.0;
}

double DynamicGraph::effective_degree(NodeId u) const noexcept {
  const double d = degree_sum(u);
  return d == 0.0 ? 1.0 : d;
}

std::optional<double> DynamicGraph::weight(NodeId u, NodeId v) const {
  if (u >= out_.size()) return std::nullopt;
  const auto& list = out_[u];
  auto it = find_neighbor(list, v);
  if (it == list.end() || it->id != v) return std::nullopt;
  return it->weight;
}

EventKind DynamicGraph::classify(const EdgeEvent& e, std::size_t event_index) const {
  if (e.src == e.dst) throw InvalidEventError(event_index, "self-loop events are not supported");
  if (!std::isfinite(e.delta_weight)) throw InvalidEventError(event_index, "non-finite weight delta");
  const auto current = weight(e.src, e.dst);
  if (!current) {
    if (e.delta_weight == 0.0) return EventKind::kWeightUpdate;
    if (e.delta_weight < 0.0) {
      throw InvalidEventError(event_index, "negative delta on absent edge (" +
                                               std::to_string(e.src) + "," +
                                               std::to_string(e.dst) + ")");
    }
    return EventKind::kInsertion;
  }
  const double next = *current + e.delta_weight;
  if (std::abs(next) <= kZeroWeightTolerance) return EventKind::kDeletion;
  if (next < 0.0) {
    throw InvalidEventError(event_index, "edge (" + std::to_string(e.src) + "," +
                                             std::to_string(e.dst) +
                                             ") would get negative weight");
  }
  return EventKind::kWeightUpdate;
}

void DynamicGraph::set_arc(std::vector<Neighbor>& list, NodeId v, double new_weight) {
  auto it = find_neighbor(list, v);
  const bool present = it != list.end() && it->id == v;
  if (new_weight == 0.0) {
    if (present) list.erase(it);
  } else if (present) {
    it->weight = new_weight;
  } else {
    list.insert(it, Neighbor{v, new_weight});
  }
}

EventKind DynamicGraph::apply_event(const EdgeEvent& e, std::size_t event_index) {
  const EventKind kind = classify(e, event_index);
  ensure_node(std::max(e.src, e.dst));
  if (e.delta_weight == 0.0) return kind;

  const double old_weight = weight(e.src, e.dst).value_or(0.0);
  const double new_weight = kind == EventKind::kDeletion ? 0.0 : old_weight + e.delta_weight;
  const double change = new_weight - old_weight;

  auto update_degree = [this](NodeId u, double delta) {
    // An empty list pins the degree to exactly zero so dangling detection
    // never sees a rounding residue.
    degree_[u] = out_[u].empty() ? 0.0 : degree_[u] + delta;
  };

  set_arc(out_[e.src], e.dst, new_weight);
  update_degree(e.src, change);
  if (directed()) {
    set_arc(in_[e.dst], e.src, new_weight);
  } else {
    set_arc(out_[e.dst], e.src, new_weight);
    update_degree(e.dst, change);
  }

  if (kind == EventKind::kInsertion) ++edge_count_;
  if (kind == EventKind::kDeletion) --edge_count_;
  return kind;
}

double DynamicGraph::audit_degrees() const {
  double worst = 0.0;
  for (std::size_t u = 0; u < out_.size(); ++u) {
    double sum = 0.0;
    for (const auto& n : out_[u]) sum += n.weight;
    worst = std::max(worst, std::abs(sum - degree_[u]));
  }
  return worst;
}

}  // namespace pprwatch
