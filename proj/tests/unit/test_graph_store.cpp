#include <doctest.h>

#include <cmath>
#include <vector>

#include "pprwatch/errors.hpp"
#include "pprwatch/graph_store.hpp"
#include "support/random_graphs.hpp"

using namespace pprwatch;

namespace {

std::vector<Neighbor> list(const DynamicGraph& g, NodeId u) {
  const auto n = g.neighbors(u);
  return {n.begin(), n.end()};
}

EdgeEvent ev(NodeId s, NodeId d, double w) { return EdgeEvent{.src = s, .dst = d, .delta_weight = w}; }

}  // namespace

TEST_CASE("from_initial_edges builds cached degrees") {
  SUBCASE("single undirected edge") {
    const std::vector<WeightedEdge> edges{{0, 1, 1.0}};
    const auto g = DynamicGraph::from_initial_edges(edges);
    CHECK(g.degree_sum(0) == 1.0);
    CHECK(g.degree_sum(1) == 1.0);
    CHECK(g.edge_count() == 1);
  }
  SUBCASE("empty") {
    const auto g = DynamicGraph::from_initial_edges({});
    CHECK(g.node_count() == 0);
    CHECK(g.edge_count() == 0);
  }
  SUBCASE("directed out-degrees") {
    const std::vector<WeightedEdge> edges{{0, 1, 2.0}, {0, 2, 3.0}};
    const auto g = DynamicGraph::from_initial_edges(edges, Orientation::kDirected);
    CHECK(g.degree_sum(0) == 5.0);
    CHECK(g.degree_sum(1) == 0.0);
    CHECK(g.degree_sum(2) == 0.0);
    CHECK(g.in_neighbors(2).size() == 1);
    CHECK(g.structural_neighbors(1) == std::vector<NodeId>{0});
  }
  SUBCASE("rejects bad weights and self-loops") {
    const std::vector<WeightedEdge> zero{{0, 1, 0.0}};
    const std::vector<WeightedEdge> negative{{0, 1, -1.0}};
    const std::vector<WeightedEdge> loop{{2, 2, 1.0}};
    CHECK_THROWS_AS(DynamicGraph::from_initial_edges(zero), InvalidInputError);
    CHECK_THROWS_AS(DynamicGraph::from_initial_edges(negative), InvalidInputError);
    CHECK_THROWS_AS(DynamicGraph::from_initial_edges(loop), InvalidInputError);
  }
}

TEST_CASE("apply_event insert, cancel and update") {
  DynamicGraph g;
  g.ensure_node(1);
  CHECK(g.apply_event(ev(0, 1, 1.0)) == EventKind::kInsertion);
  CHECK(g.weight(0, 1) == 1.0);
  CHECK(g.degree_sum(0) == 1.0);

  CHECK(g.apply_event(ev(0, 1, -1.0)) == EventKind::kDeletion);
  CHECK_FALSE(g.weight(0, 1).has_value());
  CHECK(g.degree_sum(0) == 0.0);
  CHECK(g.is_dangling(0));
  CHECK(g.effective_degree(0) == 1.0);
  CHECK(g.edge_count() == 0);

  g.apply_event(ev(0, 1, 2.0));
  CHECK(g.apply_event(ev(0, 1, 0.5)) == EventKind::kWeightUpdate);
  CHECK(g.weight(0, 1) == 2.5);
  CHECK(g.weight(1, 0) == 2.5);
}

TEST_CASE("inserting an existing edge accumulates weight") {
  DynamicGraph g;
  g.apply_event(ev(3, 4, 1.0));
  CHECK(g.classify(ev(3, 4, 1.0)) == EventKind::kWeightUpdate);
  g.apply_event(ev(4, 3, 1.0));
  CHECK(g.weight(3, 4) == 2.0);
  CHECK(g.edge_count() == 1);
  CHECK(g.node_count() == 5);
}

TEST_CASE("deletion within tolerance removes the edge") {
  DynamicGraph g;
  g.apply_event(ev(0, 1, 0.3));
  g.apply_event(ev(0, 1, 0.6));
  // 0.3 + 0.6 - 0.9 is not exactly zero in binary floating point.
  CHECK(g.apply_event(ev(0, 1, -0.9)) == EventKind::kDeletion);
  CHECK_FALSE(g.weight(0, 1).has_value());
  CHECK(g.degree_sum(0) == 0.0);
}

TEST_CASE("invalid events identify their index") {
  DynamicGraph g;
  g.apply_event(ev(0, 1, 1.0));
  try {
    g.apply_event(ev(0, 1, -2.0), 17);
    FAIL("expected InvalidEventError");
  } catch (const InvalidEventError& e) {
    CHECK(e.event_index() == 17);
  }
  CHECK_THROWS_AS(g.apply_event(ev(0, 2, -1.0), 3), InvalidEventError);
  CHECK_THROWS_AS(g.apply_event(ev(1, 1, 1.0), 4), InvalidEventError);
  CHECK_THROWS_AS(g.apply_event(ev(0, 1, std::nan("")), 5), InvalidEventError);
  // A failed event leaves the graph untouched.
  CHECK(g.weight(0, 1) == 1.0);
  CHECK(g.node_count() == 2);
}

TEST_CASE("zero delta on an absent edge is a no-op update") {
  DynamicGraph g;
  g.ensure_node(2);
  CHECK(g.apply_event(ev(0, 2, 0.0)) == EventKind::kWeightUpdate);
  CHECK(g.edge_count() == 0);
  CHECK(g.neighbors(0).empty());
}

TEST_CASE("neighbors iterate in ascending id order") {
  const std::vector<WeightedEdge> star{{0, 3, 1.0}, {0, 1, 1.0}, {0, 2, 1.0}};
  auto g = DynamicGraph::from_initial_edges(star);
  g.ensure_node(4);
  CHECK(list(g, 0) == std::vector<Neighbor>{{1, 1.0}, {2, 1.0}, {3, 1.0}});
  CHECK(list(g, 4).empty());
  CHECK(g.neighbors(99).empty());
  CHECK(g.degree_sum(99) == 0.0);
  g.apply_event(ev(0, 2, -1.0));
  CHECK(list(g, 0) == std::vector<Neighbor>{{1, 1.0}, {3, 1.0}});
}

TEST_CASE("degree audit, symmetry and replay over long random streams") {
  testing::Rng rng(7);
  for (auto orientation : {Orientation::kUndirected, Orientation::kDirected}) {
    const auto g0 = testing::random_graph(rng, 60, 4.0, orientation);
    const auto events = testing::random_events(rng, g0, 10000, 80);

    auto a = g0;
    auto b = g0;
    for (std::size_t i = 0; i < events.size(); ++i) {
      a.apply_event(events[i], i);
      if (i % 500 == 0) {
        CHECK(a.audit_degrees() <= 1e-9);
        if (orientation == Orientation::kUndirected) {
          for (NodeId u = 0; u < a.node_count(); ++u) {
            for (const auto& nb : a.neighbors(u)) REQUIRE(a.weight(nb.id, u) == nb.weight);
          }
        }
      }
    }
    for (std::size_t i = 0; i < events.size(); ++i) b.apply_event(events[i], i);
    CHECK(a.audit_degrees() <= 1e-9);
    CHECK(a == b);

    for (NodeId u = 0; u < a.node_count(); ++u) {
      for (const auto& nb : a.neighbors(u)) REQUIRE(nb.weight > 0.0);
    }
  }
}

TEST_CASE("directed structural neighbors merge in and out lists") {
  const std::vector<WeightedEdge> edges{{0, 1, 1.0}, {2, 0, 1.0}, {0, 2, 1.0}, {3, 0, 2.0}};
  const auto g = DynamicGraph::from_initial_edges(edges, Orientation::kDirected);
  CHECK(g.structural_neighbors(0) == std::vector<NodeId>{1, 2, 3});
  CHECK(g.degree_sum(0) == 2.0);
  CHECK(g.degree_sum(3) == 2.0);
  CHECK_FALSE(g.weight(1, 0).has_value());
}
