#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "pprwatch/graph_store.hpp"
#include "pprwatch/sparse_vector.hpp"

namespace pprwatch {

/// Approximate personalized PageRank for one seed, maintained as an
/// estimate `p` and a residual `r` such that
///   pi_seed = p + sum_u r(u) * pi_u
/// holds on the current graph at all times (forward-push invariant).
struct PushState {
  NodeId seed = 0;
  SparseVector p;
  SparseVector r;
  double alpha = 0.15;
  double epsilon = 0.01;
};

inline constexpr std::uint64_t kDefaultPushCap = 1'000'000'000;

struct PushStats {
  std::uint64_t pops = 0;
  std::uint64_t transfers = 0;
};

// p = 0, r = indicator of `seed`. Throws InvalidInputError unless
// alpha in (0,1) and epsilon > 0.
PushState init_state(NodeId seed, double alpha, double epsilon);

/// Pushes until every |r(u)| <= epsilon * d(u), with d the effective degree
/// (dangling nodes count as a unit self-loop). Nodes are processed from a FIFO
/// worklist, each queued at most once until popped. A dangling node absorbs its
/// whole residual into p, which is the limit of pushing around its self-loop.
///
/// Throws PushDivergenceError once more than `max_transfers` residual
/// transfers happen in a single call.
PushStats dynamic_push(PushState& state, const DynamicGraph& g,
                       std::uint64_t max_transfers = kDefaultPushCap);

// The change of one node's out-distribution caused by an edge event: arc
// from -> to gains `delta_weight`, and `from` had weighted degree
// `degree_before` just before the event.
struct ArcChange {
  NodeId from = 0;
  NodeId to = 0;
  double delta_weight = 0.0;
  double degree_before = 0.0;
};

// Arc changes an event induces on `g_before`: one in directed mode, both
// orientations in undirected mode.
std::vector<ArcChange> arc_changes(const EdgeEvent& e, const DynamicGraph& g_before);

/// Restores the invariant for one arc change without touching the rest of
/// the graph. With delta = p(from) * dw / d_before:
///   p(from) += delta, r(from) -= delta / alpha, r(to) += delta (1-alpha) / alpha.
/// When `from` was dangling its implicit self-loop is replaced by the new arc,
/// which moves (1-alpha)/alpha * p(from) of residual from `from` to `to`.
void adjust_for_arc(PushState& state, const ArcChange& change);

// Must be called with the graph as it was before `e` is applied.
void adjust_for_event(PushState& state, const EdgeEvent& e, const DynamicGraph& g_before);

// Per event: adjust against the pre-event graph, then apply the event to `g`.
// One dynamic_push after the batch.
PushStats increment_push(PushState& state, DynamicGraph& g, std::span<const EdgeEvent> events,
                         std::uint64_t max_transfers = kDefaultPushCap);

// Max over u of |r(u)| - epsilon * d(u); non-positive when the bound holds.
double residual_bound_excess(const PushState& state, const DynamicGraph& g);

// Binary checkpoint of push states.
//
// Layout (little-endian):
//   header : "PPRWCKPT" (8 bytes), u32 version (=1), u32 reserved (=0),
//            u64 state_count
//   state  : u32 seed, f64 alpha, f64 epsilon,
//            u64 p_count, p_count x (u32 id, f64 value),
//            u64 r_count, r_count x (u32 id, f64 value)
// Entries are written in ascending id order.
inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_checkpoint(std::ostream& out, std::span<const PushState> states);
std::vector<PushState> load_checkpoint(std::istream& in);

}  // namespace pprwatch
