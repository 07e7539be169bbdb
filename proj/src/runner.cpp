#include "pprwatch/runner.hpp"

#include <algorithm>
#include <atomic>

#include "pprwatch/log.hpp"
#include "pprwatch/parallel.hpp"
#include "pprwatch/subgraph.hpp"

namespace pprwatch {

std::size_t total_node_count(const DynamicGraph& initial,
                             std::span<const std::vector<EdgeEvent>> snapshots) {
  std::size_t n = initial.node_count();
  for (const auto& batch : snapshots) {
    for (const auto& e : batch) n = std::max<std::size_t>(n, std::max(e.src, e.dst) + std::size_t{1});
  }
  return n;
}

StreamScorer::StreamScorer(DynamicGraph initial, RunConfig config, std::size_t total_nodes)
    : graph_(std::move(initial)), config_(std::move(config)) {
  sparsify_ = config_.epsilon_c > 0.0
                  ? SparsifyConfig{config_.epsilon_c}
                  : SparsifyConfig::for_node_count(std::max(total_nodes, graph_.node_count()));
  std::vector<char> dirty;
  add_states(graph_.node_count(), dirty);
  parallel_for(states_.size(), config_.threads, [&](std::size_t i) {
    dynamic_push(states_[i], graph_, config_.push_cap);
    embeddings_[i] = embed(states_[i].p, config_.sketch, sparsify_);
  });
}

void StreamScorer::add_states(std::size_t up_to, std::vector<char>& dirty) {
  // init_state validates alpha/epsilon; run it once for the error even when
  // there is nothing to add.
  (void)init_state(0, config_.alpha, config_.epsilon);
  for (std::size_t i = states_.size(); i < up_to; ++i) {
    states_.push_back(init_state(static_cast<NodeId>(i), config_.alpha, config_.epsilon));
    embeddings_.push_back(Embedding::zeros(config_.sketch.dim, config_.sketch.hash_seed));
  }
  dirty.resize(up_to, 1);
}

SnapshotScore StreamScorer::step(std::span<const EdgeEvent> events) {
  // Phase 1: graph mutation, recording each arc change against the graph as
  // it stood just before its event.
  std::vector<ArcChange> changes;
  changes.reserve(events.size() * 2);
  for (std::size_t i = 0; i < events.size(); ++i) {
    graph_.classify(events[i], i);
    for (const auto& c : arc_changes(events[i], graph_)) {
      if (c.delta_weight != 0.0) changes.push_back(c);
    }
    graph_.apply_event(events[i], i);
  }

  // Phase 2: per-state adjust and push.
  const std::size_t old_count = states_.size();
  std::vector<char> dirty(old_count, 0);
  parallel_for(old_count, config_.threads, [&](std::size_t s) {
    auto& st = states_[s];
    for (const auto& c : changes) {
      const double before = st.p.get(c.from);
      if (before == 0.0) continue;
      adjust_for_arc(st, c);
      if (st.p.get(c.from) != before) dirty[s] = 1;
    }
  });
  add_states(graph_.node_count(), dirty);

  std::atomic<std::uint64_t> pops{0};
  std::atomic<std::uint64_t> transfers{0};
  parallel_for(states_.size(), config_.threads, [&](std::size_t s) {
    const auto stats = dynamic_push(states_[s], graph_, config_.push_cap);
    if (stats.pops > 0) dirty[s] = 1;
    pops += stats.pops;
    transfers += stats.transfers;
  });
  push_stats_ = {pops.load(), transfers.load()};

  // Phase 3: embeddings and node scores.
  delta_.assign(states_.size(), 0.0);
  parallel_for(states_.size(), config_.threads, [&](std::size_t s) {
    if (!dirty[s]) return;
    auto next = embed(states_[s].p, config_.sketch, sparsify_);
    delta_[s] = node_score(embeddings_[s], next, config_.scoring.norm);
    embeddings_[s] = std::move(next);
  });

  // Phase 4: subgraphs and aggregation.
  std::size_t skipped = 0;
  const auto seeds = select_seeds(graph_, config_.seeds, &skipped);
  if (skipped > 0 && !warned_seeds_) {
    log_warning(std::to_string(skipped) + " explicit seeds are not in the graph yet, skipped");
    warned_seeds_ = true;
  }
  std::vector<double> sub_scores(seeds.size());
  parallel_for(seeds.size(), config_.threads, [&](std::size_t i) {
    const auto sub = identify(graph_, seeds[i], config_.scoring.strategy);
    sub_scores[i] = subgraph_score(delta_, sub.nodes, config_.scoring.phi);
  });
  seed_scores_.clear();
  if (config_.keep_seed_detail) {
    seed_scores_.reserve(seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i) seed_scores_.emplace_back(seeds[i], sub_scores[i]);
  }

  ++done_;
  SnapshotScore out;
  out.snapshot = done_;
  out.score = sub_scores.empty() ? 0.0 : snapshot_score(sub_scores, config_.scoring.f);
  out.event_count = events.size();
  out.seed_count = seeds.size();
  return out;
}

ScoreSeries run(const DynamicGraph& initial, std::span<const std::vector<EdgeEvent>> snapshots,
                const RunConfig& config, const SnapshotObserver& observer) {
  StreamScorer scorer(initial, config, total_node_count(initial, snapshots));
  ScoreSeries series;
  series.snapshots.reserve(snapshots.size());
  for (const auto& batch : snapshots) {
    const auto score = scorer.step(batch);
    series.snapshots.push_back(score);
    if (config.keep_seed_detail) series.seed_detail.push_back(scorer.last_seed_scores());
    if (observer) observer(scorer, score);
  }
  return series;
}

}  // namespace pprwatch
