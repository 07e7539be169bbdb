#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "pprwatch/event_log.hpp"

namespace pprwatch {

struct Injection {
  std::size_t snapshot = 1;  // 1..snapshots
  std::size_t clique_size = 10;
  double weight = 1.0;  // per clique edge
};

// "t:size" or "t:size:weight"
Injection parse_injection(std::string_view text);

struct SynthConfig {
  std::size_t nodes = 1000;
  std::size_t snapshots = 100;
  std::size_t background_rate = 50;  // background events per snapshot
  std::size_t initial_edges = 0;      // 0 means 2 * nodes
  std::size_t burn_in = 20;           // unrecorded background snapshots before time 0
  // Endpoint popularity ~ rank^-skew; 0 is uniform.
  double skew = 0.8;
  double deletion_fraction = 0.35;
  double update_fraction = 0.3;  // weight increases on existing edges
  std::vector<Injection> injections;
  std::uint64_t seed = 1;
};

/// Event log with node ids "0".."n-1". Time 0 holds the initial graph (a
/// random spanning tree plus popularity-biased edges, then `burn_in`
/// snapshots of unrecorded background); time t in 1..T holds snapshot t: background insertions, weight
/// increases and deletions, interleaved with every edge of each clique
/// injected at t (labelled 1). Background weights are integers in 1..3.
/// Ingest with a unit timestamp window and one warm-up snapshot to score
/// snapshots 1..T.
std::vector<LogRecord> generate_synthetic(const SynthConfig& config);

}  // namespace pprwatch
