#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pprwatch/event_log.hpp"
#include "pprwatch/graph_store.hpp"

namespace pprwatch {

/// How the event stream is cut into snapshots. The first `warmup_snapshots`
/// batches are folded into the initial graph; the rest are scored and
/// numbered from 1.
struct SnapshotPlan {
  enum class Mode {
    kFixedEventCount,     // consecutive batches of `batch_size` events
    kTimestampWindow,     // floor(time / window) buckets, empty buckets kept
    kExplicitBoundaries,  // each boundary b opens a snapshot at the first time >= b
  };

  Mode mode = Mode::kFixedEventCount;
  std::size_t batch_size = 1000;
  double window = 1.0;
  std::vector<double> boundaries;
  std::size_t warmup_snapshots = 0;

  static SnapshotPlan fixed_event_count(std::size_t batch_size, std::size_t warmup = 0);
  static SnapshotPlan timestamp_window(double window, std::size_t warmup = 0);
  static SnapshotPlan explicit_boundaries(std::vector<double> boundaries, std::size_t warmup = 0);

  std::string describe() const;
};

// One ascending timestamp per line; `#` comments allowed.
std::vector<double> read_boundaries(std::istream& in);
std::vector<double> read_boundaries_file(const std::filesystem::path& path);

// [begin, end) record ranges of every snapshot, warm-up included.
std::vector<std::pair<std::size_t, std::size_t>> batch_ranges(std::span<const LogRecord> records,
                                                              const SnapshotPlan& plan);

/// Per scored snapshot: anomalous iff it holds at least `min_count`
/// anomalous-labelled events. Index 0 is snapshot 1.
struct GroundTruth {
  std::vector<std::size_t> anomalous_edges;
  std::vector<bool> flags;
  std::size_t min_count = 1;

  static GroundTruth from_counts(std::vector<std::size_t> anomalous_edges, std::size_t min_count);
  std::size_t anomaly_count() const;
};

struct IngestOptions {
  SnapshotPlan plan;
  Orientation orientation = Orientation::kUndirected;
  bool weighted = true;
  std::size_t min_label_count = 1;
};

struct IngestResult {
  DynamicGraph initial;
  std::vector<std::vector<EdgeEvent>> snapshots;
  GroundTruth truth;
  std::size_t total_events = 0;
  std::size_t warmup_events = 0;
  std::size_t skipped_self_loops = 0;
};

/// Interns ids, cuts snapshots, folds warm-up into the initial graph and
/// classifies every scored event against a replay of the stream. Unweighted
/// mode maps events onto the binary adjacency pattern: a positive delta on an
/// absent edge inserts weight 1, on a present edge it is a no-op; a negative
/// delta deletes. Self-loop records are dropped before batching.
IngestResult ingest(std::span<const LogRecord> records, IdMap& ids, const IngestOptions& options);

// Anomalous-edge count per scored snapshot; labels only, no graph replay.
std::vector<std::size_t> count_anomalous_edges(std::span<const LogRecord> records,
                                               const SnapshotPlan& plan);

}  // namespace pprwatch
