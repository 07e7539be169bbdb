#include "pprwatch/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "pprwatch/errors.hpp"
#include "pprwatch/log.hpp"

namespace pprwatch {

SnapshotPlan SnapshotPlan::fixed_event_count(std::size_t batch_size, std::size_t warmup) {
  if (batch_size == 0) throw InvalidInputError("snapshot batch size must be positive");
  SnapshotPlan plan;
  plan.mode = Mode::kFixedEventCount;
  plan.batch_size = batch_size;
  plan.warmup_snapshots = warmup;
  return plan;
}

SnapshotPlan SnapshotPlan::timestamp_window(double window, std::size_t warmup) {
  if (!(window > 0.0)) throw InvalidInputError("snapshot window must be positive");
  SnapshotPlan plan;
  plan.mode = Mode::kTimestampWindow;
  plan.window = window;
  plan.warmup_snapshots = warmup;
  return plan;
}

SnapshotPlan SnapshotPlan::explicit_boundaries(std::vector<double> boundaries, std::size_t warmup) {
  if (!std::is_sorted(boundaries.begin(), boundaries.end())) {
    throw InvalidInputError("snapshot boundaries must be ascending");
  }
  SnapshotPlan plan;
  plan.mode = Mode::kExplicitBoundaries;
  plan.boundaries = std::move(boundaries);
  plan.warmup_snapshots = warmup;
  return plan;
}

std::string SnapshotPlan::describe() const {
  std::ostringstream out;
  switch (mode) {
    case Mode::kFixedEventCount:
      out << "fixed_event_count(" << batch_size << ")";
      break;
    case Mode::kTimestampWindow:
      out << "timestamp_window(" << format_number(window) << ")";
      break;
    case Mode::kExplicitBoundaries:
      out << "explicit_boundaries(" << boundaries.size() << ")";
      break;
  }
  out << " warmup=" << warmup_snapshots;
  return out.str();
}

std::vector<double> read_boundaries(std::istream& in) {
  std::vector<double> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::istringstream fields(line);
    double b = 0.0;
    if (!(fields >> b)) throw ParseError(line_no, "bad snapshot boundary");
    if (!out.empty() && b < out.back()) throw ParseError(line_no, "boundaries must be ascending");
    out.push_back(b);
  }
  return out;
}

std::vector<double> read_boundaries_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open boundaries file " + path.string());
  return read_boundaries(in);
}

std::vector<std::pair<std::size_t, std::size_t>> batch_ranges(std::span<const LogRecord> records,
                                                              const SnapshotPlan& plan) {
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  const std::size_t n = records.size();
  switch (plan.mode) {
    case SnapshotPlan::Mode::kFixedEventCount: {
      for (std::size_t begin = 0; begin < n; begin += plan.batch_size) {
        ranges.emplace_back(begin, std::min(n, begin + plan.batch_size));
      }
      break;
    }
    case SnapshotPlan::Mode::kTimestampWindow: {
      if (n == 0) break;
      const double origin = std::floor(records.front().time / plan.window);
      std::size_t begin = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const auto bucket =
            static_cast<std::size_t>(std::floor(records[i].time / plan.window) - origin);
        while (ranges.size() < bucket) {
          ranges.emplace_back(begin, i);
          begin = i;
        }
      }
      ranges.emplace_back(begin, n);
      break;
    }
    case SnapshotPlan::Mode::kExplicitBoundaries: {
      std::size_t begin = 0;
      std::size_t i = 0;
      for (double b : plan.boundaries) {
        while (i < n && records[i].time < b) ++i;
        ranges.emplace_back(begin, i);
        begin = i;
      }
      ranges.emplace_back(begin, n);
      break;
    }
  }
  return ranges;
}

GroundTruth GroundTruth::from_counts(std::vector<std::size_t> anomalous_edges, std::size_t min_count) {
  if (min_count == 0) throw InvalidInputError("label min_count must be >= 1");
  GroundTruth truth;
  truth.min_count = min_count;
  truth.flags.reserve(anomalous_edges.size());
  for (auto c : anomalous_edges) truth.flags.push_back(c >= min_count);
  truth.anomalous_edges = std::move(anomalous_edges);
  return truth;
}

std::size_t GroundTruth::anomaly_count() const {
  return static_cast<std::size_t>(std::count(flags.begin(), flags.end(), true));
}

namespace {

std::vector<LogRecord> without_self_loops(std::span<const LogRecord> records, std::size_t& skipped) {
  std::vector<LogRecord> kept;
  kept.reserve(records.size());
  skipped = 0;
  for (const auto& r : records) {
    if (r.src == r.dst) {
      ++skipped;
    } else {
      kept.push_back(r);
    }
  }
  return kept;
}

void check_warmup(std::size_t batches, const SnapshotPlan& plan) {
  if (plan.warmup_snapshots > batches) {
    throw InvalidInputError("warm-up of " + std::to_string(plan.warmup_snapshots) +
                            " snapshots exceeds the " + std::to_string(batches) + " in the stream");
  }
}

}  // namespace

std::vector<std::size_t> count_anomalous_edges(std::span<const LogRecord> records,
                                               const SnapshotPlan& plan) {
  std::size_t skipped = 0;
  const auto kept = without_self_loops(records, skipped);
  const auto ranges = batch_ranges(kept, plan);
  check_warmup(ranges.size(), plan);
  std::vector<std::size_t> counts;
  for (std::size_t s = plan.warmup_snapshots; s < ranges.size(); ++s) {
    std::size_t c = 0;
    for (std::size_t i = ranges[s].first; i < ranges[s].second; ++i) c += kept[i].anomalous ? 1 : 0;
    counts.push_back(c);
  }
  return counts;
}

IngestResult ingest(std::span<const LogRecord> records, IdMap& ids, const IngestOptions& options) {
  IngestResult result{.initial = DynamicGraph(options.orientation)};
  const auto kept = without_self_loops(records, result.skipped_self_loops);
  if (result.skipped_self_loops > 0) {
    log_warning("dropped " + std::to_string(result.skipped_self_loops) + " self-loop events");
  }
  result.total_events = kept.size();
  const auto ranges = batch_ranges(kept, options.plan);
  check_warmup(ranges.size(), options.plan);

  DynamicGraph replay(options.orientation);
  std::vector<std::size_t> counts;
  for (std::size_t s = 0; s < ranges.size(); ++s) {
    const bool warmup = s < options.plan.warmup_snapshots;
    if (s == options.plan.warmup_snapshots) result.initial = replay;
    std::vector<EdgeEvent> batch;
    std::size_t anomalous = 0;
    for (std::size_t i = ranges[s].first; i < ranges[s].second; ++i) {
      const auto& rec = kept[i];
      EdgeEvent e{.time = rec.time,
                  .src = ids.intern(rec.src),
                  .dst = ids.intern(rec.dst),
                  .delta_weight = rec.delta_weight,
                  .anomalous = rec.anomalous};
      if (!options.weighted) {
        const bool present = replay.weight(e.src, e.dst).has_value();
        if (e.delta_weight > 0.0) {
          e.delta_weight = present ? 0.0 : 1.0;
        } else if (e.delta_weight < 0.0) {
          e.delta_weight = -1.0;
        }
      }
      try {
        e.kind = replay.apply_event(e, i);
      } catch (const InvalidEventError& err) {
        throw ParseError(rec.line, err.what());
      }
      anomalous += rec.anomalous ? 1 : 0;
      if (!warmup) batch.push_back(e);
    }
    if (warmup) {
      result.warmup_events += ranges[s].second - ranges[s].first;
    } else {
      result.snapshots.push_back(std::move(batch));
      counts.push_back(anomalous);
    }
  }
  if (options.plan.warmup_snapshots == ranges.size()) result.initial = replay;
  result.truth = GroundTruth::from_counts(std::move(counts), options.min_label_count);
  return result;
}

}  // namespace pprwatch
