#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "pprwatch/embedding.hpp"
#include "pprwatch/evaluate.hpp"
#include "pprwatch/event_log.hpp"
#include "pprwatch/scoring.hpp"
#include "pprwatch/subgraph.hpp"

namespace pprwatch {

// CSV outputs start with `# config: <compact json>` so every file carries the
// effective parameters it was produced with.
void write_config_comment(std::ostream& out, const nlohmann::json& config);

// snapshot,score,rank,is_ground_truth_anomaly. Scores use the shortest
// round-trip decimal, so equal series give byte-identical files.
void write_scores_csv(std::ostream& out, const ScoreSeries& series, const std::vector<bool>& truth,
                      const nlohmann::json& config);

struct ScoresTable {
  std::vector<std::size_t> snapshots;
  std::vector<double> scores;
  std::vector<bool> truth;
  nlohmann::json config;  // null when the file has no config comment
};

ScoresTable read_scores_csv(std::istream& in);
ScoresTable read_scores_csv_file(const std::filesystem::path& path);

// k_prime,hits,precision,recall,f1
void write_eval_csv(std::ostream& out, const EvalReport& report, const nlohmann::json& config);

// One JSON object per line: {"snapshot", "seed", "strategy", "nodes"}, ids as
// original ids.
void write_subgraph_line(std::ostream& out, std::size_t snapshot, const SeedSubgraph& sub,
                         const SubgraphStrategy& strategy, const IdMap& ids);

// snapshot,node_id,dim_0,...,dim_{d-1}
void write_embedding_rows(std::ostream& out, std::size_t snapshot, std::span<const Embedding> embeddings,
                          const IdMap& ids, bool header);

void write_json_file(const std::filesystem::path& path, const nlohmann::json& value);

}  // namespace pprwatch

#include "pprwatch/ingest.hpp"
#include "pprwatch/runner.hpp"

namespace pprwatch {

nlohmann::json to_json(const RunConfig& config);
nlohmann::json to_json(const SnapshotPlan& plan);

}  // namespace pprwatch
