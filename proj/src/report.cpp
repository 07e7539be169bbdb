#include "pprwatch/report.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "pprwatch/errors.hpp"

namespace pprwatch {

void write_config_comment(std::ostream& out, const nlohmann::json& config) {
  if (!config.is_null()) out << "# config: " << config.dump() << '\n';
}

void write_scores_csv(std::ostream& out, const ScoreSeries& series, const std::vector<bool>& truth,
                      const nlohmann::json& config) {
  write_config_comment(out, config);
  out << "snapshot,score,rank,is_ground_truth_anomaly\n";
  const auto scores = series.scores();
  const auto ranks = rank_positions(scores);
  for (std::size_t i = 0; i < series.snapshots.size(); ++i) {
    const bool flag = i < truth.size() && truth[i];
    out << series.snapshots[i].snapshot << ',' << format_number(scores[i]) << ',' << ranks[i] << ','
        << (flag ? 1 : 0) << '\n';
  }
}

ScoresTable read_scores_csv(std::istream& in) {
  ScoresTable table;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  constexpr std::string_view kConfig = "# config: ";
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.starts_with(kConfig)) {
      try {
        table.config = nlohmann::json::parse(line.substr(kConfig.size()));
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(line_no, std::string("bad config comment: ") + e.what());
      }
      continue;
    }
    if (line.front() == '#') continue;
    if (!header) {
      if (!line.starts_with("snapshot,score")) throw ParseError(line_no, "missing scores header");
      header = true;
      continue;
    }
    std::istringstream fields(line);
    std::string snap, score, rank, flag;
    if (!std::getline(fields, snap, ',') || !std::getline(fields, score, ',') ||
        !std::getline(fields, rank, ',') || !std::getline(fields, flag, ',')) {
      throw ParseError(line_no, "scores rows need 4 fields");
    }
    try {
      table.snapshots.push_back(std::stoul(snap));
      table.scores.push_back(std::stod(score));
    } catch (const std::exception&) {
      throw ParseError(line_no, "bad number in scores row");
    }
    if (flag != "0" && flag != "1") throw ParseError(line_no, "anomaly flag must be 0 or 1");
    table.truth.push_back(flag == "1");
  }
  if (!header) throw ParseError(line_no, "empty scores file");
  return table;
}

ScoresTable read_scores_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open scores file " + path.string());
  return read_scores_csv(in);
}

void write_eval_csv(std::ostream& out, const EvalReport& report, const nlohmann::json& config) {
  write_config_comment(out, config);
  out << "k_prime,hits,precision,recall,f1\n";
  for (const auto& row : report.rows) {
    out << row.k_prime << ',' << row.hits << ',' << format_number(row.precision) << ','
        << format_number(row.recall) << ',' << format_number(row.f1) << '\n';
  }
}

void write_subgraph_line(std::ostream& out, std::size_t snapshot, const SeedSubgraph& sub,
                         const SubgraphStrategy& strategy, const IdMap& ids) {
  nlohmann::json nodes = nlohmann::json::array();
  for (NodeId v : sub.nodes) nodes.push_back(ids.original(v));
  const nlohmann::json line = {{"snapshot", snapshot},
                               {"seed", ids.original(sub.seed)},
                               {"strategy", strategy.name()},
                               {"nodes", std::move(nodes)}};
  out << line.dump() << '\n';
}

void write_embedding_rows(std::ostream& out, std::size_t snapshot, std::span<const Embedding> embeddings,
                          const IdMap& ids, bool header) {
  if (header && !embeddings.empty()) {
    out << "snapshot,node_id";
    for (std::size_t j = 0; j < embeddings.front().dim(); ++j) out << ",dim_" << j;
    out << '\n';
  }
  for (std::size_t i = 0; i < embeddings.size(); ++i) {
    out << snapshot << ',' << ids.original(static_cast<NodeId>(i));
    for (double x : embeddings[i].values) out << ',' << format_number(x);
    out << '\n';
  }
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& value) {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot write " + path.string());
  out << value.dump(2) << '\n';
}

}  // namespace pprwatch

namespace pprwatch {

nlohmann::json to_json(const RunConfig& config) {
  const auto& s = config.scoring;
  return {
      {"alpha", config.alpha},
      {"epsilon", config.epsilon},
      {"epsilon_c", config.epsilon_c},
      {"dim", config.sketch.dim},
      {"hash_seed", config.sketch.hash_seed},
      {"hash_version", kSketchHashVersion},
      {"embed_value", std::string(to_string(config.sketch.value_fn))},
      {"projection", std::string(to_string(config.sketch.projection))},
      {"strategy", s.strategy.name()},
      {"boundary_of", std::string(to_string(s.strategy.boundary_of))},
      {"phi", std::string(to_string(s.phi))},
      {"f", std::string(to_string(s.f))},
      {"norm", std::string(to_string(s.norm))},
      {"seeds", config.seeds.describe()},
      {"push_cap", config.push_cap},
  };
}

nlohmann::json to_json(const SnapshotPlan& plan) {
  nlohmann::json out = {{"warmup_snapshots", plan.warmup_snapshots}};
  switch (plan.mode) {
    case SnapshotPlan::Mode::kFixedEventCount:
      out["mode"] = "fixed_event_count";
      out["batch_size"] = plan.batch_size;
      break;
    case SnapshotPlan::Mode::kTimestampWindow:
      out["mode"] = "timestamp_window";
      out["window"] = plan.window;
      break;
    case SnapshotPlan::Mode::kExplicitBoundaries:
      out["mode"] = "explicit_boundaries";
      out["boundaries"] = plan.boundaries.size();
      break;
  }
  return out;
}

}  // namespace pprwatch
