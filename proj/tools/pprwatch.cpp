// Command-line front end: run, evaluate, synth, calibrate-labels, dump-subgraphs.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "pprwatch/errors.hpp"
#include "pprwatch/evaluate.hpp"
#include "pprwatch/event_log.hpp"
#include "pprwatch/ingest.hpp"
#include "pprwatch/log.hpp"
#include "pprwatch/ppr_engine.hpp"
#include "pprwatch/report.hpp"
#include "pprwatch/runner.hpp"
#include "pprwatch/subgraph.hpp"
#include "pprwatch/synthetic.hpp"

namespace fs = std::filesystem;
using namespace pprwatch;

namespace {

struct StreamOptions {
  std::string input;
  bool weighted = true;
  bool directed = false;
  std::size_t snapshot_events = 1000;
  std::string snapshot_boundaries;
  double snapshot_window = 0.0;
  std::size_t warmup = 0;
  std::size_t min_label_count = 1;
  bool allow_unsorted = false;
  std::string id_map;
};

void add_stream_options(CLI::App* cmd, StreamOptions& o, bool graph_flags) {
  cmd->add_option("--input", o.input, "TSV event log")->required()->check(CLI::ExistingFile);
  auto* events = cmd->add_option("--snapshot-events", o.snapshot_events, "events per snapshot")
                     ->capture_default_str();
  auto* bounds = cmd->add_option("--snapshot-boundaries", o.snapshot_boundaries,
                                 "file of ascending snapshot start times")
                     ->check(CLI::ExistingFile);
  auto* window = cmd->add_option("--snapshot-window", o.snapshot_window, "timestamp window width");
  events->excludes(bounds)->excludes(window);
  bounds->excludes(window);
  cmd->add_option("--warmup", o.warmup, "leading snapshots folded into the initial graph")
      ->capture_default_str();
  cmd->add_option("--min-label-count", o.min_label_count,
                  "anomalous edges needed to flag a snapshot")
      ->capture_default_str();
  cmd->add_flag("--allow-unsorted", o.allow_unsorted, "stable-sort out-of-order timestamps");
  if (!graph_flags) return;
  cmd->add_flag("--weighted,!--unweighted", o.weighted, "use event weights (default) or unit weights");
  cmd->add_flag("--directed,!--undirected", o.directed, "edge orientation (default undirected)");
  cmd->add_option("--id-map", o.id_map, "id map to extend (loaded if it exists)");
}

SnapshotPlan make_plan(const StreamOptions& o) {
  if (!o.snapshot_boundaries.empty()) {
    return SnapshotPlan::explicit_boundaries(read_boundaries_file(o.snapshot_boundaries), o.warmup);
  }
  if (o.snapshot_window > 0.0) return SnapshotPlan::timestamp_window(o.snapshot_window, o.warmup);
  return SnapshotPlan::fixed_event_count(o.snapshot_events, o.warmup);
}

struct Loaded {
  IdMap ids;
  IngestResult data;
  SnapshotPlan plan;
};

Loaded load_stream(const StreamOptions& o) {
  Loaded out;
  if (!o.id_map.empty() && fs::exists(o.id_map)) out.ids = IdMap::load_file(o.id_map);
  out.plan = make_plan(o);
  const auto records = read_event_log_file(o.input, o.allow_unsorted);
  IngestOptions opts;
  opts.plan = out.plan;
  opts.orientation = o.directed ? Orientation::kDirected : Orientation::kUndirected;
  opts.weighted = o.weighted;
  opts.min_label_count = o.min_label_count;
  out.data = ingest(records, out.ids, opts);
  log_info("ingested " + std::to_string(out.data.total_events) + " events, " +
           std::to_string(out.ids.size()) + " nodes, " + std::to_string(out.data.snapshots.size()) +
           " scored snapshots (" + std::to_string(out.data.truth.anomaly_count()) + " anomalous)");
  return out;
}

nlohmann::json stream_json(const StreamOptions& o, const SnapshotPlan& plan) {
  return {{"input", o.input},
          {"weighted", o.weighted},
          {"directed", o.directed},
          {"plan", to_json(plan)},
          {"min_label_count", o.min_label_count},
          {"allow_unsorted", o.allow_unsorted}};
}

struct ScoringOptions {
  std::string strategy = "hybrid-tc";
  std::string boundary_of = "strong-plus-seed";
  std::string phi = "sum";
  std::string f = "mean";
  std::string norm = "l2";
  std::string seeds = "all";
};

void add_scoring_options(CLI::App* cmd, ScoringOptions& o) {
  cmd->add_option("--strategy", o.strategy, "1hop|2hop|3hop|tc|hybrid-tc|node")->capture_default_str();
  cmd->add_option("--boundary-of", o.boundary_of, "strong-plus-seed|strong-only")
      ->check(CLI::IsMember({"strong-plus-seed", "strong-only"}))
      ->capture_default_str();
  cmd->add_option("--seeds", o.seeds, "all|high-degree:K|file:PATH")->capture_default_str();
}

SubgraphStrategy make_strategy(const ScoringOptions& o) {
  auto s = SubgraphStrategy::parse(o.strategy);
  s.boundary_of = parse_boundary_of(o.boundary_of);
  return s;
}

int cmd_run(const StreamOptions& so, const ScoringOptions& sc, RunConfig cfg, const std::string& embed_value,
            const std::string& projection, const std::string& out_dir, const std::string& k_list,
            const std::string& dump_embeddings, const std::string& checkpoint_out) {
  const auto t0 = std::chrono::steady_clock::now();
  auto loaded = load_stream(so);
  cfg.sketch.value_fn = parse_value_fn(embed_value);
  cfg.sketch.projection = parse_projection(projection);
  cfg.scoring.strategy = make_strategy(sc);
  cfg.scoring.phi = parse_aggregator(sc.phi);
  cfg.scoring.f = parse_aggregator(sc.f);
  cfg.scoring.norm = parse_norm(sc.norm);
  cfg.seeds = SeedPolicy::parse(sc.seeds, loaded.ids);
  if (cfg.epsilon_c <= 0.0) cfg.epsilon_c = SparsifyConfig::for_node_count(loaded.ids.size()).epsilon_c;

  nlohmann::json config = to_json(cfg);
  config["stream"] = stream_json(so, loaded.plan);

  std::ofstream embed_out;
  if (!dump_embeddings.empty()) {
    embed_out.open(dump_embeddings);
    if (!embed_out) throw InvalidInputError("cannot write " + dump_embeddings);
  }
  SnapshotObserver observer = [&](const StreamScorer& scorer, const SnapshotScore& s) {
    if (embed_out.is_open()) {
      write_embedding_rows(embed_out, s.snapshot, scorer.embeddings(), loaded.ids, s.snapshot == 1);
    }
    if (s.snapshot % 50 == 0) {
      log_info("snapshot " + std::to_string(s.snapshot) + "/" +
               std::to_string(loaded.data.snapshots.size()));
    }
    if (!checkpoint_out.empty() && s.snapshot == loaded.data.snapshots.size()) {
      std::ofstream ck(checkpoint_out, std::ios::binary);
      if (!ck) throw InvalidInputError("cannot write " + checkpoint_out);
      save_checkpoint(ck, scorer.states());
    }
  };
  const auto series = run(loaded.data.initial, loaded.data.snapshots, cfg, observer);
  const auto& truth = loaded.data.truth.flags;
  const auto ks = k_list.empty() ? default_k_list() : parse_k_list(k_list);
  const auto report = evaluate(series.scores(), truth, ks);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (out_dir.empty()) {
    write_scores_csv(std::cout, series, truth, config);
    return 0;
  }
  fs::create_directories(out_dir);
  {
    std::ofstream out(fs::path(out_dir) / "scores.csv");
    write_scores_csv(out, series, truth, config);
  }
  {
    std::ofstream out(fs::path(out_dir) / "eval.csv");
    write_eval_csv(out, report, config);
  }
  loaded.ids.save_file(fs::path(out_dir) / "id_map.tsv");
  nlohmann::json manifest = config;
  manifest["input_checksum_fnv1a64"] = file_checksum(so.input);
  manifest["nodes"] = loaded.ids.size();
  manifest["total_events"] = loaded.data.total_events;
  manifest["warmup_events"] = loaded.data.warmup_events;
  manifest["skipped_self_loops"] = loaded.data.skipped_self_loops;
  manifest["scored_snapshots"] = series.snapshots.size();
  manifest["anomalous_snapshots"] = loaded.data.truth.anomaly_count();
  manifest["seconds"] = seconds;
  if (const auto* head = report.at(kHeadlineK)) {
    manifest["headline"] = {{"k_prime", head->k_prime},
                            {"precision", head->precision},
                            {"recall", head->recall},
                            {"f1", head->f1}};
  }
  write_json_file(fs::path(out_dir) / "manifest.json", manifest);
  log_info("wrote " + out_dir);
  return 0;
}

void print_report(const EvalReport& report) {
  std::cout << "k'\thits\tprecision\trecall\tf1\n";
  for (const auto& r : report.rows) {
    std::cout << r.k_prime << '\t' << r.hits << '\t' << r.precision << '\t' << r.recall << '\t' << r.f1
              << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streaming snapshot anomaly detection with incremental personalized PageRank"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "suppress progress and warnings");

  // run
  auto* run_cmd = app.add_subcommand("run", "score every snapshot of an event log");
  run_cmd->set_config("--config", "", "TOML/INI file with option defaults");
  StreamOptions run_stream;
  ScoringOptions run_scoring;
  RunConfig run_cfg;
  std::string embed_value = "log-ratio", projection = "hashed", out_dir, k_list, dump_embeddings,
              checkpoint_out;
  add_stream_options(run_cmd, run_stream, true);
  add_scoring_options(run_cmd, run_scoring);
  run_cmd->add_option("--alpha", run_cfg.alpha)->capture_default_str();
  run_cmd->add_option("--epsilon", run_cfg.epsilon)->capture_default_str();
  run_cmd->add_option("--dim", run_cfg.sketch.dim)->capture_default_str();
  run_cmd->add_option("--hash-seed", run_cfg.sketch.hash_seed)->capture_default_str();
  run_cmd->add_option("--embed-value", embed_value, "log-ratio|log-raw")
      ->check(CLI::IsMember({"log-ratio", "log-raw"}))
      ->capture_default_str();
  run_cmd->add_option("--projection", projection, "hashed|identity")
      ->check(CLI::IsMember({"hashed", "identity"}))
      ->capture_default_str();
  run_cmd->add_option("--phi", run_scoring.phi, "sum|mean|median|max|min")
      ->check(CLI::IsMember({"sum", "mean", "median", "max", "min"}))
      ->capture_default_str();
  run_cmd->add_option("--f", run_scoring.f, "mean|sum|median|max|min")
      ->check(CLI::IsMember({"sum", "mean", "median", "max", "min"}))
      ->capture_default_str();
  run_cmd->add_option("--norm", run_scoring.norm, "l1|l2")
      ->check(CLI::IsMember({"l1", "l2"}))
      ->capture_default_str();
  run_cmd->add_option("--threads", run_cfg.threads, "worker threads, 0 = all cores")->capture_default_str();
  run_cmd->add_option("--push-cap", run_cfg.push_cap, "max residual transfers per push")
      ->capture_default_str();
  run_cmd->add_option("--out", out_dir, "output directory (scores.csv, eval.csv, manifest.json)");
  run_cmd->add_option("--k-list", k_list, "k' values: '50,100' or '50:800:50'");
  run_cmd->add_option("--dump-embeddings", dump_embeddings, "CSV of every embedding per snapshot");
  run_cmd->add_option("--checkpoint-out", checkpoint_out, "binary push-state checkpoint after the run");

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "top-k' precision/recall/F1 of a scores CSV");
  std::string eval_scores, eval_k_list, eval_out;
  eval_cmd->add_option("--scores", eval_scores, "scores.csv from run")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--k-list", eval_k_list, "k' values: '50,100' or '50:800:50'");
  eval_cmd->add_option("--out", eval_out, "eval CSV path");

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic event log with injected cliques");
  SynthConfig synth;
  std::vector<std::string> injections;
  std::string synth_out;
  synth_cmd->add_option("--nodes", synth.nodes)->capture_default_str();
  synth_cmd->add_option("--snapshots", synth.snapshots)->capture_default_str();
  synth_cmd->add_option("--background-rate", synth.background_rate, "background events per snapshot")
      ->capture_default_str();
  synth_cmd->add_option("--initial-edges", synth.initial_edges, "0 = 2 * nodes")->capture_default_str();
  synth_cmd->add_option("--burn-in", synth.burn_in, "unrecorded background snapshots")->capture_default_str();
  synth_cmd->add_option("--skew", synth.skew, "endpoint popularity exponent")->capture_default_str();
  synth_cmd->add_option("--deletion-fraction", synth.deletion_fraction)->capture_default_str();
  synth_cmd->add_option("--update-fraction", synth.update_fraction)->capture_default_str();
  synth_cmd->add_option("--inject", injections, "t:size[:weight], repeatable");
  synth_cmd->add_option("--seed", synth.seed)->capture_default_str();
  synth_cmd->add_option("--out", synth_out, "event log path")->required();

  // calibrate-labels
  auto* cal_cmd = app.add_subcommand("calibrate-labels", "sweep the label min_count against a target");
  StreamOptions cal_stream;
  std::size_t cal_target = 289;
  add_stream_options(cal_cmd, cal_stream, false);
  cal_cmd->add_option("--target", cal_target, "wanted number of anomalous snapshots")->capture_default_str();

  // dump-subgraphs
  auto* dump_cmd = app.add_subcommand("dump-subgraphs", "write seed subgraphs as JSON lines");
  StreamOptions dump_stream;
  ScoringOptions dump_scoring;
  std::vector<std::size_t> dump_snapshots;
  std::string dump_out;
  add_stream_options(dump_cmd, dump_stream, true);
  add_scoring_options(dump_cmd, dump_scoring);
  dump_cmd->add_option("--snapshot", dump_snapshots, "scored snapshot(s) to dump (default all)");
  dump_cmd->add_option("--out", dump_out, "JSON lines path (default stdout)");

  CLI11_PARSE(app, argc, argv);
  set_log_quiet(quiet);

  try {
    if (*run_cmd) {
      return cmd_run(run_stream, run_scoring, run_cfg, embed_value, projection, out_dir, k_list,
                     dump_embeddings, checkpoint_out);
    }
    if (*eval_cmd) {
      const auto table = read_scores_csv_file(eval_scores);
      const auto ks = eval_k_list.empty() ? default_k_list() : parse_k_list(eval_k_list);
      const auto report = evaluate(table.scores, table.truth, ks);
      print_report(report);
      if (!eval_out.empty()) {
        std::ofstream out(eval_out);
        write_eval_csv(out, report, table.config);
      }
      return 0;
    }
    if (*synth_cmd) {
      for (const auto& text : injections) synth.injections.push_back(parse_injection(text));
      const auto records = generate_synthetic(synth);
      std::ofstream out(synth_out);
      if (!out) throw InvalidInputError("cannot write " + synth_out);
      write_event_log(out, records);
      log_info("wrote " + std::to_string(records.size()) + " events to " + synth_out +
               " (ingest with --snapshot-window 1 --warmup 1)");
      return 0;
    }
    if (*cal_cmd) {
      const auto records = read_event_log_file(cal_stream.input, cal_stream.allow_unsorted);
      const auto counts = count_anomalous_edges(records, make_plan(cal_stream));
      std::size_t max_count = 0;
      for (auto c : counts) max_count = std::max(max_count, c);
      std::size_t best = 1;
      std::size_t best_gap = static_cast<std::size_t>(-1);
      std::cout << "min_count\tanomalous_snapshots\n";
      for (std::size_t m = 1; m <= std::max<std::size_t>(1, max_count); ++m) {
        const auto flagged = GroundTruth::from_counts(counts, m).anomaly_count();
        std::cout << m << '\t' << flagged << '\n';
        const auto gap = flagged > cal_target ? flagged - cal_target : cal_target - flagged;
        if (gap < best_gap) {
          best_gap = gap;
          best = m;
        }
      }
      std::cout << "# closest to " << cal_target << ": min_count=" << best << " ("
                << GroundTruth::from_counts(counts, best).anomaly_count() << " snapshots of "
                << counts.size() << ")\n";
      return 0;
    }
    if (*dump_cmd) {
      auto loaded = load_stream(dump_stream);
      const auto strategy = make_strategy(dump_scoring);
      const auto policy = SeedPolicy::parse(dump_scoring.seeds, loaded.ids);
      std::ofstream file;
      if (!dump_out.empty()) {
        file.open(dump_out);
        if (!file) throw InvalidInputError("cannot write " + dump_out);
      }
      std::ostream& out = dump_out.empty() ? std::cout : file;
      std::sort(dump_snapshots.begin(), dump_snapshots.end());
      DynamicGraph g = loaded.data.initial;
      for (std::size_t t = 1; t <= loaded.data.snapshots.size(); ++t) {
        const auto& batch = loaded.data.snapshots[t - 1];
        for (std::size_t i = 0; i < batch.size(); ++i) g.apply_event(batch[i], i);
        if (!dump_snapshots.empty() &&
            !std::binary_search(dump_snapshots.begin(), dump_snapshots.end(), t)) {
          continue;
        }
        for (NodeId seed : select_seeds(g, policy)) {
          write_subgraph_line(out, t, identify(g, seed, strategy), strategy, loaded.ids);
        }
      }
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
