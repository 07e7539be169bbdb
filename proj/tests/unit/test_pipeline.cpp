#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pprwatch/errors.hpp"
#include "pprwatch/evaluate.hpp"
#include "pprwatch/event_log.hpp"
#include "pprwatch/ingest.hpp"
#include "pprwatch/log.hpp"
#include "pprwatch/parallel.hpp"
#include "pprwatch/report.hpp"
#include "pprwatch/runner.hpp"
#include "pprwatch/seeds.hpp"
#include "pprwatch/synthetic.hpp"

using namespace pprwatch;

namespace {

struct QuietLogs {
  QuietLogs() { set_log_quiet(true); }
  ~QuietLogs() { set_log_quiet(false); }
};

std::vector<LogRecord> parse(const std::string& text, bool allow_unsorted = false) {
  std::istringstream in(text);
  return read_event_log(in, allow_unsorted);
}

// Ten unit insertions on a path 0-1-...-10 at times 0..9.
std::string path_log() {
  std::string text = "time\tsrc\tdst\tdelta_weight\tlabel\n";
  for (int i = 0; i < 10; ++i) {
    text += std::to_string(i) + "\t" + std::to_string(i) + "\t" + std::to_string(i + 1) + "\t1\t" +
            (i == 7 ? "1" : "0") + "\n";
  }
  return text;
}

std::size_t line_of(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("event log parsing") {
  const auto records = parse("# comment\n\ntime\tsrc\tdst\tdelta_weight\tlabel\n1\ta\tb\t2.5\t0\n2\tb\tc\t-1\t1\n");
  REQUIRE(records.size() == 2);
  CHECK(records[0].src == "a");
  CHECK(records[0].delta_weight == 2.5);
  CHECK(records[1].anomalous);
  CHECK(records[1].line == 5);

  CHECK(parse("1\t0\t1\t1\t0\n").size() == 1);  // no header
  CHECK(line_of("1\t0\t1\t1\t0\n2\t0\t1\n") == 2);
  CHECK(line_of("1\t0\t1\t1\t2\n") == 1);
  CHECK(line_of("h\n1\t0\t1\tx\t0\n") == 2);
  CHECK(line_of("1\t0\t1\t1\t0\nbad\t0\t1\t1\t0\n") == 2);
  CHECK(line_of("1\t0\t1\tinf\t0\n") == 1);
  CHECK(line_of("5\t0\t1\t1\t0\n3\t1\t2\t1\t0\n") == 2);

  const auto sorted = parse("5\t0\t1\t1\t0\n3\t1\t2\t1\t0\n3\t2\t3\t1\t0\n", true);
  CHECK(sorted[0].time == 3);
  CHECK(sorted[0].src == "1");
  CHECK(sorted[1].src == "2");
  CHECK(sorted[2].time == 5);
}

TEST_CASE("event log write/read round trip") {
  const auto records = parse(path_log());
  std::ostringstream out;
  write_event_log(out, records);
  const auto again = parse(out.str());
  REQUIRE(again.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(again[i].time == records[i].time);
    CHECK(again[i].src == records[i].src);
    CHECK(again[i].delta_weight == records[i].delta_weight);
    CHECK(again[i].anomalous == records[i].anomalous);
  }
  CHECK(format_number(0.1) == "0.1");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("id map") {
  IdMap ids;
  CHECK(ids.intern("x") == 0);
  CHECK(ids.intern("y") == 1);
  CHECK(ids.intern("x") == 0);
  CHECK(ids.find("y") == NodeId{1});
  CHECK_FALSE(ids.find("z").has_value());
  std::stringstream buf;
  ids.save(buf);
  const auto loaded = IdMap::load(buf);
  CHECK(loaded.size() == 2);
  CHECK(loaded.original(1) == "y");

  std::stringstream gap("original_id\tdense_id\na\t0\nb\t2\n");
  CHECK_THROWS_AS(IdMap::load(gap), InvalidInputError);
  std::stringstream dup("a\t0\na\t1\n");
  CHECK_THROWS_AS(IdMap::load(dup), InvalidInputError);
}

TEST_CASE("ingest with fixed event counts") {
  const auto records = parse(path_log());
  SUBCASE("two snapshots of five") {
    IdMap ids;
    IngestOptions opts{.plan = SnapshotPlan::fixed_event_count(5)};
    const auto r = ingest(records, ids, opts);
    CHECK(r.snapshots.size() == 2);
    CHECK(r.snapshots[0].size() == 5);
    CHECK(r.snapshots[1].size() == 5);
    CHECK(r.initial.edge_count() == 0);
    CHECK(r.truth.flags == std::vector<bool>{false, true});
    CHECK(r.truth.anomalous_edges == std::vector<std::size_t>{0, 1});
    CHECK(r.snapshots[0][0].kind == EventKind::kInsertion);
  }
  SUBCASE("warm-up folds the first five into the initial graph") {
    IdMap ids;
    IngestOptions opts{.plan = SnapshotPlan::fixed_event_count(5, 1)};
    const auto r = ingest(records, ids, opts);
    CHECK(r.snapshots.size() == 1);
    CHECK(r.initial.edge_count() == 5);
    CHECK(r.initial.weight(*ids.find("0"), *ids.find("1")) == 1.0);
    CHECK(r.warmup_events == 5);
    CHECK(r.truth.flags == std::vector<bool>{true});
  }
  SUBCASE("min_count raises the bar") {
    IdMap ids;
    IngestOptions opts{.plan = SnapshotPlan::fixed_event_count(5), .min_label_count = 2};
    CHECK(ingest(records, ids, opts).truth.anomaly_count() == 0);
  }
  SUBCASE("warm-up longer than the stream") {
    IdMap ids;
    IngestOptions opts{.plan = SnapshotPlan::fixed_event_count(5, 3)};
    CHECK_THROWS_AS(ingest(records, ids, opts), InvalidInputError);
  }
}

TEST_CASE("ingest snapshot plans partition every event") {
  const auto records = parse("0\ta\tb\t1\t0\n0.5\tb\tc\t1\t0\n2.2\tc\td\t1\t1\n2.9\ta\tc\t1\t0\n5\ta\td\t1\t0\n");
  SUBCASE("timestamp windows keep empty buckets") {
    const auto ranges = batch_ranges(records, SnapshotPlan::timestamp_window(1.0));
    CHECK(ranges.size() == 6);
    std::vector<std::size_t> sizes;
    for (auto [b, e] : ranges) sizes.push_back(e - b);
    CHECK(sizes == std::vector<std::size_t>{2, 0, 2, 0, 0, 1});
  }
  SUBCASE("explicit boundaries") {
    const auto ranges = batch_ranges(records, SnapshotPlan::explicit_boundaries({1.0, 3.0}));
    std::vector<std::size_t> sizes;
    for (auto [b, e] : ranges) sizes.push_back(e - b);
    CHECK(sizes == std::vector<std::size_t>{2, 2, 1});
    std::istringstream in("# starts\n1.0\n3\n");
    CHECK(read_boundaries(in) == std::vector<double>{1.0, 3.0});
    std::istringstream bad("3\n1\n");
    CHECK_THROWS_AS(read_boundaries(bad), ParseError);
  }
  SUBCASE("fixed count") {
    const auto ranges = batch_ranges(records, SnapshotPlan::fixed_event_count(2));
    CHECK(ranges.size() == 3);
    CHECK(ranges.back() == std::pair<std::size_t, std::size_t>{4, 5});
  }
  for (const auto& plan : {SnapshotPlan::fixed_event_count(3), SnapshotPlan::timestamp_window(0.7),
                           SnapshotPlan::explicit_boundaries({0.2, 2.5, 9.0})}) {
    std::size_t covered = 0;
    std::size_t expected_begin = 0;
    for (auto [b, e] : batch_ranges(records, plan)) {
      CHECK(b == expected_begin);
      expected_begin = e;
      covered += e - b;
    }
    CHECK(covered == records.size());
  }
}

TEST_CASE("ingest unweighted coercion and self-loops") {
  QuietLogs quiet;
  const auto records = parse("1\ta\tb\t3\t0\n2\ta\tb\t4\t0\n3\ta\ta\t1\t0\n4\ta\tb\t-7\t0\n5\ta\tb\t2\t0\n");
  IdMap ids;
  IngestOptions opts{.plan = SnapshotPlan::fixed_event_count(10), .weighted = false};
  const auto r = ingest(records, ids, opts);
  CHECK(r.skipped_self_loops == 1);
  REQUIRE(r.snapshots.size() == 1);
  const auto& s = r.snapshots[0];
  REQUIRE(s.size() == 4);
  CHECK(s[0].delta_weight == 1.0);
  CHECK(s[1].delta_weight == 0.0);
  CHECK(s[2].delta_weight == -1.0);
  CHECK(s[2].kind == EventKind::kDeletion);
  CHECK(s[3].delta_weight == 1.0);
  CHECK(s[3].kind == EventKind::kInsertion);

  IdMap weighted_ids;
  const auto bad = parse("1\ta\tb\t1\t0\n2\ta\tb\t-3\t0\n");
  try {
    ingest(bad, weighted_ids, IngestOptions{});
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("ground truth counts") {
  const auto records = parse(path_log());
  CHECK(count_anomalous_edges(records, SnapshotPlan::fixed_event_count(5)) == std::vector<std::size_t>{0, 1});
  const auto truth = GroundTruth::from_counts({0, 3, 1, 5}, 2);
  CHECK(truth.flags == std::vector<bool>{false, true, false, true});
  CHECK_THROWS_AS(GroundTruth::from_counts({1}, 0), InvalidInputError);
}

TEST_CASE("select_seeds") {
  SUBCASE("all nodes") {
    const std::vector<WeightedEdge> e{{0, 1, 1.0}, {1, 2, 1.0}};
    const auto g = DynamicGraph::from_initial_edges(e);
    CHECK(select_seeds(g, SeedPolicy::all_nodes()) == std::vector<NodeId>{0, 1, 2});
  }
  SUBCASE("high degree") {
    // Degrees 0:5, 1:2, 2:5 via a directed graph with explicit out-weights.
    const std::vector<WeightedEdge> e{{0, 1, 5.0}, {1, 2, 2.0}, {2, 0, 5.0}};
    const auto g = DynamicGraph::from_initial_edges(e, Orientation::kDirected);
    CHECK(select_seeds(g, SeedPolicy::high_degree(2)) == std::vector<NodeId>{0, 2});
  }
  SUBCASE("ties by ascending id") {
    const std::vector<WeightedEdge> e{{0, 1, 1.0}, {2, 3, 1.0}};
    const auto g = DynamicGraph::from_initial_edges(e);
    CHECK(select_seeds(g, SeedPolicy::high_degree(2)) == std::vector<NodeId>{0, 1});
    CHECK(select_seeds(g, SeedPolicy::high_degree(10)).size() == 4);
    CHECK_THROWS_AS(SeedPolicy::high_degree(0), InvalidInputError);
  }
  SUBCASE("explicit") {
    const std::vector<WeightedEdge> e{{0, 1, 1.0}};
    const auto g = DynamicGraph::from_initial_edges(e);
    std::size_t skipped = 0;
    CHECK(select_seeds(g, SeedPolicy::explicit_list({1, 7, 1}), &skipped) == std::vector<NodeId>{1});
    CHECK(skipped == 1);
  }
  SUBCASE("parse") {
    IdMap ids;
    CHECK(SeedPolicy::parse("all", ids).mode == SeedPolicy::Mode::kAllNodes);
    CHECK(SeedPolicy::parse("high-degree:12", ids).top_k == 12);
    CHECK_THROWS_AS(SeedPolicy::parse("high-degree:x", ids), InvalidInputError);
    CHECK_THROWS_AS(SeedPolicy::parse("some", ids), InvalidInputError);
  }
}

TEST_CASE("evaluate") {
  SUBCASE("F1 from reported precision and recall") {
    CHECK(f1_score(0.7200, 0.6228) == doctest::Approx(0.6679).epsilon(1e-4));
    CHECK(f1_score(0.4960, 0.4291) == doctest::Approx(0.4601).epsilon(1e-4));
    CHECK(f1_score(0.0, 0.0) == 0.0);
  }
  SUBCASE("k'=250 with 180 hits out of 289") {
    std::vector<double> scores(1207, 0.0);
    std::vector<bool> truth(1207, false);
    for (std::size_t i = 0; i < 250; ++i) scores[i] = 1000.0 - static_cast<double>(i);
    for (std::size_t i = 0; i < 180; ++i) truth[i] = true;
    for (std::size_t i = 0; i < 109; ++i) truth[600 + i] = true;
    const std::vector<std::size_t> ks{250};
    const auto report = evaluate(scores, truth, ks);
    REQUIRE(report.rows.size() == 1);
    const auto& row = report.rows[0];
    CHECK(row.hits == 180);
    CHECK(row.precision == doctest::Approx(0.72).epsilon(1e-12));
    CHECK(row.recall == doctest::Approx(180.0 / 289.0).epsilon(1e-12));
    CHECK(row.recall == doctest::Approx(0.62283).epsilon(1e-5));
    CHECK(row.f1 == doctest::Approx(0.66790).epsilon(1e-5));
  }
  SUBCASE("perfect ranking") {
    std::vector<double> scores{0.1, 5.0, 0.2, 4.0, 3.0};
    std::vector<bool> truth{false, true, false, true, true};
    const std::vector<std::size_t> ks{3};
    const auto row = evaluate(scores, truth, ks).rows.at(0);
    CHECK(row.precision == 1.0);
    CHECK(row.recall == 1.0);
    CHECK(row.f1 == 1.0);
  }
  SUBCASE("rows are consistent") {
    std::mt19937_64 rng(2);
    std::vector<double> scores(400);
    std::vector<bool> truth(400);
    for (std::size_t i = 0; i < 400; ++i) {
      scores[i] = static_cast<double>(rng() % 1000);
      truth[i] = rng() % 4 == 0;
    }
    const auto ks = default_k_list();
    const auto report = evaluate(scores, truth, ks);
    CHECK(report.rows.size() == 16);
    CHECK(report.at(250) != nullptr);
    for (const auto& r : report.rows) {
      const double pr = r.precision + r.recall;
      CHECK(std::abs(r.f1 - (pr > 0 ? 2 * r.precision * r.recall / pr : 0.0)) <= 1e-9);
    }
  }
  SUBCASE("k lists") {
    CHECK(default_k_list().front() == 50);
    CHECK(default_k_list().back() == 800);
    CHECK(parse_k_list("50,250,100") == std::vector<std::size_t>{50, 250, 100});
    CHECK(parse_k_list("50:200:50") == std::vector<std::size_t>{50, 100, 150, 200});
    CHECK_THROWS_AS(parse_k_list("0"), InvalidInputError);
    CHECK_THROWS_AS(parse_k_list("5:10"), InvalidInputError);
    const std::vector<double> s{1, 2};
    CHECK_THROWS_AS(evaluate(s, std::vector<bool>{true}, default_k_list()), InvalidInputError);
  }
}

TEST_CASE("synthetic generator") {
  SUBCASE("one 10-clique at snapshot 10") {
    SynthConfig cfg{.nodes = 100, .snapshots = 20, .background_rate = 30};
    cfg.injections = {{10, 10, 1.0}};
    const auto records = generate_synthetic(cfg);
    std::size_t labelled = 0;
    std::set<std::string> members;
    for (const auto& r : records) {
      if (!r.anomalous) continue;
      CHECK(r.time == 10.0);
      members.insert(r.src);
      members.insert(r.dst);
      ++labelled;
    }
    CHECK(labelled == 45);
    CHECK(members.size() == 10);

    IdMap ids;
    IngestOptions opts{.plan = SnapshotPlan::timestamp_window(1.0, 1)};
    const auto r = ingest(records, ids, opts);
    CHECK(r.snapshots.size() == 20);
    CHECK(r.truth.anomaly_count() == 1);
    CHECK(r.truth.flags[9]);
    CHECK(r.truth.anomalous_edges[9] == 45);
  }
  SUBCASE("no injections means no anomalies") {
    SynthConfig cfg{.nodes = 50, .snapshots = 10, .background_rate = 20};
    for (const auto& r : generate_synthetic(cfg)) CHECK_FALSE(r.anomalous);
  }
  SUBCASE("deterministic under a seed") {
    SynthConfig cfg{.nodes = 80, .snapshots = 15, .background_rate = 25, .seed = 99};
    cfg.injections = {{3, 6, 2.0}};
    std::ostringstream a, b, c;
    write_event_log(a, generate_synthetic(cfg));
    write_event_log(b, generate_synthetic(cfg));
    cfg.seed = 100;
    write_event_log(c, generate_synthetic(cfg));
    CHECK(a.str() == b.str());
    CHECK(a.str() != c.str());
  }
  SUBCASE("streams are valid") {
    SynthConfig cfg{.nodes = 60, .snapshots = 30, .background_rate = 40};
    cfg.injections = {{5, 8, 1.0}, {5, 4, 3.0}};
    IdMap ids;
    IngestOptions opts{.plan = SnapshotPlan::timestamp_window(1.0, 1)};
    CHECK_NOTHROW(ingest(generate_synthetic(cfg), ids, opts));
  }
  SUBCASE("bad configurations") {
    SynthConfig cfg{.nodes = 10, .snapshots = 5};
    cfg.injections = {{2, 11, 1.0}};
    CHECK_THROWS_AS(generate_synthetic(cfg), InvalidInputError);
    cfg.injections = {{6, 3, 1.0}};
    CHECK_THROWS_AS(generate_synthetic(cfg), InvalidInputError);
    CHECK(parse_injection("7:20").snapshot == 7);
    CHECK(parse_injection("7:20:2.5").weight == 2.5);
    CHECK_THROWS_AS(parse_injection("7"), InvalidInputError);
    CHECK_THROWS_AS(parse_injection("7:x"), InvalidInputError);
  }
}

TEST_CASE("parallel_for") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  CHECK_THROWS_AS(parallel_for(100, 4,
                               [](std::size_t i) {
                                 if (i == 42) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
  parallel_for(0, 4, [](std::size_t) { FAIL("no work expected"); });
}

TEST_CASE("runner") {
  QuietLogs quiet;
  SUBCASE("an empty snapshot scores zero") {
    const std::vector<WeightedEdge> e{{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}};
    const auto g = DynamicGraph::from_initial_edges(e);
    const std::vector<std::vector<EdgeEvent>> snaps{{}, {}};
    const auto series = run(g, snaps, RunConfig{});
    REQUIRE(series.snapshots.size() == 2);
    CHECK(series.snapshots[0].score == 0.0);
    CHECK(series.snapshots[1].score == 0.0);
    CHECK(series.snapshots[0].seed_count == 3);
  }
  SUBCASE("single seed with a singleton subgraph equals the node score") {
    const std::vector<WeightedEdge> e{{0, 1, 1.0}, {1, 2, 1.0}};
    const auto g = DynamicGraph::from_initial_edges(e);
    RunConfig cfg;
    cfg.epsilon = 1e-4;
    cfg.scoring = {.strategy = SubgraphStrategy::singleton(), .phi = Aggregator::kSum, .f = Aggregator::kMean};
    cfg.seeds = SeedPolicy::explicit_list({1});
    StreamScorer scorer(g, cfg, 4);
    const std::vector<EdgeEvent> batch{{.src = 2, .dst = 3, .delta_weight = 1.0}};
    const auto before = scorer.embeddings()[1];
    const auto s = scorer.step(batch);
    const double expected = node_score(before, scorer.embeddings()[1], Norm::kL2);
    CHECK(expected > 0.0);
    CHECK(s.score == expected);
    CHECK(scorer.last_delta()[1] == expected);
    // The new node 3 is scored against the zero vector.
    CHECK(scorer.last_delta()[3] ==
          doctest::Approx(node_score(Embedding::zeros(1024, 1), scorer.embeddings()[3], Norm::kL2)));
  }
  SUBCASE("states satisfy the residual bound after every step") {
    SynthConfig sc{.nodes = 60, .snapshots = 6, .background_rate = 30};
    sc.injections = {{3, 6, 2.0}};
    IdMap ids;
    const auto data = ingest(generate_synthetic(sc), ids, IngestOptions{.plan = SnapshotPlan::timestamp_window(1.0, 1)});
    RunConfig cfg;
    cfg.epsilon = 1e-3;
    StreamScorer scorer(data.initial, cfg, ids.size());
    for (const auto& batch : data.snapshots) {
      scorer.step(batch);
      REQUIRE(scorer.states().size() == scorer.graph().node_count());
      for (const auto& st : scorer.states()) REQUIRE(residual_bound_excess(st, scorer.graph()) <= 0.0);
    }
  }
  SUBCASE("threads and labels do not change scores") {
    SynthConfig sc{.nodes = 120, .snapshots = 12, .background_rate = 40};
    sc.injections = {{6, 10, 3.0}};
    const auto records = generate_synthetic(sc);
    auto flipped = records;
    for (auto& r : flipped) r.anomalous = !r.anomalous;
    auto score_with = [](const std::vector<LogRecord>& recs, std::size_t threads) {
      IdMap ids;
      const auto data = ingest(recs, ids, IngestOptions{.plan = SnapshotPlan::timestamp_window(1.0, 1)});
      RunConfig cfg;
      cfg.threads = threads;
      return run(data.initial, data.snapshots, cfg).scores();
    };
    const auto base = score_with(records, 1);
    CHECK(score_with(records, 4) == base);
    CHECK(score_with(flipped, 3) == base);
    for (double s : base) CHECK((std::isfinite(s) && s >= 0.0));
  }
}

TEST_CASE("scores CSV round trip") {
  ScoreSeries series;
  series.snapshots = {{1, 0.1, 5, 2}, {2, 1.0 / 3.0, 5, 2}, {3, 7.25, 5, 2}};
  const std::vector<bool> truth{false, true, false};
  const nlohmann::json config = {{"alpha", 0.15}};
  std::stringstream buf;
  write_scores_csv(buf, series, truth, config);
  const auto text = buf.str();
  CHECK(text.rfind("# config: {\"alpha\":0.15}\nsnapshot,score,rank,is_ground_truth_anomaly\n", 0) == 0);
  CHECK(text.find("3,7.25,1,0\n") != std::string::npos);
  const auto table = read_scores_csv(buf);
  CHECK(table.scores == series.scores());
  CHECK(table.truth == truth);
  CHECK(table.snapshots == std::vector<std::size_t>{1, 2, 3});
  CHECK(table.config == config);

  std::stringstream bad("snapshot,score,rank,is_ground_truth_anomaly\n1,x,1,0\n");
  CHECK_THROWS_AS(read_scores_csv(bad), ParseError);
}

TEST_CASE("subgraph JSON lines") {
  IdMap ids;
  for (const char* name : {"h0", "h1", "h2"}) ids.intern(name);
  SeedSubgraph sub{.seed = 1, .nodes = {0, 1, 2}};
  std::ostringstream out;
  write_subgraph_line(out, 4, sub, SubgraphStrategy::hybrid_tc(), ids);
  const auto j = nlohmann::json::parse(out.str());
  CHECK(j["snapshot"] == 4);
  CHECK(j["seed"] == "h1");
  CHECK(j["strategy"] == "hybrid-tc");
  CHECK(j["nodes"].size() == 3);
}
