#include "pprwatch/scoring.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "pprwatch/errors.hpp"
#include "pprwatch/log.hpp"

namespace pprwatch {

namespace {

// Descending score, then ascending position.
std::vector<std::size_t> order_by_score(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

}  // namespace

std::string_view to_string(Aggregator agg) {
  switch (agg) {
    case Aggregator::kMean:
      return "mean";
    case Aggregator::kSum:
      return "sum";
    case Aggregator::kMax:
      return "max";
    case Aggregator::kMin:
      return "min";
    case Aggregator::kMedian:
      return "median";
  }
  return "unknown";
}

Aggregator parse_aggregator(std::string_view text) {
  if (text == "mean") return Aggregator::kMean;
  if (text == "sum") return Aggregator::kSum;
  if (text == "max") return Aggregator::kMax;
  if (text == "min") return Aggregator::kMin;
  if (text == "median") return Aggregator::kMedian;
  throw InvalidInputError("unknown aggregator: " + std::string(text));
}

double aggregate(std::span<const double> values, Aggregator agg) {
  if (values.empty()) throw InvalidInputError("cannot aggregate an empty set");
  switch (agg) {
    case Aggregator::kSum:
      return std::accumulate(values.begin(), values.end(), 0.0);
    case Aggregator::kMean:
      return std::accumulate(values.begin(), values.end(), 0.0) /
             static_cast<double>(values.size());
    case Aggregator::kMax:
      return *std::max_element(values.begin(), values.end());
    case Aggregator::kMin:
      return *std::min_element(values.begin(), values.end());
    case Aggregator::kMedian: {
      std::vector<double> v(values.begin(), values.end());
      const std::size_t mid = v.size() / 2;
      std::nth_element(v.begin(), v.begin() + mid, v.end());
      const double upper = v[mid];
      if (v.size() % 2 == 1) return upper;
      const double lower = *std::max_element(v.begin(), v.begin() + mid);
      return 0.5 * (lower + upper);
    }
  }
  throw InvalidInputError("unknown aggregator");
}

double node_score(const Embedding& prev, const Embedding& curr, Norm norm) {
  return distance(curr, prev, norm);
}

double subgraph_score(std::span<const double> delta, std::span<const NodeId> nodes, Aggregator phi) {
  if (nodes.empty()) throw InvalidInputError("subgraph has no nodes");
  std::vector<double> values;
  values.reserve(nodes.size());
  for (NodeId u : nodes) values.push_back(u < delta.size() ? delta[u] : 0.0);
  return aggregate(values, phi);
}

double snapshot_score(std::span<const double> sub_scores, Aggregator f) {
  if (sub_scores.empty()) throw InvalidInputError("snapshot has no seeds");
  return aggregate(sub_scores, f);
}

std::vector<std::size_t> rank_snapshots(std::span<const double> scores, std::size_t k_prime) {
  if (k_prime > scores.size()) {
    log_warning("k'=" + std::to_string(k_prime) + " exceeds " + std::to_string(scores.size()) +
                " scored snapshots; clamping");
    k_prime = scores.size();
  }
  auto order = order_by_score(scores);
  order.resize(k_prime);
  return order;
}

std::vector<std::size_t> rank_positions(std::span<const double> scores) {
  const auto order = order_by_score(scores);
  std::vector<std::size_t> rank(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i + 1;
  return rank;
}

std::vector<double> ScoreSeries::scores() const {
  std::vector<double> out;
  out.reserve(snapshots.size());
  for (const auto& s : snapshots) out.push_back(s.score);
  return out;
}

std::vector<std::size_t> ScoreSeries::top(std::size_t k_prime) const {
  const auto all = scores();
  auto positions = rank_snapshots(all, k_prime);
  for (auto& pos : positions) pos = snapshots[pos].snapshot;
  return positions;
}

}  // namespace pprwatch
