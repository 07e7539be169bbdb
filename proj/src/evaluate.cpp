#include "pprwatch/evaluate.hpp"

#include <algorithm>
#include <charconv>
#include <string>

#include "pprwatch/errors.hpp"
#include "pprwatch/scoring.hpp"

namespace pprwatch {

const EvalRow* EvalReport::at(std::size_t k_prime) const {
  for (const auto& row : rows) {
    if (row.k_prime == k_prime) return &row;
  }
  return nullptr;
}

double f1_score(double precision, double recall) {
  const double denom = precision + recall;
  return denom > 0.0 ? 2.0 * precision * recall / denom : 0.0;
}

std::vector<std::size_t> default_k_list() {
  std::vector<std::size_t> out;
  for (std::size_t k = 50; k <= 800; k += 50) out.push_back(k);
  return out;
}

namespace {

std::size_t parse_size(std::string_view text) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || v == 0) {
    throw InvalidInputError("bad k' value '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

std::vector<std::size_t> parse_k_list(std::string_view text) {
  std::vector<std::size_t> out;
  if (text.find(':') != std::string_view::npos) {
    const auto a = text.find(':');
    const auto b = text.find(':', a + 1);
    if (b == std::string_view::npos) throw InvalidInputError("k' range needs start:stop:step");
    const auto start = parse_size(text.substr(0, a));
    const auto stop = parse_size(text.substr(a + 1, b - a - 1));
    const auto step = parse_size(text.substr(b + 1));
    for (std::size_t k = start; k <= stop; k += step) out.push_back(k);
    return out;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    out.push_back(parse_size(text.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

EvalReport evaluate(std::span<const double> scores, const std::vector<bool>& truth,
                    std::span<const std::size_t> k_list) {
  if (truth.size() != scores.size()) {
    throw InvalidInputError("ground truth covers " + std::to_string(truth.size()) +
                            " snapshots, scores cover " + std::to_string(scores.size()));
  }
  EvalReport report;
  report.snapshot_count = scores.size();
  report.total_anomalies = static_cast<std::size_t>(std::count(truth.begin(), truth.end(), true));

  std::vector<std::size_t> ks(k_list.begin(), k_list.end());
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

  // One full ordering serves every k'.
  const auto order = rank_snapshots(scores, scores.size());
  std::vector<std::size_t> hits_prefix(order.size() + 1, 0);
  for (std::size_t i = 0; i < order.size(); ++i) {
    hits_prefix[i + 1] = hits_prefix[i] + (truth[order[i]] ? 1 : 0);
  }
  for (auto k : ks) {
    if (k == 0) continue;
    const auto effective = std::min(k, order.size());
    EvalRow row;
    row.k_prime = k;
    row.hits = hits_prefix[effective];
    row.precision = effective > 0 ? static_cast<double>(row.hits) / static_cast<double>(effective) : 0.0;
    row.recall = report.total_anomalies > 0
                     ? static_cast<double>(row.hits) / static_cast<double>(report.total_anomalies)
                     : 0.0;
    row.f1 = f1_score(row.precision, row.recall);
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace pprwatch
