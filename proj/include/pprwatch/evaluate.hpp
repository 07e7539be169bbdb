#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace pprwatch {

struct EvalRow {
  std::size_t k_prime = 0;  // as requested
  std::size_t hits = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct EvalReport {
  std::vector<EvalRow> rows;
  std::size_t total_anomalies = 0;
  std::size_t snapshot_count = 0;

  // Row for k' (nullptr when absent).
  const EvalRow* at(std::size_t k_prime) const;
};

inline constexpr std::size_t kHeadlineK = 250;

// 2PR/(P+R), 0 when P+R = 0.
double f1_score(double precision, double recall);

// 50, 100, ..., 800.
std::vector<std::size_t> default_k_list();

// "50,100,250" or "50:800:50" (start:stop:step, inclusive).
std::vector<std::size_t> parse_k_list(std::string_view text);

/// Top-k' evaluation. Precision divides by k' clamped to the number of
/// snapshots; recall by the number of anomalous snapshots (0 if there are
/// none). Duplicate k' values are reported once, in ascending order.
EvalReport evaluate(std::span<const double> scores, const std::vector<bool>& truth,
                    std::span<const std::size_t> k_list);

}  // namespace pprwatch
