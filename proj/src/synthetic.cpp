#include "pprwatch/synthetic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <unordered_map>

#include "pprwatch/errors.hpp"

namespace pprwatch {

Injection parse_injection(std::string_view text) {
  auto field = [&](std::string_view part, auto& out) {
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), out);
    if (ec != std::errc{} || ptr != part.data() + part.size()) {
      throw InvalidInputError("bad injection '" + std::string(text) + "' (want t:size[:weight])");
    }
  };
  Injection inj;
  const auto a = text.find(':');
  if (a == std::string_view::npos) throw InvalidInputError("bad injection '" + std::string(text) + "'");
  const auto b = text.find(':', a + 1);
  field(text.substr(0, a), inj.snapshot);
  field(text.substr(a + 1, b == std::string_view::npos ? std::string_view::npos : b - a - 1),
        inj.clique_size);
  if (b != std::string_view::npos) field(text.substr(b + 1), inj.weight);
  return inj;
}

namespace {

using Rng = std::mt19937_64;

std::uint64_t edge_key(std::size_t a, std::size_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

// Edge set with O(1) random pick and removal.
class EdgePool {
 public:
  bool contains(std::uint64_t key) const { return index_.contains(key); }
  double weight(std::uint64_t key) const { return weight_.at(index_.at(key)); }

  void add(std::uint64_t key, double w) {
    if (auto it = index_.find(key); it != index_.end()) {
      weight_[it->second] += w;
      return;
    }
    index_.emplace(key, keys_.size());
    keys_.push_back(key);
    weight_.push_back(w);
  }

  void remove(std::uint64_t key) {
    const auto pos = index_.at(key);
    index_[keys_.back()] = pos;
    keys_[pos] = keys_.back();
    weight_[pos] = weight_.back();
    keys_.pop_back();
    weight_.pop_back();
    index_.erase(key);
  }

  std::size_t size() const { return keys_.size(); }
  std::uint64_t key_at(std::size_t i) const { return keys_[i]; }
  double weight_at(std::size_t i) const { return weight_[i]; }
  std::uint64_t pick(Rng& rng) const {
    return keys_[std::uniform_int_distribution<std::size_t>(0, keys_.size() - 1)(rng)];
  }

 private:
  std::unordered_map<std::uint64_t, std::size_t> index_;
  std::vector<std::uint64_t> keys_;
  std::vector<double> weight_;
};

LogRecord record(double time, std::uint64_t key, double delta, bool anomalous) {
  LogRecord r;
  r.time = time;
  r.src = std::to_string(key >> 32);
  r.dst = std::to_string(key & 0xffffffffULL);
  r.delta_weight = delta;
  r.anomalous = anomalous;
  return r;
}

}  // namespace

std::vector<LogRecord> generate_synthetic(const SynthConfig& config) {
  const std::size_t n = config.nodes;
  if (n < 2) throw InvalidInputError("synthetic graph needs at least 2 nodes");
  if (config.deletion_fraction < 0.0 || config.update_fraction < 0.0 ||
      config.deletion_fraction + config.update_fraction > 1.0) {
    throw InvalidInputError("deletion and update fractions must be non-negative and sum to <= 1");
  }
  std::multimap<std::size_t, Injection> by_snapshot;
  for (const auto& inj : config.injections) {
    if (inj.clique_size > n) {
      throw InvalidInputError("clique of " + std::to_string(inj.clique_size) + " exceeds " +
                              std::to_string(n) + " nodes");
    }
    if (inj.clique_size < 2) throw InvalidInputError("clique size must be >= 2");
    if (inj.snapshot < 1 || inj.snapshot > config.snapshots) {
      throw InvalidInputError("injection snapshot " + std::to_string(inj.snapshot) +
                              " outside 1.." + std::to_string(config.snapshots));
    }
    if (!(inj.weight > 0.0)) throw InvalidInputError("injection weight must be positive");
    by_snapshot.emplace(inj.snapshot, inj);
  }

  Rng rng(config.seed);
  // Popularity follows a random permutation of ranks so hubs are not the low ids.
  std::vector<std::size_t> rank(n);
  std::iota(rank.begin(), rank.end(), std::size_t{0});
  std::shuffle(rank.begin(), rank.end(), rng);
  std::vector<double> popularity(n);
  for (std::size_t i = 0; i < n; ++i) {
    popularity[i] = std::pow(static_cast<double>(rank[i] + 1), -config.skew);
  }
  std::discrete_distribution<std::size_t> pick_node(popularity.begin(), popularity.end());
  std::uniform_int_distribution<int> pick_weight(1, 3);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  auto random_pair = [&]() {
    while (true) {
      const auto a = pick_node(rng);
      const auto b = pick_node(rng);
      if (a != b) return edge_key(a, b);
    }
  };

  EdgePool pool;

  // Initial graph: each node after the first attaches to an earlier one,
  // half the time to an endpoint of an existing tree edge (preferential).
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> endpoints;
  for (std::size_t i = 1; i < n; ++i) {
    std::size_t parent = order[std::uniform_int_distribution<std::size_t>(0, i - 1)(rng)];
    if (!endpoints.empty() && coin(rng) < 0.5) {
      parent = endpoints[std::uniform_int_distribution<std::size_t>(0, endpoints.size() - 1)(rng)];
    }
    endpoints.push_back(parent);
    endpoints.push_back(order[i]);
    pool.add(edge_key(order[i], parent), pick_weight(rng));
  }
  const std::size_t target = config.initial_edges == 0 ? 2 * n : config.initial_edges;
  const std::size_t max_edges = n * (n - 1) / 2;
  while (pool.size() < std::min(target, max_edges)) {
    const auto key = random_pair();
    if (!pool.contains(key)) pool.add(key, pick_weight(rng));
  }

  // One background event against the pool; returns (key, delta).
  auto background = [&]() -> std::pair<std::uint64_t, double> {
    const double u = coin(rng);
    if (u < config.deletion_fraction && pool.size() > 0) {
      const auto key = pool.pick(rng);
      const double w = pool.weight(key);
      pool.remove(key);
      return {key, -w};
    }
    const double w = pick_weight(rng);
    if (u < config.deletion_fraction + config.update_fraction && pool.size() > 0) {
      const auto key = pool.pick(rng);
      pool.add(key, w);
      return {key, w};
    }
    auto key = random_pair();
    for (int tries = 0; pool.contains(key) && tries < 16; ++tries) key = random_pair();
    pool.add(key, w);
    return {key, w};
  };

  // Unrecorded background so time 0 already looks like the steady state.
  for (std::size_t i = 0; i < config.burn_in * config.background_rate; ++i) background();

  std::vector<LogRecord> out;
  std::vector<std::pair<std::uint64_t, double>> initial;
  for (std::size_t i = 0; i < pool.size(); ++i) initial.emplace_back(pool.key_at(i), pool.weight_at(i));
  std::sort(initial.begin(), initial.end());
  for (const auto& [key, w] : initial) out.push_back(record(0.0, key, w, false));

  enum class Slot { kBackground, kClique };
  for (std::size_t t = 1; t <= config.snapshots; ++t) {
    const double time = static_cast<double>(t);
    std::vector<std::uint64_t> clique_edges;
    std::vector<double> clique_weights;
    for (auto [it, end] = by_snapshot.equal_range(t); it != end; ++it) {
      std::vector<std::size_t> members(n);
      std::iota(members.begin(), members.end(), std::size_t{0});
      std::shuffle(members.begin(), members.end(), rng);
      members.resize(it->second.clique_size);
      std::sort(members.begin(), members.end());
      for (std::size_t a = 0; a < members.size(); ++a) {
        for (std::size_t b = a + 1; b < members.size(); ++b) {
          clique_edges.push_back(edge_key(members[a], members[b]));
          clique_weights.push_back(it->second.weight);
        }
      }
    }
    std::vector<Slot> slots(config.background_rate, Slot::kBackground);
    slots.insert(slots.end(), clique_edges.size(), Slot::kClique);
    std::shuffle(slots.begin(), slots.end(), rng);

    std::size_t next_clique = 0;
    for (Slot slot : slots) {
      if (slot == Slot::kClique) {
        const auto key = clique_edges[next_clique];
        const double w = clique_weights[next_clique++];
        pool.add(key, w);
        out.push_back(record(time, key, w, true));
        continue;
      }
      const auto [key, delta] = background();
      out.push_back(record(time, key, delta, false));
    }
  }
  return out;
}

}  // namespace pprwatch
