#include "pprwatch/seeds.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>

#include "pprwatch/errors.hpp"
#include "pprwatch/log.hpp"

namespace pprwatch {

SeedPolicy SeedPolicy::high_degree(std::size_t top_k) {
  if (top_k == 0) throw InvalidInputError("high-degree seed count must be >= 1");
  SeedPolicy policy;
  policy.mode = Mode::kHighDegree;
  policy.top_k = top_k;
  return policy;
}

SeedPolicy SeedPolicy::explicit_list(std::vector<NodeId> seeds) {
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
  SeedPolicy policy;
  policy.mode = Mode::kExplicit;
  policy.explicit_seeds = std::move(seeds);
  return policy;
}

SeedPolicy SeedPolicy::parse(std::string_view text, const IdMap& ids) {
  if (text == "all") return all_nodes();
  constexpr std::string_view kHigh = "high-degree:";
  constexpr std::string_view kFile = "file:";
  if (text.starts_with(kHigh)) {
    const auto num = text.substr(kHigh.size());
    std::size_t k = 0;
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), k);
    if (ec != std::errc{} || ptr != num.data() + num.size()) {
      throw InvalidInputError("bad seed count in '" + std::string(text) + "'");
    }
    return high_degree(k);
  }
  if (text.starts_with(kFile)) {
    const std::string path(text.substr(kFile.size()));
    std::ifstream in(path);
    if (!in) throw InvalidInputError("cannot open seed file " + path);
    std::vector<NodeId> seeds;
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line.front() == '#') continue;
      if (auto id = ids.find(line)) {
        seeds.push_back(*id);
      } else {
        log_warning("seed '" + line + "' is not in the graph, skipped");
      }
    }
    return explicit_list(std::move(seeds));
  }
  throw InvalidInputError("unknown seed policy '" + std::string(text) + "'");
}

std::string SeedPolicy::describe() const {
  switch (mode) {
    case Mode::kAllNodes:
      return "all";
    case Mode::kHighDegree:
      return "high-degree:" + std::to_string(top_k);
    case Mode::kExplicit:
      return "explicit(" + std::to_string(explicit_seeds.size()) + ")";
  }
  return "?";
}

std::vector<NodeId> select_seeds(const DynamicGraph& g, const SeedPolicy& policy,
                                 std::size_t* skipped) {
  const auto n = static_cast<NodeId>(g.node_count());
  if (skipped) *skipped = 0;
  std::vector<NodeId> out;
  switch (policy.mode) {
    case SeedPolicy::Mode::kAllNodes:
      out.resize(n);
      std::iota(out.begin(), out.end(), NodeId{0});
      break;
    case SeedPolicy::Mode::kHighDegree: {
      out.resize(n);
      std::iota(out.begin(), out.end(), NodeId{0});
      const auto k = std::min<std::size_t>(policy.top_k, n);
      std::partial_sort(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(k), out.end(),
                        [&](NodeId a, NodeId b) {
                          const double da = g.degree_sum(a);
                          const double db = g.degree_sum(b);
                          return da != db ? da > db : a < b;
                        });
      out.resize(k);
      std::sort(out.begin(), out.end());
      break;
    }
    case SeedPolicy::Mode::kExplicit:
      for (NodeId s : policy.explicit_seeds) {
        if (s < n) {
          out.push_back(s);
        } else if (skipped) {
          ++*skipped;
        }
      }
      break;
  }
  return out;
}

}  // namespace pprwatch
