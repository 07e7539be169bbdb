#include "pprwatch/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pprwatch/errors.hpp"

namespace pprwatch {

namespace {

constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t kBucketStream = 0x62756b6574000001ULL;
constexpr std::uint64_t kSignStream = 0x7369676e00000002ULL;

std::uint64_t node_hash(NodeId node, std::uint64_t hash_seed, std::uint64_t stream) {
  return mix64(mix64(hash_seed ^ stream) ^ static_cast<std::uint64_t>(node));
}

}  // namespace

std::string_view to_string(ValueFn fn) {
  return fn == ValueFn::kLogRaw ? "log-raw" : "log-ratio";
}

std::string_view to_string(Projection projection) {
  return projection == Projection::kIdentity ? "identity" : "hashed";
}

std::string_view to_string(Norm norm) { return norm == Norm::kL1 ? "l1" : "l2"; }

ValueFn parse_value_fn(std::string_view text) {
  if (text == "log-ratio") return ValueFn::kLogRatio;
  if (text == "log-raw") return ValueFn::kLogRaw;
  throw InvalidInputError("unknown embedding value function: " + std::string(text));
}

Projection parse_projection(std::string_view text) {
  if (text == "hashed") return Projection::kHashed;
  if (text == "identity") return Projection::kIdentity;
  throw InvalidInputError("unknown projection: " + std::string(text));
}

Norm parse_norm(std::string_view text) {
  if (text == "l1") return Norm::kL1;
  if (text == "l2") return Norm::kL2;
  throw InvalidInputError("unknown norm: " + std::string(text));
}

double norm_order(Norm norm) { return norm == Norm::kL1 ? 1.0 : 2.0; }

SparsifyConfig SparsifyConfig::for_node_count(std::size_t node_count) {
  const double inv = node_count == 0 ? 1.0 : 1.0 / static_cast<double>(node_count);
  return SparsifyConfig{std::min(inv, 1e-4)};
}

Embedding Embedding::zeros(std::size_t dim, std::uint64_t hash_seed) {
  return Embedding{std::vector<double>(dim, 0.0), hash_seed};
}

std::vector<SparseEntry> sparsify(const SparseVector& p, const SparsifyConfig& cfg) {
  std::vector<SparseEntry> kept;
  for (const auto& [id, value] : p) {
    if (value > cfg.epsilon_c) kept.emplace_back(id, value);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return kept;
}

std::size_t sketch_bucket(NodeId node, std::uint64_t hash_seed, std::size_t dim) {
  return static_cast<std::size_t>(node_hash(node, hash_seed, kBucketStream) % dim);
}

int sketch_sign(NodeId node, std::uint64_t hash_seed) {
  return (node_hash(node, hash_seed, kSignStream) & 1ULL) ? 1 : -1;
}

Embedding reduce_dim(std::span<const SparseEntry> support, const SketchConfig& sketch,
                     const SparsifyConfig& cfg) {
  if (sketch.dim == 0) throw InvalidInputError("embedding dimension must be positive");
  std::vector<SparseEntry> ordered(support.begin(), support.end());
  std::sort(ordered.begin(), ordered.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  Embedding x = Embedding::zeros(sketch.dim, sketch.hash_seed);
  for (const auto& [node, q] : ordered) {
    if (!(q > 0.0)) {
      throw InternalInconsistencyError("non-positive entry for node " + std::to_string(node) +
                                       " reached the sketch");
    }
    const double value =
        sketch.value_fn == ValueFn::kLogRatio ? std::log(q / cfg.epsilon_c) : std::log(q);
    if (sketch.projection == Projection::kIdentity) {
      if (node >= sketch.dim) {
        throw InvalidInputError("identity projection needs node ids below dim");
      }
      x.values[node] += value;
    } else {
      x.values[sketch_bucket(node, sketch.hash_seed, sketch.dim)] +=
          sketch_sign(node, sketch.hash_seed) * value;
    }
  }
  return x;
}

Embedding embed(const SparseVector& p, const SketchConfig& sketch, const SparsifyConfig& cfg) {
  const auto support = sparsify(p, cfg);
  return reduce_dim(support, sketch, cfg);
}

double distance(const Embedding& a, const Embedding& b, double p_norm) {
  if (a.dim() != b.dim()) {
    throw IncompatibleEmbeddingError("embedding dims differ: " + std::to_string(a.dim()) +
                                     " vs " + std::to_string(b.dim()));
  }
  if (a.hash_seed != b.hash_seed) throw IncompatibleEmbeddingError("embedding hash seeds differ");
  if (!(p_norm >= 1.0)) throw InvalidInputError("distance order must be >= 1");

  double total = 0.0;
  if (p_norm == 1.0) {
    for (std::size_t i = 0; i < a.dim(); ++i) total += std::abs(a.values[i] - b.values[i]);
    return total;
  }
  if (p_norm == 2.0) {
    for (std::size_t i = 0; i < a.dim(); ++i) {
      const double d = a.values[i] - b.values[i];
      total += d * d;
    }
    return std::sqrt(total);
  }
  for (std::size_t i = 0; i < a.dim(); ++i) total += std::pow(std::abs(a.values[i] - b.values[i]), p_norm);
  return std::pow(total, 1.0 / p_norm);
}

double distance(const Embedding& a, const Embedding& b, Norm norm) {
  return distance(a, b, norm_order(norm));
}

}  // namespace pprwatch
