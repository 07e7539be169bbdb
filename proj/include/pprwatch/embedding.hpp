#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "pprwatch/graph_store.hpp"
#include "pprwatch/sparse_vector.hpp"

namespace pprwatch {

// Value written into a sketch bucket for a surviving entry q.
enum class ValueFn {
  kLogRatio,  // ln(q / epsilon_c), positive on the sparsified support
  kLogRaw,    // ln(q)
};

enum class Projection {
  kHashed,    // signed bucket hashing into `dim` slots
  kIdentity,  // slot = node id, sign +1; requires node ids < dim
};

enum class Norm { kL1, kL2 };

std::string_view to_string(ValueFn fn);
std::string_view to_string(Projection projection);
std::string_view to_string(Norm norm);
ValueFn parse_value_fn(std::string_view text);
Projection parse_projection(std::string_view text);
Norm parse_norm(std::string_view text);
double norm_order(Norm norm);

struct SparsifyConfig {
  double epsilon_c = 1e-4;

  // min(1/node_count, 1e-4)
  static SparsifyConfig for_node_count(std::size_t node_count);
};

// Bumped whenever sketch_bucket or sketch_sign change.
inline constexpr int kSketchHashVersion = 1;

struct SketchConfig {
  std::size_t dim = 1024;
  std::uint64_t hash_seed = 1;
  ValueFn value_fn = ValueFn::kLogRatio;
  Projection projection = Projection::kHashed;
};

struct Embedding {
  std::vector<double> values;
  std::uint64_t hash_seed = 0;

  std::size_t dim() const noexcept { return values.size(); }
  static Embedding zeros(std::size_t dim, std::uint64_t hash_seed);
  friend bool operator==(const Embedding&, const Embedding&) = default;
};

// Entries <= epsilon_c dropped (negative transients included); ascending ids.
std::vector<SparseEntry> sparsify(const SparseVector& p, const SparsifyConfig& cfg);

// splitmix64-style avalanche of (node, seed). Bucket and sign use
// independent streams of the same mixer.
std::size_t sketch_bucket(NodeId node, std::uint64_t hash_seed, std::size_t dim);
int sketch_sign(NodeId node, std::uint64_t hash_seed);

/// x[h_dim(i)] += h_sgn(i) * value_fn(p(i)) over the support. Terms are
/// accumulated in ascending node order so the result does not depend on the
/// order of `support`. Throws InternalInconsistencyError for a non-positive
/// entry and InvalidInputError for an identity projection that does not fit.
Embedding reduce_dim(std::span<const SparseEntry> support, const SketchConfig& sketch,
                     const SparsifyConfig& cfg);

// sparsify followed by reduce_dim.
Embedding embed(const SparseVector& p, const SketchConfig& sketch, const SparsifyConfig& cfg);

// (sum |a_i - b_i|^p)^(1/p). Throws IncompatibleEmbeddingError on dim or
// hash seed mismatch and InvalidInputError for p < 1.
double distance(const Embedding& a, const Embedding& b, double p_norm);
double distance(const Embedding& a, const Embedding& b, Norm norm);

}  // namespace pprwatch
