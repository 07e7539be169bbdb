#include "pprwatch/ppr_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pprwatch/errors.hpp"

namespace pprwatch {

namespace {

void check_cap(const DynamicGraph& g, std::size_t cap) {
  if (g.node_count() > cap) {
    throw OracleTooLargeError("dense oracle refuses " + std::to_string(g.node_count()) +
                              " nodes (cap " + std::to_string(cap) + ")");
  }
}

Eigen::MatrixXd system_matrix(const DynamicGraph& g, double alpha) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  return Eigen::MatrixXd::Identity(n, n) - (1.0 - alpha) * transition_matrix(g);
}

}  // namespace

Eigen::MatrixXd transition_matrix(const DynamicGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  Eigen::MatrixXd walk = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index u = 0; u < n; ++u) {
    const auto node = static_cast<NodeId>(u);
    if (g.is_dangling(node)) {
      walk(u, u) = 1.0;
      continue;
    }
    // Recompute the degree from the list so the oracle does not trust the cache.
    double d = 0.0;
    for (const auto& nb : g.neighbors(node)) d += nb.weight;
    for (const auto& nb : g.neighbors(node)) walk(nb.id, u) = nb.weight / d;
  }
  return walk;
}

PprVector exact_ppr_dense(const DynamicGraph& g, NodeId seed, double alpha, std::size_t cap) {
  check_cap(g, cap);
  if (seed >= g.node_count()) throw InvalidInputError("seed outside the graph");
  const auto n = static_cast<Eigen::Index>(g.node_count());
  const Eigen::MatrixXd m = system_matrix(g, alpha);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(seed) = alpha;
  const Eigen::VectorXd pi = m.partialPivLu().solve(rhs);
  const double residual = (m * pi - rhs).lpNorm<Eigen::Infinity>();
  if (!(residual <= 1e-10)) {
    throw InternalInconsistencyError("dense PPR solve residual " + std::to_string(residual));
  }
  PprVector out;
  for (Eigen::Index i = 0; i < n; ++i) out.set(static_cast<NodeId>(i), pi(i));
  return out;
}

Eigen::MatrixXd exact_ppr_matrix(const DynamicGraph& g, double alpha, std::size_t cap) {
  check_cap(g, cap);
  const auto n = static_cast<Eigen::Index>(g.node_count());
  const Eigen::MatrixXd m = system_matrix(g, alpha);
  const Eigen::MatrixXd rhs = alpha * Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd pi = m.partialPivLu().solve(rhs);
  const double residual = (m * pi - rhs).lpNorm<Eigen::Infinity>();
  if (!(residual <= 1e-10)) {
    throw InternalInconsistencyError("dense PPR solve residual " + std::to_string(residual));
  }
  return pi;
}

double invariance_error(const PushState& state, const Eigen::MatrixXd& pi_all) {
  const auto n = pi_all.rows();
  Eigen::VectorXd rebuilt = Eigen::VectorXd::Zero(n);
  for (const auto& [u, pu] : state.p) {
    if (static_cast<Eigen::Index>(u) >= n) return std::numeric_limits<double>::infinity();
    rebuilt(u) += pu;
  }
  for (const auto& [u, ru] : state.r) {
    if (static_cast<Eigen::Index>(u) >= n) return std::numeric_limits<double>::infinity();
    rebuilt += ru * pi_all.col(u);
  }
  return (pi_all.col(state.seed) - rebuilt).lpNorm<Eigen::Infinity>();
}

}  // namespace pprwatch
