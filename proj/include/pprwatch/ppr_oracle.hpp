#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "pprwatch/graph_store.hpp"
#include "pprwatch/ppr_engine.hpp"
#include "pprwatch/sparse_vector.hpp"

namespace pprwatch {

// Exact PPR vector or a snapshot copy of an estimate.
using PprVector = SparseVector;

inline constexpr std::size_t kDefaultOracleCap = 2000;

// Column-stochastic walk operator A^T D^{-1}; dangling columns hold a unit
// self-loop.
Eigen::MatrixXd transition_matrix(const DynamicGraph& g);

// Dense solve of (I - (1-alpha) A^T D^{-1}) pi = alpha e_seed. Test oracle:
// throws OracleTooLargeError above `cap` nodes and InternalInconsistencyError
// if the solve residual exceeds 1e-10.
PprVector exact_ppr_dense(const DynamicGraph& g, NodeId seed, double alpha,
                          std::size_t cap = kDefaultOracleCap);

// All exact PPR vectors at once; column u is pi_u.
Eigen::MatrixXd exact_ppr_matrix(const DynamicGraph& g, double alpha,
                                 std::size_t cap = kDefaultOracleCap);

// || pi_seed - (p + Pi r) ||_inf against a matrix from exact_ppr_matrix.
double invariance_error(const PushState& state, const Eigen::MatrixXd& pi_all);

}  // namespace pprwatch
