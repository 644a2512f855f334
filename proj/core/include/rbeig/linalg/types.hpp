#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace rbeig {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Compressed column storage. Triplet assembly goes through
/// setFromTriplets, which sums duplicate (row, col) entries.
using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

using Index = Eigen::Index;

}  // namespace rbeig
