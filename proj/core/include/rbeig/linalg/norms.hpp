#pragma once

#include "rbeig/linalg/types.hpp"

namespace rbeig {

/// Largest singular value (operator 2-norm).
double spectral_norm(const Matrix& T);

/// Operator 2-norm of a sparse matrix by power iteration on T^T T. Stops when
/// the Rayleigh quotient changes by less than `rel_tol` between sweeps.
double spectral_norm(const SparseMatrix& T, double rel_tol = 1e-12, int max_iterations = 20000);

}  // namespace rbeig
