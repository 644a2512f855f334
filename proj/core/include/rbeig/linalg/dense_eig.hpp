#pragma once

#include <complex>
#include <vector>

#include "rbeig/linalg/types.hpp"

namespace rbeig {

/// One eigentriple of a dense pencil A v = lambda B v.
struct DenseEigenpair {
  std::complex<double> lambda;  ///< infinite when B is singular along `right`
  Eigen::VectorXcd right;       ///< unit 2-norm
  Eigen::VectorXcd left;        ///< unit 2-norm, solves A^T w = lambda B^T w
  bool is_real = false;
};

/// Full spectrum of a dense pencil, sorted by |lambda| ascending. Pairs with
/// |Im lambda| < 1e-10 |lambda| are snapped to the real axis and their
/// eigenvectors are rotated to be real. Requires A or B invertible; throws
/// SolverFailure when the Schur reduction does not converge. Reserved for
/// diagnostic sizes (n <= 5000).
std::vector<DenseEigenpair> dense_eig_oracle(const Matrix& A, const Matrix& B);

/// Exact data entering the prefactor formulas: the real smallest-modulus
/// eigentriple of (A, B) together with M = A^{-1} B and the subdominant
/// eigenvalue of M.
struct ExactEigenData {
  Vector u;             ///< right eigenvector, unit, sign-normalized
  Vector u_star;        ///< left eigenvector, unit, sign-normalized
  Vector u_tilde_star;  ///< A^T u* / |A^T u*|
  double k = 0.0;       ///< dominant eigenvalue of M
  double k2 = 0.0;      ///< real part of the second eigenvalue of M by modulus
  double k_min = 0.0;   ///< real part of the smallest-modulus eigenvalue of M
  Matrix M;             ///< A^{-1} B
  Matrix A_inv;
};

/// Dense eigentriple for the prefactor toolkit. Throws SolverFailure if the
/// smallest-modulus eigenvalue is not real and simple.
ExactEigenData exact_eigen_data(const Matrix& A, const Matrix& B);

}  // namespace rbeig
