#pragma once

#include "rbeig/linalg/gram.hpp"
#include "rbeig/linalg/power_iteration.hpp"
#include "rbeig/linalg/types.hpp"
#include "rbeig/residual/residual_factors.hpp"
#include "rbeig/rom/reduced_model.hpp"

namespace rbeig {

/// R_N = (B - k_N A) u_N and R*_N = (B^T - k_N A^T) u*_N with their dual
/// norms |r|_{X^{-1}}.
struct ResidualPair {
  Vector R;
  Vector R_star;
  double norm_R = 0.0;
  double norm_R_star = 0.0;
};

ResidualPair residuals(const SparseMatrix& A, const SparseMatrix& B, const Vector& u_N, const Vector& u_star_N,
                       double k_N, const GramOperator& X);
ResidualPair residuals(const Matrix& A, const Matrix& B, const Vector& u_N, const Vector& u_star_N, double k_N);

/// eta = |R| |R*| / |<u*_N, A u_N>|. Throws DegeneratePairing when the
/// pairing is below 1e-14.
double eta_k(double norm_R, double norm_R_star, double pairing);
double eta_k(const ResidualPair& res, const Vector& u_N, const Vector& u_star_N, const SparseMatrix& A);
double eta_k(const ResidualPair& res, const Vector& u_N, const Vector& u_star_N, const Matrix& A);

/// Reduced solve plus residual norms from the precomputed factors. Nothing
/// of ambient size is touched unless `lift` is set.
struct OnlineEstimate {
  ReducedSolution rb;
  double norm_R = 0.0;
  double norm_R_star = 0.0;
  double pairing = 0.0;  ///< <u*_N, A u_N> = c*^T A_N c
  double eta_k = 0.0;
};

OnlineEstimate online_estimate(const ReducedOperators& ops, const ResidualFactorization& factors,
                               const Matrix& V, const ParameterPoint& mu, const PowerIterationSettings& settings,
                               bool lift = false);

}  // namespace rbeig
