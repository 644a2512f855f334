#include "rbeig/estimators/estimators.hpp"

#include <cmath>

#include "rbeig/errors.hpp"

namespace rbeig {

ResidualPair residuals(const SparseMatrix& A, const SparseMatrix& B, const Vector& u_N, const Vector& u_star_N,
                       double k_N, const GramOperator& X) {
  if (A.rows() != u_N.size() || A.rows() != u_star_N.size() || B.rows() != A.rows()) {
    throw DimensionMismatch("residual operands have inconsistent sizes");
  }
  ResidualPair r;
  r.R = B * u_N - k_N * (A * u_N);
  r.R_star = B.transpose() * u_star_N - k_N * (A.transpose() * u_star_N);
  r.norm_R = X.dual_norm(r.R);
  r.norm_R_star = X.dual_norm(r.R_star);
  return r;
}

ResidualPair residuals(const Matrix& A, const Matrix& B, const Vector& u_N, const Vector& u_star_N, double k_N) {
  if (A.rows() != u_N.size() || A.rows() != u_star_N.size() || B.rows() != A.rows()) {
    throw DimensionMismatch("residual operands have inconsistent sizes");
  }
  ResidualPair r;
  r.R = B * u_N - k_N * (A * u_N);
  r.R_star = B.transpose() * u_star_N - k_N * (A.transpose() * u_star_N);
  r.norm_R = r.R.norm();
  r.norm_R_star = r.R_star.norm();
  return r;
}

double eta_k(double norm_R, double norm_R_star, double pairing) {
  if (!(std::abs(pairing) > 1e-14)) {
    throw DegeneratePairing("|<u*_N, A u_N>| = " + std::to_string(std::abs(pairing)));
  }
  return norm_R * norm_R_star / std::abs(pairing);
}

double eta_k(const ResidualPair& res, const Vector& u_N, const Vector& u_star_N, const SparseMatrix& A) {
  return eta_k(res.norm_R, res.norm_R_star, u_star_N.dot(A * u_N));
}

double eta_k(const ResidualPair& res, const Vector& u_N, const Vector& u_star_N, const Matrix& A) {
  return eta_k(res.norm_R, res.norm_R_star, u_star_N.dot(A * u_N));
}

OnlineEstimate online_estimate(const ReducedOperators& ops, const ResidualFactorization& factors,
                               const Matrix& V, const ParameterPoint& mu, const PowerIterationSettings& settings,
                               bool lift) {
  OnlineEstimate e;
  e.rb = solve_reduced(ops, V, mu, settings, lift);
  e.norm_R = factors.online_norm(mu, e.rb.c, e.rb.k_N, ResidualSide::direct);
  e.norm_R_star = factors.online_norm(mu, e.rb.c_star, e.rb.k_N, ResidualSide::adjoint);
  e.pairing = e.rb.pairing;
  e.eta_k = eta_k(e.norm_R, e.norm_R_star, e.pairing);
  return e;
}

}  // namespace rbeig
