#pragma once

#include "rbeig/linalg/dense_eig.hpp"
#include "rbeig/linalg/types.hpp"

namespace rbeig {

/// Prefactors of the three a posteriori bounds at one k_N, evaluated with
/// the exact eigentriple (diagnostic sizes only).
struct PrefactorReport {
  double C_k_exact = 0.0;
  double C_u_exact = 0.0;
  double C_ustar_exact = 0.0;
  double C_k_symmetric = 0.0;  ///< NaN when the gap assumption fails
  bool gap_assumption = false;  ///< k >= k_N > k2 > 0
  double C_k_numrange_bound = 0.0;  ///< +inf when k_N touches a numerical range
  double eta_k = 0.0;  ///< filled by prefactor_report
  double k_N = 0.0;
  double k_exact = 0.0;
  double k2 = 0.0;
};

/// C_u = |P (PMP - k_N)^+ P A^{-1}|,
/// C_u* = |A^{-T} P* (P* M^T P* - k_N)^+ P*|,
/// C_k = |[P* (P* M^T P* - k_N)^+ P*]^T (M - k) P (PMP - k_N)^+ P A^{-1}|,
/// with M = A^{-1} B. Throws SpectrumCollision or SolverFailure.
PrefactorReport exact_prefactors(const Matrix& A, const Matrix& B, double k_N);
PrefactorReport exact_prefactors(const ExactEigenData& exact, double k_N);

/// k2 (k - k2) / (k_N - k2)^2. Throws GapViolated unless k >= k_N > k2 > 0.
double symmetric_prefactor(double k, double k2, double k_N);

/// |M - k| |P A^{-1}| / (dist(k_N, Num(PMP on u~*-perp)) dist(k_N, Num(P* M^T P* on u-perp))).
/// Throws ZeroDistance when k_N lies in either numerical range.
double numrange_prefactor_bound(const Matrix& A, const Matrix& B, double k_N);
double numrange_prefactor_bound(const ExactEigenData& exact, double k_N);

/// Everything above for an approximate triple (u_N, u*_N) with the
/// Rayleigh-type k_N = <u*_N, B u_N> / <u*_N, A u_N>. The numerical-range
/// bound is +inf instead of throwing.
PrefactorReport prefactor_report(const Matrix& A, const Matrix& B, const Vector& u_N, const Vector& u_star_N);

}  // namespace rbeig
