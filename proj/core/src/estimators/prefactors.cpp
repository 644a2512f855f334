#include "rbeig/estimators/prefactors.hpp"

#include <cmath>
#include <limits>

#include "rbeig/errors.hpp"
#include "rbeig/estimators/estimators.hpp"
#include "rbeig/linalg/norms.hpp"
#include "rbeig/linalg/numerical_range.hpp"
#include "rbeig/linalg/projectors.hpp"

namespace rbeig {

namespace {

void fill_symmetric(PrefactorReport& r) {
  r.gap_assumption = r.k_exact >= r.k_N && r.k_N > r.k2 && r.k2 > 0.0;
  r.C_k_symmetric = r.gap_assumption ? symmetric_prefactor(r.k_exact, r.k2, r.k_N)
                                     : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

double symmetric_prefactor(double k, double k2, double k_N) {
  if (!(k >= k_N && k_N > k2 && k2 > 0.0)) {
    throw GapViolated("need k >= k_N > k2 > 0, got k = " + std::to_string(k) + ", k_N = " + std::to_string(k_N) +
                      ", k2 = " + std::to_string(k2));
  }
  const double d = k_N - k2;
  return k2 * (k - k2) / (d * d);
}

PrefactorReport exact_prefactors(const ExactEigenData& d, double k_N) {
  const Index n = d.M.rows();
  const Matrix I = Matrix::Identity(n, n);
  const auto proj = make_projectors(d.u, d.u_tilde_star);
  const Matrix& P = proj.P;
  const Matrix& Ps = proj.P_star;

  const Matrix Rd = restricted_pseudo_inverse(P * d.M * P - k_N * I, proj, Side::direct);
  const Matrix Ra = restricted_pseudo_inverse(Ps * d.M.transpose() * Ps - k_N * I, proj, Side::adjoint);
  const Matrix Gd = P * Rd * P;
  const Matrix Ga = Ps * Ra * Ps;

  PrefactorReport r;
  r.k_N = k_N;
  r.k_exact = d.k;
  r.k2 = d.k2;
  r.C_u_exact = spectral_norm(Matrix(Gd * d.A_inv));
  r.C_ustar_exact = spectral_norm(Matrix(d.A_inv.transpose() * Ga));
  r.C_k_exact = spectral_norm(Matrix(Ga.transpose() * (d.M - d.k * I) * Gd * d.A_inv));
  fill_symmetric(r);
  try {
    r.C_k_numrange_bound = numrange_prefactor_bound(d, k_N);
  } catch (const ZeroDistance&) {
    r.C_k_numrange_bound = std::numeric_limits<double>::infinity();
  }
  return r;
}

PrefactorReport exact_prefactors(const Matrix& A, const Matrix& B, double k_N) {
  return exact_prefactors(exact_eigen_data(A, B), k_N);
}

double numrange_prefactor_bound(const ExactEigenData& d, double k_N) {
  const Index n = d.M.rows();
  const Matrix I = Matrix::Identity(n, n);
  const auto proj = make_projectors(d.u, d.u_tilde_star);
  const Matrix Nd = restricted_operator(proj.P * d.M * proj.P, proj, Side::direct);
  const Matrix Na = restricted_operator(proj.P_star * d.M.transpose() * proj.P_star, proj, Side::adjoint);
  const double dist_d = numerical_range_interval(Nd).distance(k_N);
  const double dist_a = numerical_range_interval(Na).distance(k_N);
  if (!(dist_d > 0.0) || !(dist_a > 0.0)) {
    throw ZeroDistance("k_N = " + std::to_string(k_N) + " lies in a restricted numerical range");
  }
  const double num = spectral_norm(Matrix(d.M - d.k * I)) * spectral_norm(Matrix(proj.P * d.A_inv));
  return num / (dist_d * dist_a);
}

double numrange_prefactor_bound(const Matrix& A, const Matrix& B, double k_N) {
  return numrange_prefactor_bound(exact_eigen_data(A, B), k_N);
}

PrefactorReport prefactor_report(const Matrix& A, const Matrix& B, const Vector& u_N, const Vector& u_star_N) {
  const double pairing = u_star_N.dot(A * u_N);
  if (!(std::abs(pairing) > 1e-14)) throw DegeneratePairing("<u*_N, A u_N> vanishes");
  const double k_N = u_star_N.dot(B * u_N) / pairing;
  PrefactorReport r = exact_prefactors(A, B, k_N);
  const ResidualPair res = residuals(A, B, u_N, u_star_N, k_N);
  r.eta_k = eta_k(res.norm_R, res.norm_R_star, pairing);
  return r;
}

}  // namespace rbeig
