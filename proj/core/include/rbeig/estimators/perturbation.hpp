#pragma once

#include <filesystem>
#include <vector>

#include "rbeig/linalg/types.hpp"

namespace rbeig {

/// One row of the A = S + eps T sweep (B = I).
struct PerturbationRow {
  double eps = 0.0;
  double C_exact = 0.0;
  double C_sym = 0.0;
  double diff = 0.0;          ///< |C_exact - C_sym|
  double lambda_drift = 0.0;  ///< |lambda^eps - lambda_S| / eps^2
  double u_residual = 0.0;    ///< |u^eps - (u_S + eps u_1)| / eps^2
};

/// Sweeps eps; C_sym is the closed form evaluated with the eigenvalues of S.
/// u_1 = -(S - lambda_S)^{-1} T u_S restricted to u_S-perp.
std::vector<PerturbationRow> perturbation_study(const Matrix& S, const Matrix& T, const std::vector<double>& eps,
                                                double k_N);

/// `count` log-spaced points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int count);

/// S = diag(2000, 1500, 1000, 0.02) and the +-1 skew pattern scaled to |S|.
struct PerturbationExample {
  Matrix S;
  Matrix T;
  double k_N;
};
PerturbationExample four_by_four_example();

/// Least-squares slope of log(diff) against log(eps). Rows whose diff is
/// below 1e3 * machine epsilon * C_sym are left out; returns NaN with fewer
/// than two usable rows.
double fit_loglog_slope(const std::vector<PerturbationRow>& rows);

/// |(A - A^T)/2| / |(A + A^T)/2|; +inf when the symmetric part vanishes.
double perturbation_magnitude(const Matrix& A);
double perturbation_magnitude(const SparseMatrix& A);

/// Columns: eps, C_exact, C_sym, diff, lambda_drift, u_expansion_residual.
void write_perturbation_csv(const std::filesystem::path& path, const std::vector<PerturbationRow>& rows);

}  // namespace rbeig
