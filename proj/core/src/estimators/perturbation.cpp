#include "rbeig/estimators/perturbation.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "rbeig/errors.hpp"
#include "rbeig/estimators/prefactors.hpp"
#include "rbeig/linalg/dense_eig.hpp"
#include "rbeig/linalg/norms.hpp"
#include "rbeig/linalg/power_iteration.hpp"
#include "rbeig/util/csv.hpp"

namespace rbeig {

std::vector<PerturbationRow> perturbation_study(const Matrix& S, const Matrix& T, const std::vector<double>& eps,
                                                double k_N) {
  const Index n = S.rows();
  if (S.cols() != n || T.rows() != n || T.cols() != n) throw DimensionMismatch("S and T must be square and equal");
  const Matrix I = Matrix::Identity(n, n);

  const ExactEigenData ds = exact_eigen_data(S, I);
  const double C_sym = symmetric_prefactor(ds.k, ds.k2, k_N);
  const double lambda_S = 1.0 / ds.k;

  // First-order eigenvector correction on u_S-perp.
  const Matrix Qs = [&] {
    Eigen::HouseholderQR<Matrix> qr(ds.u);
    return Matrix(Matrix(qr.householderQ()).rightCols(n - 1));
  }();
  const Matrix shifted = Qs.transpose() * (S - lambda_S * I) * Qs;
  const Vector u1 = -Qs * shifted.partialPivLu().solve(Qs.transpose() * (T * ds.u));

  std::vector<PerturbationRow> rows;
  rows.reserve(eps.size());
  for (double e : eps) {
    const Matrix A = S + e * T;
    const ExactEigenData d = exact_eigen_data(A, I);
    PerturbationRow r;
    r.eps = e;
    r.C_exact = exact_prefactors(d, k_N).C_k_exact;
    r.C_sym = C_sym;
    r.diff = std::abs(r.C_exact - C_sym);
    r.lambda_drift = std::abs(1.0 / d.k - lambda_S) / (e * e);
    Vector u_lin = ds.u + e * u1;
    Vector u = d.u;
    if (u.dot(u_lin) < 0.0) u = -u;
    r.u_residual = (u - u_lin).norm() / (e * e);
    rows.push_back(r);
  }
  return rows;
}

std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) throw ConfigError("log_grid needs 0 < lo < hi and count >= 2");
  std::vector<double> g(count);
  const double a = std::log10(lo), b = std::log10(hi);
  for (int i = 0; i < count; ++i) g[i] = std::pow(10.0, a + (b - a) * i / (count - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

PerturbationExample four_by_four_example() {
  PerturbationExample ex;
  ex.S = Vector((Vector(4) << 2000.0, 1500.0, 1000.0, 0.02).finished()).asDiagonal();
  Matrix T0 = Matrix::Zero(4, 4);
  for (Index i = 0; i < 4; ++i)
    for (Index j = i + 1; j < 4; ++j) {
      T0(i, j) = 1.0;
      T0(j, i) = -1.0;
    }
  ex.T = (spectral_norm(ex.S) / spectral_norm(T0)) * T0;
  ex.k_N = 50.0;
  return ex;
}

double fit_loglog_slope(const std::vector<PerturbationRow>& rows) {
  const double floor_factor = 1e3 * std::numeric_limits<double>::epsilon();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (const auto& r : rows) {
    if (!(r.diff > floor_factor * r.C_sym) || !(r.eps > 0.0)) continue;
    const double x = std::log(r.eps), y = std::log(r.diff);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) return std::numeric_limits<double>::quiet_NaN();
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

double perturbation_magnitude(const Matrix& A) {
  const double sym = spectral_norm(Matrix(0.5 * (A + A.transpose())));
  const double skew = spectral_norm(Matrix(0.5 * (A - A.transpose())));
  if (sym == 0.0) return std::numeric_limits<double>::infinity();
  return skew / sym;
}

double perturbation_magnitude(const SparseMatrix& A) {
  const SparseMatrix At = A.transpose();
  const double sym = spectral_norm(SparseMatrix(0.5 * (A + At)));
  const double skew = spectral_norm(SparseMatrix(0.5 * (A - At)));
  if (sym == 0.0) return std::numeric_limits<double>::infinity();
  return skew / sym;
}

void write_perturbation_csv(const std::filesystem::path& path, const std::vector<PerturbationRow>& rows) {
  CsvWriter w(path, {"eps", "C_exact", "C_sym", "diff", "lambda_drift", "u_expansion_residual"});
  for (const auto& r : rows) {
    w << r.eps << r.C_exact << r.C_sym << r.diff << r.lambda_drift << r.u_residual;
    w.end_row();
  }
}

}  // namespace rbeig
