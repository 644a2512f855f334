#include "rbeig/linalg/power_iteration.hpp"

#include <Eigen/LU>
#include <Eigen/SparseLU>

#include "rbeig/util/rng.hpp"

namespace rbeig {

void PowerIterationSettings::validate() const {
  if (!(tau_u > 0.0) || !(tau_lambda > 0.0)) {
    throw InputError("power iteration tolerances must be positive");
  }
  if (max_iterations < 1) throw InputError("power iteration needs max_iterations >= 1");
}

void normalize_sign(Vector& v) {
  if (v.size() == 0) return;
  Index imax = 0;
  double amax = std::abs(v[0]);
  for (Index i = 1; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    if (a > amax) {
      amax = a;
      imax = i;
    }
  }
  if (v[imax] < 0.0) v = -v;
}

Vector positive_start_vector(Index n, std::uint64_t seed) {
  Rng rng(seed);
  Vector u(n);
  // Bounded away from zero so every eigen-direction with a positive
  // component is excited.
  for (Index i = 0; i < n; ++i) u[i] = 0.5 + 0.5 * rng.uniform();
  u.normalize();
  return u;
}

namespace {

void check_pencil(Index ar, Index ac, Index br, Index bc) {
  if (ar != ac || br != bc || ar != br) {
    throw DimensionMismatch("pencil matrices must be square and of equal size");
  }
  if (ar == 0) throw DimensionMismatch("empty pencil");
}

using SparseLUSolver = Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>;

std::atomic<long> g_sparse_factorizations{0};

void factorize(SparseLUSolver& lu, const SparseMatrix& A, FactorizationCounter* counter) {
  SparseMatrix a = A;
  a.makeCompressed();
  lu.analyzePattern(a);
  lu.factorize(a);
  g_sparse_factorizations.fetch_add(1, std::memory_order_relaxed);
  if (counter) counter->count.fetch_add(1, std::memory_order_relaxed);
  if (lu.info() != Eigen::Success) {
    throw FactorizationFailed("sparse LU of A failed: " + lu.lastErrorMessage());
  }
}

Eigen::PartialPivLU<Matrix> factorize_dense(const Matrix& A) {
  Eigen::PartialPivLU<Matrix> lu(A);
  const double rc = lu.rcond();
  if (!(rc > 1e-15)) {
    throw FactorizationFailed("dense LU of A is singular (rcond = " + std::to_string(rc) + ")");
  }
  return lu;
}

}  // namespace

PowerResult inverse_power(const SparseMatrix& A, const SparseMatrix& B,
                          const PowerIterationSettings& settings,
                          FactorizationCounter* counter) {
  check_pencil(A.rows(), A.cols(), B.rows(), B.cols());
  SparseLUSolver lu;
  factorize(lu, A, counter);
  return inverse_power_loop(
      A.rows(), [&](const Vector& b) -> Vector { return lu.solve(b); },
      [&](const Vector& u) -> Vector { return B * u; }, settings);
}

PowerResult inverse_power(const Matrix& A, const Matrix& B,
                          const PowerIterationSettings& settings) {
  check_pencil(A.rows(), A.cols(), B.rows(), B.cols());
  const auto lu = factorize_dense(A);
  return inverse_power_loop(
      A.rows(), [&](const Vector& b) -> Vector { return lu.solve(b); },
      [&](const Vector& u) -> Vector { return B * u; }, settings);
}

EigenSolution solve_eigenpair(const SparseMatrix& A, const SparseMatrix& B,
                              const PowerIterationSettings& settings,
                              FactorizationCounter* counter) {
  check_pencil(A.rows(), A.cols(), B.rows(), B.cols());
  SparseLUSolver lu;
  factorize(lu, A, counter);
  const SparseMatrix Bt = B.transpose();
  PowerResult direct = inverse_power_loop(
      A.rows(), [&](const Vector& b) -> Vector { return lu.solve(b); },
      [&](const Vector& u) -> Vector { return B * u; }, settings);
  PowerResult adjoint = inverse_power_loop(
      A.rows(), [&](const Vector& b) -> Vector { return lu.transpose().solve(b); },
      [&](const Vector& u) -> Vector { return Bt * u; }, settings);
  EigenSolution out;
  out.u = std::move(direct.u);
  out.u_star = std::move(adjoint.u);
  out.k = direct.k;
  out.lambda = direct.lambda;
  out.iterations_direct = direct.iterations;
  out.iterations_adjoint = adjoint.iterations;
  return out;
}

EigenSolution solve_eigenpair(const Matrix& A, const Matrix& B,
                              const PowerIterationSettings& settings) {
  check_pencil(A.rows(), A.cols(), B.rows(), B.cols());
  const auto lu = factorize_dense(A);
  const Matrix At = A.transpose();
  const auto lut = factorize_dense(At);
  PowerResult direct = inverse_power_loop(
      A.rows(), [&](const Vector& b) -> Vector { return lu.solve(b); },
      [&](const Vector& u) -> Vector { return B * u; }, settings);
  PowerResult adjoint = inverse_power_loop(
      A.rows(), [&](const Vector& b) -> Vector { return lut.solve(b); },
      [&](const Vector& u) -> Vector { return B.transpose() * u; }, settings);
  EigenSolution out;
  out.u = std::move(direct.u);
  out.u_star = std::move(adjoint.u);
  out.k = direct.k;
  out.lambda = direct.lambda;
  out.iterations_direct = direct.iterations;
  out.iterations_adjoint = adjoint.iterations;
  return out;
}

long sparse_factorization_count() { return g_sparse_factorizations.load(); }

}  // namespace rbeig
