#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <string>

#include "rbeig/errors.hpp"
#include "rbeig/linalg/types.hpp"

namespace rbeig {

/// Stopping rule of the inverse power method. Defaults are the relative
/// tolerances used for both the high-fidelity and the reduced solves.
struct PowerIterationSettings {
  double tau_u = 1e-6;
  double tau_lambda = 1e-7;
  int max_iterations = 10000;
  std::uint64_t seed = 0;

  void validate() const;
};

/// One side of an eigensolve: unit eigenvector with the sign convention,
/// smallest-modulus eigenvalue and its reciprocal.
struct PowerResult {
  Vector u;
  double lambda = 0.0;
  double k = 0.0;
  int iterations = 0;
};

/// Direct and adjoint eigenpair of a pencil A u = lambda B u.
struct EigenSolution {
  Vector u;
  Vector u_star;
  double lambda = 0.0;
  double k = 0.0;
  int iterations_direct = 0;
  int iterations_adjoint = 0;
};

/// Counts LU factorizations performed through the sparse entry points.
/// Callers that must prove the absence of high-fidelity work hold one.
struct FactorizationCounter {
  std::atomic<long> count{0};
};

/// Process-wide number of sparse LU factorizations so far.
long sparse_factorization_count();

/// Flips v so that its entry of largest magnitude is positive (first index
/// wins on ties).
void normalize_sign(Vector& v);

/// Deterministic positive unit start vector drawn from `seed`.
Vector positive_start_vector(Index n, std::uint64_t seed);

/// Inverse power loop on an abstract pencil: `solve(b)` returns A^{-1} b and
/// `apply_b(u)` returns B u. The k update is <v_{i+1}, u_i> and the loop
/// stops when both the eigenvector and the eigenvalue relative increments
/// fall under their tolerances.
template <class SolveFn, class ApplyBFn>
PowerResult inverse_power_loop(Index n, SolveFn&& solve, ApplyBFn&& apply_b,
                               const PowerIterationSettings& settings) {
  settings.validate();
  Vector u = positive_start_vector(n, settings.seed);
  double k = 1.0;
  for (int it = 1; it <= settings.max_iterations; ++it) {
    Vector v = solve(apply_b(u));
    const double nv = v.norm();
    if (!(nv > 0.0) || !std::isfinite(nv)) {
      throw NotConverged("inverse power produced a zero or non-finite iterate at iteration " +
                         std::to_string(it));
    }
    const double k_next = v.dot(u);
    v /= nv;
    const double du = (v - u).norm() / u.norm();
    const double dk = std::abs(k_next - k) / std::abs(k);
    u.swap(v);
    k = k_next;
    if (du <= settings.tau_u && dk <= settings.tau_lambda) {
      normalize_sign(u);
      return PowerResult{std::move(u), 1.0 / k, k, it};
    }
  }
  throw NotConverged("inverse power did not converge in " +
                     std::to_string(settings.max_iterations) + " iterations");
}

PowerResult inverse_power(const SparseMatrix& A, const SparseMatrix& B,
                          const PowerIterationSettings& settings,
                          FactorizationCounter* counter = nullptr);

PowerResult inverse_power(const Matrix& A, const Matrix& B,
                          const PowerIterationSettings& settings);

/// Direct and adjoint solves sharing one sparse LU factorization of A.
EigenSolution solve_eigenpair(const SparseMatrix& A, const SparseMatrix& B,
                              const PowerIterationSettings& settings,
                              FactorizationCounter* counter = nullptr);

/// Dense variant used for reduced pencils.
EigenSolution solve_eigenpair(const Matrix& A, const Matrix& B,
                              const PowerIterationSettings& settings);

}  // namespace rbeig
