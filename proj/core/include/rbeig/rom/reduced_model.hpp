#pragma once

#include <array>
#include <filesystem>
#include <vector>

#include "rbeig/hifi/assembly.hpp"
#include "rbeig/linalg/power_iteration.hpp"
#include "rbeig/rom/basis.hpp"

namespace rbeig {

/// Galerkin projections V^T C V of every affine component.
struct ReducedOperators {
  std::vector<std::array<Matrix, 6>> A;
  std::vector<std::array<Matrix, 4>> B;
  Matrix M_bc;
  Matrix VtV;  ///< Euclidean Gram matrix of the basis

  Index dim() const { return M_bc.rows(); }

  static ReducedOperators project(const AffineOperatorFamily& family, const Matrix& V);
  /// Leading n x n sections, i.e. the operators of the first n basis vectors.
  ReducedOperators truncated(Index n) const;

  /// A_N = V^T A_mu V and B_N = V^T B_mu V from the projected components.
  std::pair<Matrix, Matrix> assemble(const ParameterPoint& mu) const;
};

/// Directory of dense Matrix Market files plus a small JSON manifest.
void save_reduced_operators(const std::filesystem::path& dir, const ReducedOperators& ops);
ReducedOperators load_reduced_operators(const std::filesystem::path& dir);

struct ReducedSolution {
  Vector c;       ///< coordinates of u_N, scaled so that V c = u_N
  Vector c_star;  ///< coordinates of u*_N, scaled so that V c_star = u*_N
  double lambda_N = 0.0;
  double k_N = 0.0;
  Vector u_N;       ///< unit, sign-normalized
  Vector u_star_N;  ///< unit, sign-normalized
  double pairing = 0.0;  ///< c*^T A_N c = <u*_N, A_mu u_N>
  int iterations_direct = 0;
  int iterations_adjoint = 0;
};

/// Inverse power on (A_N, B_N) and on (A_N^T, B_N^T), then
/// k_N = <c*, B_N c> / <c*, A_N c>. Throws ReducedNotConverged when either
/// power loop fails and DegeneratePairing when <c*, A_N c> vanishes.
///
/// With `lift` false the N-sized path is kept free of ambient-size work:
/// u_N and u*_N stay empty, c and c_star are scaled with the Euclidean Gram
/// matrix V^T V and their signs come from the reduced power loop.
ReducedSolution solve_reduced(const ReducedOperators& ops, const Matrix& V, const ParameterPoint& mu,
                              const PowerIterationSettings& settings, bool lift = true);

}  // namespace rbeig
