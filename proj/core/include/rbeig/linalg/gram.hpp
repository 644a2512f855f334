#pragma once

#include <memory>

#include <Eigen/SparseCholesky>

#include "rbeig/linalg/types.hpp"

namespace rbeig {

enum class GramKind { identity, mass };

/// Inner product <x, y>_X = x^T X y on the high-fidelity space, with the
/// dual norm |r|_{X^{-1}} = sqrt(r^T X^{-1} r) for residuals. X^{-1} is
/// applied through a cached sparse Cholesky factorization.
class GramOperator {
 public:
  /// Euclidean inner product on R^n.
  static GramOperator identity(Index n);
  /// Throws GramFactorizationFailed when X is not SPD.
  static GramOperator from_matrix(SparseMatrix X);

  GramKind kind() const { return kind_; }
  Index size() const { return n_; }
  bool is_identity() const { return kind_ == GramKind::identity; }

  /// X (identity returned explicitly as sparse).
  SparseMatrix matrix() const;

  Vector apply(const Vector& x) const;
  Matrix apply(const Matrix& x) const;
  Vector solve(const Vector& r) const;
  Matrix solve(const Matrix& r) const;

  double inner(const Vector& x, const Vector& y) const;
  double norm(const Vector& x) const;
  double dual_norm(const Vector& r) const;

  /// W = L^T P S where P^T L L^T P = X, so W^T W = S^T X S. unwhiten is
  /// the inverse map.
  Matrix whiten(const Matrix& S) const;
  Matrix unwhiten(const Matrix& W) const;

 private:
  GramKind kind_ = GramKind::identity;
  Index n_ = 0;
  SparseMatrix X_;
  std::shared_ptr<const Eigen::SimplicialLLT<SparseMatrix>> llt_;
};

}  // namespace rbeig
