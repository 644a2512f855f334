#include "rbeig/linalg/gram.hpp"

#include <cmath>

#include "rbeig/errors.hpp"

namespace rbeig {

GramOperator GramOperator::identity(Index n) {
  GramOperator g;
  g.kind_ = GramKind::identity;
  g.n_ = n;
  return g;
}

GramOperator GramOperator::from_matrix(SparseMatrix X) {
  if (X.rows() != X.cols()) throw DimensionMismatch("Gram matrix must be square");
  GramOperator g;
  g.kind_ = GramKind::mass;
  g.n_ = X.rows();
  X.makeCompressed();
  auto llt = std::make_shared<Eigen::SimplicialLLT<SparseMatrix>>(X);
  if (llt->info() != Eigen::Success) {
    throw GramFactorizationFailed("Cholesky factorization of X failed (not SPD?)");
  }
  g.X_ = std::move(X);
  g.llt_ = std::move(llt);
  return g;
}

SparseMatrix GramOperator::matrix() const {
  if (is_identity()) {
    SparseMatrix I(n_, n_);
    I.setIdentity();
    return I;
  }
  return X_;
}

Vector GramOperator::apply(const Vector& x) const { return is_identity() ? x : Vector(X_ * x); }
Matrix GramOperator::apply(const Matrix& x) const { return is_identity() ? x : Matrix(X_ * x); }
Vector GramOperator::solve(const Vector& r) const { return is_identity() ? r : Vector(llt_->solve(r)); }
Matrix GramOperator::solve(const Matrix& r) const { return is_identity() ? r : Matrix(llt_->solve(r)); }

double GramOperator::inner(const Vector& x, const Vector& y) const {
  return is_identity() ? x.dot(y) : x.dot(X_ * y);
}

double GramOperator::norm(const Vector& x) const { return std::sqrt(std::max(0.0, inner(x, x))); }

double GramOperator::dual_norm(const Vector& r) const {
  if (is_identity()) return r.norm();
  return std::sqrt(std::max(0.0, r.dot(llt_->solve(r))));
}

Matrix GramOperator::whiten(const Matrix& S) const {
  if (is_identity()) return S;
  const Matrix PS = llt_->permutationP() * S;
  return llt_->matrixU() * PS;
}

Matrix GramOperator::unwhiten(const Matrix& W) const {
  if (is_identity()) return W;
  const Matrix Y = llt_->matrixU().solve(W);
  return llt_->permutationPinv() * Y;
}

}  // namespace rbeig
