#include "rbeig/linalg/dense_eig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "rbeig/errors.hpp"
#include "rbeig/linalg/power_iteration.hpp"

namespace rbeig {

namespace {

constexpr double kRealSnap = 1e-10;

using cd = std::complex<double>;

bool invertible(const Eigen::PartialPivLU<Matrix>& lu) { return lu.rcond() > 1e-13; }

Eigen::VectorXcd solve_complex(const Eigen::PartialPivLU<Matrix>& lu, const Eigen::VectorXcd& b) {
  Vector re = lu.solve(Vector(b.real()));
  Vector im = lu.solve(Vector(b.imag()));
  Eigen::VectorXcd x(b.size());
  x.real() = re;
  x.imag() = im;
  return x;
}

// Rotates a complex vector whose direction is real up to a phase onto the
// real axis and applies the sign convention.
Eigen::VectorXcd realify(const Eigen::VectorXcd& v) {
  Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  const cd phase = std::abs(v[imax]) > 0 ? v[imax] / std::abs(v[imax]) : cd(1.0);
  Vector r = (v / phase).real();
  r.normalize();
  normalize_sign(r);
  return r.cast<cd>();
}

Eigen::EigenSolver<Matrix> eig(const Matrix& M) {
  Eigen::EigenSolver<Matrix> es(M, true);
  if (es.info() != Eigen::Success) throw SolverFailure("real Schur reduction did not converge");
  return es;
}

// Pairs every eigenvalue of the first list with the closest unused one of
// the second list.
std::vector<Index> match(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  const Index n = a.size();
  std::vector<Index> out(n, -1);
  std::vector<bool> used(n, false);
  for (Index i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    Index jbest = -1;
    for (Index j = 0; j < n; ++j) {
      if (used[j]) continue;
      const double d = std::abs(a[i] - b[j]);
      if (d < best) {
        best = d;
        jbest = j;
      }
    }
    out[i] = jbest;
    used[jbest] = true;
  }
  return out;
}

}  // namespace

std::vector<DenseEigenpair> dense_eig_oracle(const Matrix& A, const Matrix& B) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows()) {
    throw DimensionMismatch("dense_eig_oracle needs square matrices of equal size");
  }
  const Index n = A.rows();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<DenseEigenpair> out(n);

  Eigen::PartialPivLU<Matrix> luA(A);
  if (invertible(luA)) {
    // M = A^{-1} B has eigenvalues k = 1 / lambda; left vectors of the
    // pencil are A^{-T} times eigenvectors of M^T.
    const Matrix M = luA.solve(B);
    const auto es = eig(M);
    const auto est = eig(M.transpose());
    const auto perm = match(es.eigenvalues(), est.eigenvalues());
    const Eigen::PartialPivLU<Matrix> luAt(A.transpose());
    for (Index i = 0; i < n; ++i) {
      const cd k = es.eigenvalues()[i];
      out[i].lambda = std::abs(k) == 0.0 ? cd(inf, 0.0) : 1.0 / k;
      out[i].right = es.eigenvectors().col(i).normalized();
      out[i].left = solve_complex(luAt, est.eigenvectors().col(perm[i])).normalized();
    }
  } else {
    Eigen::PartialPivLU<Matrix> luB(B);
    if (!invertible(luB)) throw SolverFailure("neither A nor B is invertible");
    const Matrix L = luB.solve(A);
    const auto es = eig(L);
    const auto est = eig(L.transpose());
    const auto perm = match(es.eigenvalues(), est.eigenvalues());
    const Eigen::PartialPivLU<Matrix> luBt(B.transpose());
    for (Index i = 0; i < n; ++i) {
      out[i].lambda = es.eigenvalues()[i];
      out[i].right = es.eigenvectors().col(i).normalized();
      out[i].left = solve_complex(luBt, est.eigenvectors().col(perm[i])).normalized();
    }
  }

  for (auto& p : out) {
    const double mag = std::abs(p.lambda);
    if (std::isfinite(mag) && std::abs(p.lambda.imag()) < kRealSnap * mag) {
      p.lambda = cd(p.lambda.real(), 0.0);
      p.is_real = true;
      p.right = realify(p.right);
      p.left = realify(p.left);
    } else if (!std::isfinite(mag)) {
      p.is_real = true;
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const DenseEigenpair& a, const DenseEigenpair& b) {
    return std::abs(a.lambda) < std::abs(b.lambda);
  });
  return out;
}

ExactEigenData exact_eigen_data(const Matrix& A, const Matrix& B) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows()) {
    throw DimensionMismatch("exact_eigen_data needs square matrices of equal size");
  }
  const Index n = A.rows();
  Eigen::PartialPivLU<Matrix> luA(A);
  if (!invertible(luA)) throw SolverFailure("A is not invertible");

  ExactEigenData d;
  d.A_inv = luA.inverse();
  d.M = luA.solve(B);
  const auto es = eig(d.M);
  const auto est = eig(d.M.transpose());

  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  const auto& ev = es.eigenvalues();
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return std::abs(ev[a]) > std::abs(ev[b]); });
  const cd k = ev[order[0]];
  if (std::abs(k.imag()) >= kRealSnap * std::abs(k) || !(k.real() > 0.0)) {
    throw SolverFailure("dominant eigenvalue of A^{-1}B is not real positive");
  }
  if (n > 1 && std::abs(ev[order[1]] - k) <= 1e-12 * std::abs(k)) {
    throw SolverFailure("dominant eigenvalue of A^{-1}B is not simple");
  }
  d.k = k.real();
  d.k2 = n > 1 ? ev[order[1]].real() : 0.0;
  d.k_min = ev[order[n - 1]].real();

  Vector u = realify(es.eigenvectors().col(order[0])).real();
  // Eigenvector of M^T for k is the tilde-adjoint direction.
  Index jt = 0;
  (est.eigenvalues().array() - k).abs().minCoeff(&jt);
  Vector ut = realify(est.eigenvectors().col(jt)).real();
  Vector us = luA.transpose().solve(ut);
  us.normalize();
  normalize_sign(us);
  Vector at_us = A.transpose() * us;
  d.u = std::move(u);
  d.u_tilde_star = at_us / at_us.norm();
  d.u_star = std::move(us);
  return d;
}

}  // namespace rbeig
