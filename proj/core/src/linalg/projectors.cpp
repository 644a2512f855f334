#include "rbeig/linalg/projectors.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include "rbeig/errors.hpp"

namespace rbeig {

namespace {
constexpr double kPairingFloor = 1e-12;
constexpr double kCollision = 1e-12;
}  // namespace

ObliqueProjectorPair make_projectors(const Vector& u, const Vector& u_tilde_star) {
  if (u.size() != u_tilde_star.size() || u.size() == 0) {
    throw DimensionMismatch("projector vectors must be non-empty and of equal size");
  }
  const double pairing = u.dot(u_tilde_star);
  if (!(std::abs(pairing) > kPairingFloor)) {
    throw DegeneratePairing("<u, u~*> = " + std::to_string(pairing));
  }
  const Index n = u.size();
  ObliqueProjectorPair out;
  out.u = u;
  out.u_tilde_star = u_tilde_star;
  out.pairing = pairing;
  out.P = Matrix::Identity(n, n) - (u * u_tilde_star.transpose()) / pairing;
  out.P_star = Matrix::Identity(n, n) - (u_tilde_star * u.transpose()) / pairing;
  return out;
}

Matrix complement_basis(const Vector& w) {
  const Index n = w.size();
  if (n < 2) throw DimensionMismatch("complement basis needs n >= 2");
  Eigen::HouseholderQR<Matrix> qr(w);
  Matrix Q = qr.householderQ() * Matrix::Identity(n, n);
  return Q.rightCols(n - 1);
}

Matrix restricted_operator(const Matrix& T, const ObliqueProjectorPair& proj, Side side) {
  const Vector& w = side == Side::direct ? proj.u_tilde_star : proj.u;
  if (T.rows() != w.size() || T.cols() != w.size()) {
    throw DimensionMismatch("restricted operator size does not match projector");
  }
  const Matrix Q = complement_basis(w);
  return Q.transpose() * T * Q;
}

Matrix restricted_pseudo_inverse(const Matrix& T, const ObliqueProjectorPair& proj, Side side) {
  const Vector& w = side == Side::direct ? proj.u_tilde_star : proj.u;
  const Matrix& trailing = side == Side::direct ? proj.P : proj.P_star;
  if (T.rows() != w.size() || T.cols() != w.size()) {
    throw DimensionMismatch("pseudo-inverse operand size does not match projector");
  }
  const Matrix Q = complement_basis(w);
  const Matrix Tc = Q.transpose() * T * Q;
  Eigen::JacobiSVD<Matrix> svd(Tc, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s.size() ? s[0] : 0.0;
  const double smin = s.size() ? s[s.size() - 1] : 0.0;
  if (!(smin >= kCollision * smax) || smax == 0.0) {
    throw SpectrumCollision("k_N hits the restricted spectrum (sigma_min/sigma_max = " +
                            std::to_string(smax > 0 ? smin / smax : 0.0) + ")");
  }
  const Matrix Tc_inv =
      svd.matrixV() * s.cwiseInverse().asDiagonal() * svd.matrixU().transpose();
  return Q * Tc_inv * Q.transpose() * trailing;
}

}  // namespace rbeig
