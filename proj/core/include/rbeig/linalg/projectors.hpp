#pragma once

#include "rbeig/linalg/types.hpp"

namespace rbeig {

/// Oblique spectral projectors built from a right eigenvector u and the
/// tilde-adjoint vector u~* = A^T u* / |A^T u*|:
///   P  = I - u u~*^T / <u, u~*>   (kernel Span{u},  range Span{u~*}^perp)
///   P* = I - u~* u^T / <u, u~*>   (kernel Span{u~*}, range Span{u}^perp)
struct ObliqueProjectorPair {
  Matrix P;
  Matrix P_star;
  Vector u;
  Vector u_tilde_star;
  double pairing = 0.0;  ///< <u, u~*>
};

/// Throws DegeneratePairing when |<u, u~*>| <= 1e-12.
ObliqueProjectorPair make_projectors(const Vector& u, const Vector& u_tilde_star);

/// Orthonormal basis (n x (n-1)) of the orthogonal complement of w.
Matrix complement_basis(const Vector& w);

enum class Side { direct, adjoint };

/// Moore-Penrose inverse of T restricted to the range of the projector.
///
/// For Side::direct, T = PMP - k_N I. The result vanishes on Span{u} and
/// inverts T on Span{u~*}^perp; it is assembled as Q Tc^{-1} Q^T P with Q an
/// orthonormal basis of Span{u~*}^perp and Tc = Q^T T Q. Side::adjoint swaps
/// the roles (T = P* M^T P* - k_N I, complement of u, trailing P*).
///
/// Throws SpectrumCollision when sigma_min(Tc) < 1e-12 |Tc|.
Matrix restricted_pseudo_inverse(const Matrix& T, const ObliqueProjectorPair& proj, Side side);

/// Compressed operator Q^T T Q on the complement basis used above, exposed
/// for the numerical-range bound.
Matrix restricted_operator(const Matrix& T, const ObliqueProjectorPair& proj, Side side);

}  // namespace rbeig
