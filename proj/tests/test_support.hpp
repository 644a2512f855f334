#pragma once

#include <cmath>
#include <algorithm>
#include <memory>

#include "rbeig/hifi/assembly.hpp"
#include "rbeig/hifi/sampling.hpp"
#include "rbeig/linalg/types.hpp"
#include "rbeig/util/rng.hpp"

namespace rbeig::testing {

inline Matrix random_matrix(Index r, Index c, Rng& rng) {
  Matrix m(r, c);
  for (Index j = 0; j < c; ++j)
    for (Index i = 0; i < r; ++i) m(i, j) = rng.normal();
  return m;
}

inline Vector random_vector(Index n, Rng& rng) { return random_matrix(n, 1, rng).col(0); }

/// Orthogonal matrix from the QR factor of a Gaussian matrix.
inline Matrix random_orthogonal(Index n, Rng& rng) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(n, n, rng));
  return qr.householderQ();
}

/// Q diag(d) Q^T.
inline Matrix spd_with_spectrum(const Vector& d, Rng& rng) {
  const Matrix Q = random_orthogonal(d.size(), rng);
  return Q * d.asDiagonal() * Q.transpose();
}

inline Matrix random_skew(Index n, Rng& rng) {
  const Matrix G = random_matrix(n, n, rng);
  return 0.5 * (G - G.transpose());
}

/// Symmetric positive definite matrix with eigenvalues spread in [lo, hi],
/// the smallest one isolated at `lowest`.
inline Matrix gapped_spd(Index n, double lowest, double lo, double hi, Rng& rng) {
  Vector d(n);
  d[0] = lowest;
  for (Index i = 1; i < n; ++i) d[i] = rng.uniform(lo, hi);
  return spd_with_spectrum(d, rng);
}

/// Small toy-core family for fast tests.
inline std::shared_ptr<const AffineOperatorFamily> small_toy_family(int cells = 8,
                                                                    BoundaryCondition bc = BoundaryCondition::dirichlet,
                                                                    GramKind gram = GramKind::identity) {
  const CaseGeometry g = toycore_geometry(cells);
  const Mesh2D mesh = build_mesh(g.L, cells, g.partition, bc);
  AssemblyOptions opt;
  opt.gram = gram;
  return std::make_shared<const AffineOperatorFamily>(assemble_affine_family(mesh, opt));
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

/// A = SPD + delta * skew, B SPD. The smallest eigenvalue of A sits well
/// below the rest, so the dominant k of A^{-1} B is real and separated.
struct TestPencil {
  Matrix A;
  Matrix B;
};

inline TestPencil near_symmetric_pencil(Index n, double delta, Rng& rng) {
  TestPencil p;
  p.A = gapped_spd(n, 0.5, 1.0, 5.0, rng) + delta * random_skew(n, rng);
  Vector d(n);
  for (Index i = 0; i < n; ++i) d[i] = rng.uniform(0.5, 2.0);
  p.B = spd_with_spectrum(d, rng);
  return p;
}

/// Distance from v to the line spanned by u.
inline double distance_to_span(const Vector& v, const Vector& u) { return (v - (u.dot(v) / u.dot(u)) * u).norm(); }

}  // namespace rbeig::testing
