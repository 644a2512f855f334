#pragma once

#include <array>
#include <vector>

#include "rbeig/hifi/mesh.hpp"
#include "rbeig/hifi/parameters.hpp"
#include "rbeig/linalg/gram.hpp"
#include "rbeig/linalg/types.hpp"

namespace rbeig {

/// How B is built when the fission pattern is the identity.
enum class FissionOperator {
  assembled,  ///< chi_i nuSf_j mass blocks
  identity,   ///< lumped subdomain indicators; sums to I for g = (1, 0, 0, 1)
};

struct AssemblyOptions {
  GramKind gram = GramKind::identity;
  FissionOperator fission = FissionOperator::assembled;
};

/// Parameter-independent pieces of A_mu and B_mu. DOFs are group-major:
/// indices [0, n) hold group 1, [n, 2n) group 2.
///
/// A components per subdomain: 0 group-1 stiffness, 1 group-1 mass,
/// 2 mass in block (1,2), 3 group-2 stiffness, 4 mass in block (2,1),
/// 5 group-2 mass. B components: blocks (1,1), (1,2), (2,1), (2,2).
struct AffineOperatorFamily {
  Index dofs_per_group = 0;
  std::vector<std::array<SparseMatrix, 6>> A;
  std::vector<std::array<SparseMatrix, 4>> B;
  SparseMatrix M_bc;  ///< zero for Dirichlet
  bool has_boundary_term = false;
  GramOperator X;
  SparseMatrix mass;  ///< two-group mass matrix (whatever X is)

  Index size() const { return 2 * dofs_per_group; }
  int subdomain_count() const { return static_cast<int>(A.size()); }
};

AffineOperatorFamily assemble_affine_family(const Mesh2D& mesh, const AssemblyOptions& options = {});

struct ParametricPencil {
  SparseMatrix A;
  SparseMatrix B;
};

/// A_mu = sum f_p(mu_k) A_{k,p} + M_bc, B_mu = sum g_q(mu_k) B_{k,q}.
/// Throws CoercivityViolation unless `check` is false.
ParametricPencil assemble_parametric(const AffineOperatorFamily& family, const ParameterPoint& mu,
                                     bool check = true, const CoercivityLimits& limits = {});

/// Element matrices of the bilinear Q1 square of side h under 2x2 Gauss
/// quadrature, local nodes counter-clockwise from the lower-left corner.
struct Q1Element {
  Eigen::Matrix4d stiffness;
  Eigen::Matrix4d mass;
};
Q1Element q1_element(double h);

}  // namespace rbeig
