#include "rbeig/hifi/assembly.hpp"

#include <cmath>

#include "rbeig/errors.hpp"

namespace rbeig {

Q1Element q1_element(double h) {
  const double g = 1.0 / std::sqrt(3.0);
  const double pts[2] = {-g, g};
  // Reference square [-1,1]^2 with local nodes (-1,-1), (1,-1), (1,1), (-1,1).
  const double xi_n[4] = {-1, 1, 1, -1};
  const double eta_n[4] = {-1, -1, 1, 1};
  const double jac = h / 2.0;
  Q1Element e;
  e.stiffness.setZero();
  e.mass.setZero();
  for (double xi : pts) {
    for (double eta : pts) {
      Eigen::Vector4d N, dx, dy;
      for (int a = 0; a < 4; ++a) {
        N[a] = 0.25 * (1 + xi_n[a] * xi) * (1 + eta_n[a] * eta);
        dx[a] = 0.25 * xi_n[a] * (1 + eta_n[a] * eta) / jac;
        dy[a] = 0.25 * eta_n[a] * (1 + xi_n[a] * xi) / jac;
      }
      const double w = jac * jac;
      e.stiffness += w * (dx * dx.transpose() + dy * dy.transpose());
      e.mass += w * (N * N.transpose());
    }
  }
  return e;
}

namespace {

enum Block { b11, b12, b21, b22 };

// Offsets of a block in the group-major two-group system.
std::pair<Index, Index> offsets(Block b, Index n) {
  switch (b) {
    case b11: return {0, 0};
    case b12: return {0, n};
    case b21: return {n, 0};
    case b22: return {n, n};
  }
  return {0, 0};
}

SparseMatrix from_triplets(Index N, const std::vector<Triplet>& t) {
  SparseMatrix S(N, N);
  S.setFromTriplets(t.begin(), t.end());
  S.makeCompressed();
  return S;
}

// Scatters a single-group element matrix into `out` for the given block.
void scatter(const Mesh2D& mesh, int ci, int cj, const Eigen::Matrix4d& Ke, Block b,
             std::vector<Triplet>& out) {
  const auto nodes = mesh.cell_nodes(ci, cj);
  const auto [ro, co] = offsets(b, mesh.dofs_per_group);
  for (int a = 0; a < 4; ++a) {
    const Index ra = mesh.node_dof[nodes[a]];
    if (ra < 0) continue;
    for (int c = 0; c < 4; ++c) {
      const Index cc = mesh.node_dof[nodes[c]];
      if (cc < 0) continue;
      out.emplace_back(ro + ra, co + cc, Ke(a, c));
    }
  }
}

}  // namespace

AffineOperatorFamily assemble_affine_family(const Mesh2D& mesh, const AssemblyOptions& options) {
  const int K = mesh.subdomain_count();
  const Index n = mesh.dofs_per_group;
  const Index N = 2 * n;
  if (n == 0) throw DimensionMismatch("mesh has no degrees of freedom");
  const Q1Element el = q1_element(mesh.h);

  struct Lists {
    std::array<std::vector<Triplet>, 6> a;
    std::array<std::vector<Triplet>, 4> b;
  };
  std::vector<Lists> lists(K);
  std::vector<Triplet> mass_t;
  // Lumped weights for the identity fission operator: share of each node's
  // support that lies in each subdomain.
  std::vector<std::vector<double>> share(K, std::vector<double>(n, 0.0));
  std::vector<double> support(n, 0.0);

  const Block a_blocks[6] = {b11, b11, b12, b22, b21, b22};
  const bool a_stiff[6] = {true, false, false, true, false, false};
  const Block b_blocks[4] = {b11, b12, b21, b22};

  for (int cj = 0; cj < mesh.cells_per_side; ++cj) {
    for (int ci = 0; ci < mesh.cells_per_side; ++ci) {
      const int k = mesh.cell_subdomain[static_cast<std::size_t>(cj) * mesh.cells_per_side + ci];
      for (int p = 0; p < 6; ++p)
        scatter(mesh, ci, cj, a_stiff[p] ? el.stiffness : el.mass, a_blocks[p], lists[k].a[p]);
      if (options.fission == FissionOperator::assembled) {
        for (int q = 0; q < 4; ++q) scatter(mesh, ci, cj, el.mass, b_blocks[q], lists[k].b[q]);
      } else {
        for (Index node : mesh.cell_nodes(ci, cj)) {
          const Index d = mesh.node_dof[node];
          if (d < 0) continue;
          share[k][d] += 1.0;
          support[d] += 1.0;
        }
      }
      scatter(mesh, ci, cj, el.mass, b11, mass_t);
      scatter(mesh, ci, cj, el.mass, b22, mass_t);
    }
  }

  if (options.fission == FissionOperator::identity) {
    for (int k = 0; k < K; ++k) {
      for (Index d = 0; d < n; ++d) {
        if (share[k][d] == 0.0) continue;
        const double w = share[k][d] / support[d];
        for (int q = 0; q < 4; ++q) {
          const auto [ro, co] = offsets(b_blocks[q], n);
          lists[k].b[q].emplace_back(ro + d, co + d, w);
        }
      }
    }
  }

  AffineOperatorFamily fam;
  fam.dofs_per_group = n;
  fam.A.resize(K);
  fam.B.resize(K);
  for (int k = 0; k < K; ++k) {
    for (int p = 0; p < 6; ++p) fam.A[k][p] = from_triplets(N, lists[k].a[p]);
    for (int q = 0; q < 4; ++q) fam.B[k][q] = from_triplets(N, lists[k].b[q]);
  }

  // Robin term: (1/2) int_{boundary} phi psi per group, 1D P1 edge mass.
  std::vector<Triplet> bc_t;
  if (mesh.bc == BoundaryCondition::robin) {
    const double h = mesh.h;
    const double edge[2][2] = {{h / 3.0, h / 6.0}, {h / 6.0, h / 3.0}};
    const int nc = mesh.cells_per_side;
    auto add_edge = [&](Index na, Index nb) {
      const Index idx[2] = {mesh.node_dof[na], mesh.node_dof[nb]};
      for (Index g = 0; g < 2; ++g)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) bc_t.emplace_back(g * n + idx[a], g * n + idx[b], 0.5 * edge[a][b]);
    };
    for (int i = 0; i < nc; ++i) {
      add_edge(mesh.node_id(i, 0), mesh.node_id(i + 1, 0));
      add_edge(mesh.node_id(i, nc), mesh.node_id(i + 1, nc));
      add_edge(mesh.node_id(0, i), mesh.node_id(0, i + 1));
      add_edge(mesh.node_id(nc, i), mesh.node_id(nc, i + 1));
    }
  }
  fam.M_bc = from_triplets(N, bc_t);
  fam.has_boundary_term = mesh.bc == BoundaryCondition::robin;
  fam.mass = from_triplets(N, mass_t);
  fam.X = options.gram == GramKind::mass ? GramOperator::from_matrix(fam.mass) : GramOperator::identity(N);
  return fam;
}

ParametricPencil assemble_parametric(const AffineOperatorFamily& family, const ParameterPoint& mu, bool check,
                                     const CoercivityLimits& limits) {
  if (mu.subdomain_count() != family.subdomain_count()) {
    throw DimensionMismatch("parameter has " + std::to_string(mu.subdomain_count()) +
                            " subdomains, family has " + std::to_string(family.subdomain_count()));
  }
  if (check) check_coercivity(mu, limits);
  const Index N = family.size();
  ParametricPencil out{family.M_bc, SparseMatrix(N, N)};
  for (int k = 0; k < family.subdomain_count(); ++k) {
    const auto f = f_coefficients(mu.sub[k]);
    const auto g = g_coefficients(mu.sub[k]);
    for (int p = 0; p < 6; ++p)
      if (f[p] != 0.0) out.A += f[p] * family.A[k][p];
    for (int q = 0; q < 4; ++q)
      if (g[q] != 0.0) out.B += g[q] * family.B[k][q];
  }
  out.A.makeCompressed();
  out.B.makeCompressed();
  return out;
}

}  // namespace rbeig
