#include <gtest/gtest.h>

#include <filesystem>
#include <set>

#include "rbeig/errors.hpp"
#include "rbeig/hifi/assembly.hpp"
#include "rbeig/hifi/hifi_solver.hpp"
#include "rbeig/hifi/sampling.hpp"
#include "rbeig/linalg/dense_eig.hpp"
#include "test_support.hpp"

using namespace rbeig;
using namespace rbeig::testing;
namespace fs = std::filesystem;

namespace {

// Monolithic assembler written against closed-form Q1 element matrices,
// used as the oracle for the affine decomposition.
ParametricPencil monolithic(const Mesh2D& mesh, const ParameterPoint& mu) {
  const Index n = mesh.dofs_per_group;
  const double h = mesh.h;
  Eigen::Matrix4d K, M;
  K << 4, -1, -2, -1, -1, 4, -1, -2, -2, -1, 4, -1, -1, -2, -1, 4;
  K /= 6.0;
  M << 4, 2, 1, 2, 2, 4, 2, 1, 1, 2, 4, 2, 2, 1, 2, 4;
  M *= h * h / 36.0;
  Matrix A = Matrix::Zero(2 * n, 2 * n), B = Matrix::Zero(2 * n, 2 * n);
  for (int cj = 0; cj < mesh.cells_per_side; ++cj) {
    for (int ci = 0; ci < mesh.cells_per_side; ++ci) {
      const int sd = mesh.cell_subdomain[cj * mesh.cells_per_side + ci];
      const SubdomainCoefficients& c = mu.sub[sd];
      const Index nodes[4] = {mesh.node_id(ci, cj), mesh.node_id(ci + 1, cj), mesh.node_id(ci + 1, cj + 1),
                              mesh.node_id(ci, cj + 1)};
      const double Dg[2] = {c.D1, c.D2};
      const double S[2][2] = {{c.sigma11, c.sigma12}, {c.sigma21, c.sigma22}};
      const double F[2][2] = {{c.chi1_nusf1, c.chi1_nusf2}, {c.chi2_nusf1, c.chi2_nusf2}};
      for (int a = 0; a < 4; ++a) {
        const Index da = mesh.node_dof[nodes[a]];
        if (da < 0) continue;
        for (int b = 0; b < 4; ++b) {
          const Index db = mesh.node_dof[nodes[b]];
          if (db < 0) continue;
          for (int g = 0; g < 2; ++g) {
            A(g * n + da, g * n + db) += Dg[g] * K(a, b);
            for (int gp = 0; gp < 2; ++gp) {
              A(g * n + da, gp * n + db) += S[g][gp] * M(a, b);
              B(g * n + da, gp * n + db) += F[g][gp] * M(a, b);
            }
          }
        }
      }
    }
  }
  if (mesh.bc == BoundaryCondition::robin) {
    const int m = mesh.cells_per_side;
    auto edge = [&](Index p, Index q) {
      const Index dp = mesh.node_dof[p], dq = mesh.node_dof[q];
      for (int g = 0; g < 2; ++g) {
        A(g * n + dp, g * n + dp) += 0.5 * h / 3.0;
        A(g * n + dq, g * n + dq) += 0.5 * h / 3.0;
        A(g * n + dp, g * n + dq) += 0.5 * h / 6.0;
        A(g * n + dq, g * n + dp) += 0.5 * h / 6.0;
      }
    };
    for (int i = 0; i < m; ++i) {
      edge(mesh.node_id(i, 0), mesh.node_id(i + 1, 0));
      edge(mesh.node_id(i, m), mesh.node_id(i + 1, m));
      edge(mesh.node_id(0, i), mesh.node_id(0, i + 1));
      edge(mesh.node_id(m, i), mesh.node_id(m, i + 1));
    }
  }
  return {A.sparseView(), B.sparseView()};
}

ParameterPoint random_coercive_point(int K, Rng& rng) {
  ParameterPoint mu;
  for (int k = 0; k < K; ++k) {
    SubdomainCoefficients c;
    c.D1 = rng.uniform(0.5, 2.0);
    c.D2 = rng.uniform(0.2, 1.0);
    c.sigma11 = rng.uniform(0.05, 0.3);
    c.sigma22 = rng.uniform(0.05, 0.3);
    c.sigma12 = -rng.uniform(0.0, 0.9) * c.sigma11;
    c.sigma21 = -rng.uniform(0.0, 0.9) * c.sigma22;
    c.chi1_nusf1 = rng.uniform(0.0, 0.1);
    c.chi1_nusf2 = rng.uniform(0.0, 0.3);
    c.chi2_nusf1 = rng.uniform(0.0, 0.05);
    c.chi2_nusf2 = rng.uniform(0.0, 0.05);
    mu.sub.push_back(c);
  }
  return mu;
}

}  // namespace

TEST(Mesh, DofCountsOfTheTwoCases) {
  const CaseGeometry toy = toycore_geometry(30);
  const Mesh2D t = build_mesh(toy.L, toy.cells_per_side, toy.partition, toy.bc);
  EXPECT_EQ(t.dofs_per_group, 841);
  EXPECT_EQ(t.subdomain_count(), 4);
  const CaseGeometry mini = minicore_geometry(35);
  const Mesh2D m = build_mesh(mini.L, mini.cells_per_side, mini.partition, mini.bc);
  EXPECT_EQ(m.dofs_per_group, 1296);
  EXPECT_EQ(m.subdomain_count(), 25);
}

TEST(Mesh, CellSubdomainsFollowThePartition) {
  const CaseGeometry toy = toycore_geometry(10);
  const Mesh2D t = build_mesh(toy.L, 10, toy.partition, BoundaryCondition::dirichlet);
  EXPECT_EQ(t.cell_subdomain[0], 0);
  EXPECT_EQ(t.cell_subdomain[9], 1);
  EXPECT_EQ(t.cell_subdomain[90], 2);
  EXPECT_EQ(t.cell_subdomain[99], 3);
}

TEST(Mesh, MisalignedPartitionIsRejected) {
  EXPECT_THROW(build_mesh(60.0, 31, Partition::uniform(60.0, 2), BoundaryCondition::dirichlet),
               MisalignedPartition);
  EXPECT_THROW(build_mesh(60.0, 0, Partition::uniform(60.0, 2), BoundaryCondition::dirichlet), DimensionMismatch);
}

TEST(Assembly, ElementMatricesMatchClosedForms) {
  const double h = 0.7;
  const Q1Element e = q1_element(h);
  EXPECT_NEAR(e.stiffness(0, 0), 2.0 / 3.0, 1e-14);
  EXPECT_NEAR(e.stiffness(0, 2), -1.0 / 3.0, 1e-14);
  EXPECT_NEAR(e.mass(0, 0), 4.0 * h * h / 36.0, 1e-14);
  EXPECT_NEAR(e.mass.sum(), h * h, 1e-14);
  EXPECT_LT(e.stiffness.rowwise().sum().cwiseAbs().maxCoeff(), 1e-14);
}

class AssemblyOracle : public ::testing::TestWithParam<BoundaryCondition> {};

TEST_P(AssemblyOracle, AffineSumEqualsMonolithicAssembly) {
  const BoundaryCondition bc = GetParam();
  const CaseGeometry g = toycore_geometry(6);
  const Mesh2D mesh = build_mesh(g.L, 6, g.partition, bc);
  const AffineOperatorFamily fam = assemble_affine_family(mesh);
  Rng rng(101);
  for (int trial = 0; trial < 5; ++trial) {
    const ParameterPoint mu = random_coercive_point(4, rng);
    const ParametricPencil a = assemble_parametric(fam, mu);
    const ParametricPencil o = monolithic(mesh, mu);
    EXPECT_LT(Matrix(a.A - o.A).norm(), 1e-12 * Matrix(o.A).norm());
    EXPECT_LT(Matrix(a.B - o.B).norm(), 1e-12 * Matrix(o.B).norm());
  }
  EXPECT_EQ(fam.has_boundary_term, bc == BoundaryCondition::robin);
}

INSTANTIATE_TEST_SUITE_P(BothBoundaryConditions, AssemblyOracle,
                         ::testing::Values(BoundaryCondition::dirichlet, BoundaryCondition::robin));

TEST(Assembly, MassGramIsTheTwoGroupMassMatrix) {
  const auto fam = small_toy_family(6, BoundaryCondition::dirichlet, GramKind::mass);
  EXPECT_FALSE(fam->X.is_identity());
  EXPECT_LT(Matrix(fam->X.matrix() - fam->mass).norm(), 1e-15);
  const Matrix Md(fam->mass);
  EXPECT_LT((Md - Md.transpose()).norm(), 1e-15);
}

TEST(Assembly, IdentityFissionSumsToIdentity) {
  const CaseGeometry g = toycore_geometry(6);
  const Mesh2D mesh = build_mesh(g.L, 6, g.partition, BoundaryCondition::robin);
  AssemblyOptions opt;
  opt.fission = FissionOperator::identity;
  const AffineOperatorFamily fam = assemble_affine_family(mesh, opt);
  ParameterPoint mu = sample_toycore(1, 3).front();
  for (auto& c : mu.sub) {
    c.chi1_nusf1 = c.chi2_nusf2 = 1.0;
    c.chi1_nusf2 = c.chi2_nusf1 = 0.0;
  }
  const ParametricPencil p = assemble_parametric(fam, mu);
  EXPECT_LT(Matrix(p.B - Matrix::Identity(p.B.rows(), p.B.cols())).norm(), 1e-12);
}

TEST(Parameters, CoercivityConditions) {
  ParameterPoint mu = sample_toycore(1, 5).front();
  EXPECT_FALSE(coercivity_violation(mu).has_value());
  auto broken = [&](auto edit) {
    ParameterPoint m = mu;
    edit(m.sub[1]);
    return coercivity_violation(m).has_value();
  };
  EXPECT_TRUE(broken([](SubdomainCoefficients& c) { c.D1 = 1e-4; }));
  EXPECT_TRUE(broken([](SubdomainCoefficients& c) { c.sigma22 = 0.0; }));
  EXPECT_TRUE(broken([](SubdomainCoefficients& c) { c.sigma12 = -1.5 * c.sigma11; }));
  EXPECT_TRUE(broken([](SubdomainCoefficients& c) { c.chi1_nusf2 = -0.1; }));
  ParameterPoint none = mu;
  for (auto& c : none.sub) c.chi1_nusf1 = c.chi1_nusf2 = c.chi2_nusf1 = c.chi2_nusf2 = 0.0;
  EXPECT_TRUE(coercivity_violation(none).has_value());
  EXPECT_THROW(check_coercivity(none), CoercivityViolation);

  const auto fam = small_toy_family(4);
  EXPECT_THROW(assemble_parametric(*fam, none), CoercivityViolation);
  EXPECT_NO_THROW(assemble_parametric(*fam, none, false));
}

TEST(Sampling, ToyCoreLawsAndDeterminism) {
  const auto a = sample_toycore(200, 77), b = sample_toycore(200, 77);
  ASSERT_EQ(a.size(), 200u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_TRUE(a[i] == b[i]);
    ASSERT_EQ(a[i].subdomain_count(), 4);
    EXPECT_FALSE(coercivity_violation(a[i]).has_value());
    for (const auto& c : a[i].sub) {
      const double t1 = 1.0 / (3.0 * c.D1), t2 = 1.0 / (3.0 * c.D2);
      EXPECT_LE(t1, 0.7 + 1e-12);
      EXPECT_LE(t2, 0.7 + 1e-12);
      EXPECT_GE(-c.sigma12, 0.0);
      EXPECT_LE(-c.sigma12, 0.15);
      EXPECT_GE(-c.sigma21, 0.0);
      EXPECT_LE(-c.sigma21, 0.15);
      const double lo = 2.0 * (-c.sigma12 - c.sigma21);
      EXPECT_GE(t1, lo - 1e-12);
      EXPECT_GE(t2, lo - 1e-12);
      EXPECT_EQ(c.chi1_nusf1, 1.0);
      EXPECT_EQ(c.chi2_nusf2, 1.0);
      EXPECT_EQ(c.chi1_nusf2, 0.0);
      EXPECT_EQ(c.chi2_nusf1, 0.0);
    }
  }
  EXPECT_FALSE(sample_toycore(1, 78).front() == a.front());
}

TEST(Sampling, SetsAreDisjointAndTrainMatchesSampler) {
  const ParameterSets s = toycore_sets(40, 15, 10, 9);
  const auto plain = sample_toycore(40, 9);
  for (std::size_t i = 0; i < plain.size(); ++i) EXPECT_TRUE(s.train[i] == plain[i]);
  for (const auto& t : s.test) {
    for (const auto& tr : s.train) EXPECT_FALSE(t == tr);
    for (const auto& p : s.pref) EXPECT_FALSE(t == p);
  }
  for (const auto& p : s.pref)
    for (const auto& tr : s.train) EXPECT_FALSE(p == tr);
}

TEST(Sampling, MinicoreLayoutAndSyntheticCoefficients) {
  const auto layout = minicore_layout();
  ASSERT_EQ(layout.size(), 25u);
  EXPECT_EQ(layout[12], Material::ugd12);
  int uo2 = 0, refl = 0;
  for (auto m : layout) {
    uo2 += m == Material::uo2;
    refl += m == Material::reflector;
  }
  EXPECT_EQ(uo2, 8);
  EXPECT_EQ(refl, 16);
  const auto pts = sample_synthetic_minicore(50, 4);
  for (const auto& mu : pts) {
    EXPECT_FALSE(coercivity_violation(mu).has_value());
    ASSERT_EQ(mu.macro.size(), 25u);
    for (int k = 0; k < 25; ++k) {
      EXPECT_EQ(mu.macro[k].material, layout[k]);
      EXPECT_EQ(mu.sub[k].chi2_nusf1, 0.0);
      EXPECT_EQ(mu.sub[k].chi2_nusf2, 0.0);
    }
  }
}

TEST(Sampling, ParameterCsvRoundTrip) {
  const fs::path dir = fs::temp_directory_path() / "rbeig_test_params";
  fs::create_directories(dir);
  const auto toy = sample_toycore(5, 1);
  write_parameters_csv(dir / "toy.csv", toy);
  const auto back = read_parameters_csv(dir / "toy.csv");
  ASSERT_EQ(back.size(), toy.size());
  for (std::size_t i = 0; i < toy.size(); ++i) EXPECT_TRUE(back[i] == toy[i]);
  const auto mini = sample_synthetic_minicore(3, 2);
  write_parameters_csv(dir / "mini.csv", mini);
  const auto mback = read_parameters_csv(dir / "mini.csv");
  for (std::size_t i = 0; i < mini.size(); ++i) {
    EXPECT_TRUE(mback[i] == mini[i]);
    EXPECT_EQ(mback[i].macro[3].material, mini[i].macro[3].material);
    EXPECT_EQ(mback[i].macro[3].boron, mini[i].macro[3].boron);
  }
}

TEST(HighFidelity, MatchesDenseOracleOnSmallMesh) {
  const auto fam = small_toy_family(8, BoundaryCondition::robin);
  const HighFidelitySolver hf(fam, PowerIterationSettings{});
  for (const auto& mu : sample_toycore(3, 21)) {
    const EigenSolution s = hf.solve(mu);
    const ParametricPencil p = assemble_parametric(*fam, mu);
    const auto pairs = dense_eig_oracle(Matrix(p.A), Matrix(p.B));
    EXPECT_TRUE(pairs.front().is_real);
    EXPECT_NEAR(s.lambda, pairs.front().lambda.real(), 1e-6 * std::abs(s.lambda));
    EXPECT_GT(s.k, 0.0);
    // Coarse consistent-mass meshes are not M-matrices, so only the sign
    // convention is checked, not positivity.
    Index imax = 0;
    s.u.cwiseAbs().maxCoeff(&imax);
    EXPECT_GT(s.u[imax], 0.0);
  }
  EXPECT_EQ(hf.factorizations(), 3);
  EXPECT_EQ(hf.solves(), 3);
}
