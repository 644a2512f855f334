#include <gtest/gtest.h>

#include <filesystem>

#include "rbeig/errors.hpp"
#include "rbeig/hifi/hifi_solver.hpp"
#include "rbeig/rom/basis.hpp"
#include "rbeig/rom/reduced_model.hpp"
#include "test_support.hpp"

using namespace rbeig;
using namespace rbeig::testing;
namespace fs = std::filesystem;

TEST(Basis, OrthonormalizeInTheMassInnerProduct) {
  const auto fam = small_toy_family(6, BoundaryCondition::robin, GramKind::mass);
  Rng rng(1);
  std::vector<Vector> snaps;
  for (int i = 0; i < 5; ++i) snaps.push_back(random_vector(fam->size(), rng));
  snaps.push_back(snaps[0] + 2.0 * snaps[3]);  // dependent, dropped
  std::vector<SnapshotTag> tags;
  for (int i = 0; i < 6; ++i) tags.push_back({"train", i, SnapshotKind::direct});
  const ReducedBasis b = orthonormalize(snaps, fam->X, tags);
  ASSERT_EQ(b.dim(), 5);
  EXPECT_EQ(b.provenance.size(), 5u);
  const Matrix G = b.V.transpose() * fam->X.apply(b.V);
  EXPECT_LT((G - Matrix::Identity(5, 5)).norm(), 1e-12);
  EXPECT_THROW(orthonormalize({Vector::Zero(fam->size())}, fam->X), EmptyBasis);
}

TEST(Basis, PrefixDeterminismGivesNestedBases) {
  Rng rng(2);
  const GramOperator X = GramOperator::identity(40);
  std::vector<Vector> snaps;
  for (int i = 0; i < 8; ++i) snaps.push_back(random_vector(40, rng));
  const ReducedBasis small = orthonormalize({snaps.begin(), snaps.begin() + 5}, X);
  const ReducedBasis big = orthonormalize(snaps, X);
  EXPECT_EQ(big.V.leftCols(5), small.V);
}

TEST(Basis, PodCapturesALowRankFamily) {
  Rng rng(3);
  const Matrix modes = random_matrix(30, 3, rng);
  std::vector<Vector> snaps;
  for (int i = 0; i < 10; ++i) snaps.push_back(modes * random_vector(3, rng));
  const GramOperator X = GramOperator::identity(30);
  const Vector sv = pod_singular_values(snaps, X);
  EXPECT_LT(sv[3], 1e-10 * sv[0]);
  const ReducedBasis b = pod_compress(snaps, X, 3);
  for (const auto& s : snaps) EXPECT_LT((s - b.V * (b.V.transpose() * s)).norm(), 1e-10 * s.norm());
  EXPECT_THROW(pod_compress(snaps, X, 4), RankDeficient);
}

TEST(Basis, SaveLoadRoundTrip) {
  Rng rng(4);
  ReducedBasis b = orthonormalize({random_vector(12, rng), random_vector(12, rng)}, GramOperator::identity(12),
                                  {{"pod", 0, SnapshotKind::direct}, {"train", 7, SnapshotKind::adjoint}});
  const fs::path dir = fs::temp_directory_path() / "rbeig_test_basis";
  fs::remove_all(dir);
  save_basis(dir, b);
  const ReducedBasis c = load_basis(dir);
  EXPECT_EQ(c.V, b.V);
  EXPECT_EQ(c.provenance, b.provenance);
}

TEST(ReducedModel, ProjectionMatchesGalerkinProduct) {
  const auto fam = small_toy_family(6, BoundaryCondition::robin);
  Rng rng(5);
  const ReducedBasis b = orthonormalize({random_vector(fam->size(), rng), random_vector(fam->size(), rng),
                                         random_vector(fam->size(), rng)},
                                        fam->X);
  const ReducedOperators ops = ReducedOperators::project(*fam, b.V);
  const ParameterPoint mu = sample_toycore(1, 8).front();
  const auto [An, Bn] = ops.assemble(mu);
  const ParametricPencil p = assemble_parametric(*fam, mu);
  EXPECT_LT((An - b.V.transpose() * p.A * b.V).norm(), 1e-12 * An.norm());
  EXPECT_LT((Bn - b.V.transpose() * p.B * b.V).norm(), 1e-12 * Bn.norm());

  const ReducedOperators t = ops.truncated(2);
  const auto [At, Bt] = t.assemble(mu);
  EXPECT_LT((At - An.topLeftCorner(2, 2)).norm(), 1e-15 * An.norm());
  EXPECT_EQ(t.dim(), 2);
}

TEST(ReducedModel, SnapshotSpanReproducesTheHighFidelityPair) {
  const auto fam = small_toy_family(8, BoundaryCondition::dirichlet);
  const HighFidelitySolver hf(fam, PowerIterationSettings{});
  const auto pts = sample_toycore(3, 14);
  std::vector<Vector> snaps;
  for (const auto& mu : pts) {
    const EigenSolution s = hf.solve(mu);
    snaps.push_back(s.u);
    snaps.push_back(s.u_star);
  }
  const ReducedBasis b = orthonormalize(snaps, fam->X);
  const ReducedOperators ops = ReducedOperators::project(*fam, b.V);
  const EigenSolution ref = hf.solve(pts[1]);
  const ReducedSolution r = solve_reduced(ops, b.V, pts[1], PowerIterationSettings{});
  EXPECT_NEAR(r.k_N, ref.k, 1e-6 * ref.k);
  EXPECT_LT((r.u_N - ref.u).norm(), 1e-5);
  EXPECT_LT((r.u_star_N - ref.u_star).norm(), 1e-5);
  EXPECT_NEAR(r.u_N.norm(), 1.0, 1e-14);
  EXPECT_LT((b.V * r.c - r.u_N).norm(), 1e-13);
  EXPECT_NEAR(r.pairing, r.u_star_N.dot(assemble_parametric(*fam, pts[1]).A * r.u_N), 1e-10);

  // Without lifting only N-sized data is produced, scaled to unit length.
  const ReducedSolution s = solve_reduced(ops, b.V, pts[1], PowerIterationSettings{}, false);
  EXPECT_EQ(s.u_N.size(), 0);
  EXPECT_NEAR((b.V * s.c).norm(), 1.0, 1e-12);
  EXPECT_NEAR(s.k_N, r.k_N, 1e-13 * r.k_N);
}

TEST(ReducedModel, OperatorPersistenceRoundTrip) {
  const auto fam = small_toy_family(4, BoundaryCondition::robin);
  Rng rng(6);
  const ReducedBasis b = orthonormalize({random_vector(fam->size(), rng), random_vector(fam->size(), rng)}, fam->X);
  const ReducedOperators ops = ReducedOperators::project(*fam, b.V);
  const fs::path dir = fs::temp_directory_path() / "rbeig_test_ops";
  fs::remove_all(dir);
  save_reduced_operators(dir, ops);
  const ReducedOperators back = load_reduced_operators(dir);
  const ParameterPoint mu = sample_toycore(1, 1).front();
  EXPECT_EQ(back.assemble(mu).first, ops.assemble(mu).first);
  EXPECT_EQ(back.M_bc, ops.M_bc);
}
