#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "rbeig/errors.hpp"
#include "rbeig/estimators/estimators.hpp"
#include "rbeig/residual/residual_factors.hpp"
#include "rbeig/rom/basis.hpp"
#include "test_support.hpp"

using namespace rbeig;
using namespace rbeig::testing;
namespace fs = std::filesystem;

namespace {

struct Fixture {
  std::shared_ptr<const AffineOperatorFamily> fam;
  ReducedBasis basis;
  ResidualFactorization factors;
};

Fixture make_fixture(BoundaryCondition bc, GramKind gram, Index N, std::uint64_t seed) {
  Fixture s;
  s.fam = small_toy_family(6, bc, gram);
  Rng rng(seed);
  std::vector<Vector> v;
  for (Index i = 0; i < N; ++i) v.push_back(random_vector(s.fam->size(), rng));
  s.basis = orthonormalize(v, s.fam->X);
  s.factors = ResidualFactorization::precompute(*s.fam, s.basis.V, 2);
  return s;
}

double direct_norm(const Fixture& s, const ParameterPoint& mu, const Vector& c, double k, ResidualSide side) {
  const ParametricPencil p = assemble_parametric(*s.fam, mu);
  const Vector u = s.basis.V * c;
  const Vector r = side == ResidualSide::direct ? Vector(p.B * u - k * (p.A * u))
                                                : Vector(p.B.transpose() * u - k * (p.A.transpose() * u));
  return s.fam->X.dual_norm(r);
}

}  // namespace

struct Case {
  BoundaryCondition bc;
  GramKind gram;
};

class ResidualOracle : public ::testing::TestWithParam<Case> {};

TEST_P(ResidualOracle, OnlineNormMatchesDirectEvaluation) {
  const Fixture s = make_fixture(GetParam().bc, GetParam().gram, 6, 17);
  Rng rng(18);
  const auto mus = sample_toycore(10, 19);
  for (const auto& mu : mus) {
    const Vector c = random_vector(6, rng);
    const double k = rng.uniform(0.5, 3.0);
    for (ResidualSide side : {ResidualSide::direct, ResidualSide::adjoint}) {
      const double online = s.factors.online_norm(mu, c, k, side);
      EXPECT_LT(rel_diff(online, direct_norm(s, mu, c, k, side)), 1e-8);
    }
  }
}

TEST_P(ResidualOracle, QuadraticCoefficientsMatchInnerProducts) {
  const Fixture s = make_fixture(GetParam().bc, GetParam().gram, 5, 27);
  Rng rng(28);
  const ParameterPoint mu = sample_toycore(1, 29).front();
  const Vector c = random_vector(5, rng);
  const ParametricPencil p = assemble_parametric(*s.fam, mu);
  const Vector u = s.basis.V * c;
  const Vector Au = p.A * u, Bu = p.B * u;
  const double a2 = Au.dot(s.fam->X.solve(Au));
  const double a1 = -2.0 * Au.dot(s.fam->X.solve(Bu));
  const double a0 = Bu.dot(s.fam->X.solve(Bu));
  const ResidualQuadratic q = s.factors.quadratic(mu, c, ResidualSide::direct);
  EXPECT_LT(rel_diff(q.a2, a2), 1e-10);
  EXPECT_LT(rel_diff(q.a1, a1), 1e-10);
  EXPECT_LT(rel_diff(q.a0, a0), 1e-10);
}

INSTANTIATE_TEST_SUITE_P(GeometriesAndNorms, ResidualOracle,
                         ::testing::Values(Case{BoundaryCondition::dirichlet, GramKind::identity},
                                           Case{BoundaryCondition::dirichlet, GramKind::mass},
                                           Case{BoundaryCondition::robin, GramKind::identity},
                                           Case{BoundaryCondition::robin, GramKind::mass}));

TEST(Residual, HomogeneityAndZero) {
  const Fixture s = make_fixture(BoundaryCondition::robin, GramKind::identity, 4, 37);
  const ParameterPoint mu = sample_toycore(1, 38).front();
  Rng rng(39);
  const Vector c = random_vector(4, rng);
  const double base = s.factors.online_norm(mu, c, 1.3);
  EXPECT_NEAR(s.factors.online_norm(mu, -3.0 * c, 1.3), 3.0 * base, 1e-12 * base);
  EXPECT_EQ(s.factors.online_norm(mu, Vector::Zero(4), 1.3), 0.0);
}

TEST(Residual, ClassicalBlockSymmetries) {
  const Fixture s = make_fixture(BoundaryCondition::robin, GramKind::mass, 3, 47);
  const Matrix Fbc = s.factors.F_bc();
  EXPECT_LT((Fbc - Fbc.transpose()).norm(), 1e-14 * Fbc.norm());
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l)
      for (int p = 0; p < 6; ++p)
        for (int pp = 0; pp < 6; ++pp)
          EXPECT_LE((s.factors.D(k, l, p, pp) - s.factors.D(l, k, pp, p).transpose()).norm(),
                    1e-14 * std::max(1.0, s.factors.D(k, l, p, pp).norm()));
  // Diagonal subdomains share one node only.
  const Matrix& V = s.basis.V;
  const Matrix direct = (s.fam->A[0][1] * V).transpose() * s.fam->X.solve(Matrix(s.fam->A[3][1] * V));
  EXPECT_LT((s.factors.D(0, 3, 1, 1) - direct).norm(), 1e-12 * std::max(1.0, direct.norm()));
}

TEST(Residual, SingleComponentReducesToPlainProduct) {
  // K = 1, X = I, an identity A-component, orthonormal V: the D block is I.
  AffineOperatorFamily fam;
  fam.dofs_per_group = 5;
  const Index n = 10;
  SparseMatrix I(n, n);
  I.setIdentity();
  fam.A.resize(1);
  fam.B.resize(1);
  for (auto& a : fam.A[0]) a = SparseMatrix(n, n);
  for (auto& b : fam.B[0]) b = SparseMatrix(n, n);
  fam.A[0][0] = I;
  fam.M_bc = SparseMatrix(n, n);
  fam.X = GramOperator::identity(n);
  fam.mass = I;
  Rng rng(57);
  const ReducedBasis b = orthonormalize({random_vector(n, rng), random_vector(n, rng)}, fam.X);
  const ResidualFactorization f = ResidualFactorization::precompute(fam, b.V);
  EXPECT_LT((f.D(0, 0, 0, 0) - Matrix::Identity(2, 2)).norm(), 1e-14);
  EXPECT_EQ(f.dictionary_size(), 1u);
}

TEST(Residual, ExtendKeepsOldBlocksAsLeadingSubmatrices) {
  const auto fam = small_toy_family(6, BoundaryCondition::robin, GramKind::mass);
  Rng rng(67);
  std::vector<Vector> v;
  for (int i = 0; i < 6; ++i) v.push_back(random_vector(fam->size(), rng));
  const ReducedBasis small = orthonormalize({v.begin(), v.begin() + 4}, fam->X);
  const ReducedBasis big = orthonormalize(v, fam->X);
  ResidualFactorization grown = ResidualFactorization::precompute(*fam, small.V);
  const Matrix old = grown.D(1, 1, 0, 3);
  grown.extend(*fam, big.V);
  const ResidualFactorization fresh = ResidualFactorization::precompute(*fam, big.V);
  EXPECT_EQ(grown.dim(), 6);
  EXPECT_EQ(Matrix(grown.D(1, 1, 0, 3).topLeftCorner(4, 4)), old);
  EXPECT_LT((grown.E(2, 2, 5, 3) - fresh.E(2, 2, 5, 3)).norm(), 1e-12 * std::max(1.0, fresh.E(2, 2, 5, 3).norm()));
  const ParameterPoint mu = sample_toycore(1, 68).front();
  const Vector c = random_vector(6, rng);
  EXPECT_LT(rel_diff(grown.online_norm(mu, c, 1.1), fresh.online_norm(mu, c, 1.1)), 1e-12);
}

TEST(Residual, SaveLoadAndVersionCheck) {
  const Fixture s = make_fixture(BoundaryCondition::dirichlet, GramKind::identity, 3, 77);
  const fs::path dir = fs::temp_directory_path() / "rbeig_test_factors";
  fs::remove_all(dir);
  s.factors.save(dir);
  const ResidualFactorization back = ResidualFactorization::load(dir);
  const ParameterPoint mu = sample_toycore(1, 78).front();
  const Vector c = Vector::LinSpaced(3, 1.0, 2.0);
  EXPECT_EQ(back.online_norm(mu, c, 0.9), s.factors.online_norm(mu, c, 0.9));
  EXPECT_EQ(back.stored_blocks(), s.factors.stored_blocks());

  std::string text;
  {
    std::ifstream in(dir / "manifest.json");
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  const auto pos = text.find("\"format_version\": 1");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 19, "\"format_version\": 9");
  std::ofstream(dir / "manifest.json") << text;
  EXPECT_THROW(ResidualFactorization::load(dir), ArtifactVersionMismatch);
}

TEST(Residual, OnlineEstimateAgreesWithLiftedResiduals) {
  const Fixture s = make_fixture(BoundaryCondition::robin, GramKind::identity, 6, 87);
  const ReducedOperators ops = ReducedOperators::project(*s.fam, s.basis.V);
  const ParameterPoint mu = sample_toycore(1, 88).front();
  const OnlineEstimate e = online_estimate(ops, s.factors, s.basis.V, mu, PowerIterationSettings{}, true);
  const ParametricPencil p = assemble_parametric(*s.fam, mu);
  const ResidualPair r = residuals(p.A, p.B, e.rb.u_N, e.rb.u_star_N, e.rb.k_N, s.fam->X);
  EXPECT_LT(rel_diff(e.norm_R, r.norm_R), 1e-8);
  EXPECT_LT(rel_diff(e.norm_R_star, r.norm_R_star), 1e-8);
  EXPECT_LT(rel_diff(e.eta_k, eta_k(r, e.rb.u_N, e.rb.u_star_N, p.A)), 1e-8);
}
