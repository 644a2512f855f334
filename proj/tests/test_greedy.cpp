#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rbeig/errors.hpp"
#include "rbeig/greedy/error_curves.hpp"
#include "rbeig/greedy/greedy.hpp"
#include "test_support.hpp"

using namespace rbeig;
using namespace rbeig::testing;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

GreedyConfig small_config(Index max_dim) {
  GreedyConfig c;
  c.max_dim = max_dim;
  return c;
}

}  // namespace

class GreedyTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    family_ = small_toy_family(8, BoundaryCondition::robin);
    const ParameterSets sets = toycore_sets(24, 6, 4, 7);
    train_ = sets.train;
    test_ = sets.test;
    pref_ = sets.pref;
  }

  HighFidelitySolver solver() const { return HighFidelitySolver(family_, PowerIterationSettings{}); }

  static inline std::shared_ptr<const AffineOperatorFamily> family_;
  static inline std::vector<ParameterPoint> train_, test_, pref_;
};

TEST_F(GreedyTest, BasesAreNestedAcrossDimensionCaps) {
  const HighFidelitySolver hf = solver();
  const GreedyResult small = greedy_build(hf, train_, small_config(6));
  const GreedyResult big = greedy_build(hf, train_, small_config(12));
  const Index d = small.basis.dim();
  ASSERT_LE(d, big.basis.dim());
  EXPECT_LT((big.basis.V.leftCols(d) - small.basis.V).cwiseAbs().maxCoeff(), 1e-10);
  const Matrix G = big.basis.V.transpose() * family_->X.apply(big.basis.V);
  EXPECT_LT((G - Matrix::Identity(G.rows(), G.cols())).norm(), 1e-10);
}

TEST_F(GreedyTest, TraceIsReproducibleByteForByte) {
  const fs::path dir = fs::temp_directory_path() / "rbeig_test_greedy";
  fs::create_directories(dir);
  GreedyConfig one = small_config(10);
  GreedyConfig two = one;
  two.workers = 2;
  const HighFidelitySolver hf = solver();
  write_trace_csv(dir / "a.csv", greedy_build(hf, train_, one).trace);
  write_trace_csv(dir / "b.csv", greedy_build(hf, train_, one).trace);
  write_trace_csv(dir / "c.csv", greedy_build(hf, train_, two).trace);
  EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
  EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "c.csv"));
}

TEST_F(GreedyTest, OnlyPodAndSelectedParametersAreSolved) {
  const HighFidelitySolver hf = solver();
  const GreedyConfig cfg = small_config(10);
  const GreedyResult r = greedy_build(hf, train_, cfg);
  long expected = cfg.pod_snapshots;
  for (const auto& it : r.trace) expected += (it.selected >= 0 ? 1 : 0) + static_cast<long>(it.promoted.size());
  EXPECT_EQ(r.hf_solves, expected);
  EXPECT_EQ(hf.solves(), expected);
  EXPECT_EQ(r.termination, Termination::dimension_cap);
  EXPECT_LE(r.basis.dim(), cfg.max_dim);
}

TEST_F(GreedyTest, SelectedParameterIsResolvedAfterEnrichment) {
  const HighFidelitySolver hf = solver();
  const GreedyResult r = greedy_build(hf, train_, small_config(12));
  ASSERT_FALSE(r.trace.empty());
  for (const auto& it : r.trace) {
    if (it.selected < 0) continue;
    EXPECT_LT(it.eta_after, 1e-8) << "iteration " << it.n;
    EXPECT_LT(it.eta_after, it.tau);
  }
}

TEST_F(GreedyTest, SingleTrainingParameterTerminates) {
  const HighFidelitySolver hf = solver();
  GreedyConfig cfg = small_config(20);
  cfg.tolerance = 1e-30;
  const GreedyResult r = greedy_build(hf, {train_.front()}, cfg);
  EXPECT_NE(r.termination, Termination::dimension_cap);
  EXPECT_LE(r.basis.dim(), 4);
}

TEST_F(GreedyTest, CalibratedSelectorRequiresReference) {
  const HighFidelitySolver hf = solver();
  GreedyConfig cfg = small_config(6);
  cfg.selector = Selector::calibrated_k;
  EXPECT_THROW(greedy_build(hf, train_, cfg), ConfigError);
  const ReferenceSolutions ref = compute_reference(hf, pref_);
  const GreedyResult r = greedy_build(hf, train_, cfg, &ref);
  ASSERT_TRUE(r.calibration.has_value());
  EXPECT_EQ(r.calibration->pref.size(), pref_.size());
}

TEST_F(GreedyTest, ErrorCurvesDecreaseWithTheBasisSize) {
  const HighFidelitySolver hf = solver();
  const GreedyResult r = greedy_build(hf, train_, small_config(16));
  const ReferenceSolutions test = compute_reference(hf, test_);
  const ReferenceSolutions pref = compute_reference(hf, pref_);
  const auto Ns = size_grid(2, r.basis.dim(), 4);
  const ErrorCurves c = evaluate_error_curves(r.basis.V, r.ops, r.factors, test, Ns, PowerIterationSettings{}, &pref);
  ASSERT_EQ(c.rows.size(), Ns.size());
  EXPECT_EQ(c.points.size(), Ns.size() * test_.size());
  for (const auto& row : c.rows) EXPECT_EQ(row.failures, 0u);
  EXPECT_LT(c.rows.back().mean_e_k_rel, 0.1 * c.rows.front().mean_e_k_rel);
  for (const auto& row : c.rows) {
    EXPECT_GE(row.coverage_k, 0.0);
    EXPECT_LE(row.coverage_k, 1.0);
  }
}

TEST(GreedyConfigTest, SelectorsAndValidation) {
  for (Selector s : {Selector::eta_k, Selector::residual_sum, Selector::calibrated_k, Selector::exact_error_k,
                     Selector::exact_error_u})
    EXPECT_EQ(parse_selector(to_string(s)), s);
  EXPECT_THROW(parse_selector("biggest"), ConfigError);
  EXPECT_TRUE(needs_training_sweep(Selector::exact_error_k));
  EXPECT_FALSE(needs_training_sweep(Selector::eta_k));
  GreedyConfig c;
  c.max_dim = 0;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(SizeGrid, IncludesUpperEnd) {
  EXPECT_EQ(size_grid(10, 100, 10).size(), 10u);
  EXPECT_EQ(size_grid(2, 7, 4), (std::vector<Index>{2, 6, 7}));
  EXPECT_THROW(size_grid(0, 5, 1), ConfigError);
}
