#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pipeline.hpp"
#include "rbeig/errors.hpp"
#include "run_config.hpp"

using namespace rbeig;
using namespace rbeig::app;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

RunConfig tiny_config() {
  RunConfig c = RunConfig::defaults(ProblemKind::toycore);
  c.cells_per_side = 8;
  c.n_train = 12;
  c.n_test = 3;
  c.n_pref = 3;
  c.max_dim = 8;
  c.curve_step = 2;
  return c;
}

}  // namespace

TEST(RunConfigTest, JsonRoundTrip) {
  RunConfig c = RunConfig::defaults(ProblemKind::synthetic_minicore);
  c.seed = 99;
  c.selector = Selector::calibrated_k;
  c.norm = GramKind::mass;
  const json j = config_to_json(c);
  EXPECT_EQ(config_to_json(config_from_json(j)), j);

  const fs::path p = fs::temp_directory_path() / "rbeig_test_config.json";
  save_config(p, c);
  EXPECT_EQ(config_to_json(load_config(p)), j);
}

TEST(RunConfigTest, PartialJsonKeepsDefaults) {
  const RunConfig c = config_from_json(json{{"problem", "toycore"}, {"max_dim", 40}});
  EXPECT_EQ(c.max_dim, 40);
  EXPECT_EQ(c.n_train, 300u);
  EXPECT_EQ(c.seed, 2024u);
}

TEST(RunConfigTest, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(config_from_json(json{{"max_dims", 40}}), ConfigError);
  EXPECT_THROW(config_from_json(json{{"selector", "largest"}}), ConfigError);
  RunConfig c = tiny_config();
  c.n_train = 0;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Studies, UnknownNameIsAnInputError) {
  EXPECT_THROW(study_defaults("toycore_divergence"), UnknownStudy);
  std::ostringstream log;
  EXPECT_THROW(run_study("nope", std::nullopt, fs::temp_directory_path() / "rbeig_nope", log), UnknownStudy);
}

TEST(Studies, PerturbationStudyWritesCsvAndSummary) {
  const fs::path out = fs::temp_directory_path() / "rbeig_test_study";
  fs::remove_all(out);
  std::ostringstream log;
  const json s = run_study("perturbation4x4", std::nullopt, out, log);
  EXPECT_TRUE(fs::exists(out / "perturbation.csv"));
  EXPECT_TRUE(fs::exists(out / "summary.json"));
  EXPECT_GE(s.at("slope").get<double>(), 1.8);
  EXPECT_LE(s.at("slope").get<double>(), 2.2);
}

class PipelineTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    std::ostringstream log;
    run_ = std::make_unique<OfflineRun>(offline(tiny_config(), log));
    dir_ = fs::temp_directory_path() / "rbeig_test_artifacts";
    fs::remove_all(dir_);
    save_offline(*run_, dir_);
  }
  static void TearDownTestSuite() { run_.reset(); }

  static inline std::unique_ptr<OfflineRun> run_;
  static inline fs::path dir_;
};

TEST_F(PipelineTest, ArtifactsRoundTrip) {
  for (const char* f : {"config.json", "manifest.json", "params_train.csv", "params_test.csv", "params_pref.csv",
                        "trace.csv", "calibration.csv"})
    EXPECT_TRUE(fs::exists(dir_ / f)) << f;
  const Artifacts a = load_artifacts(dir_);
  const Artifacts b = to_artifacts(*run_);
  EXPECT_EQ(a.basis.V, b.basis.V);
  EXPECT_EQ(a.test.size(), b.test.size());
  EXPECT_EQ(a.C_k, b.C_k);
  EXPECT_EQ(config_to_json(a.config), config_to_json(b.config));
}

TEST_F(PipelineTest, OnlineStagePerformsNoFactorizations) {
  const Artifacts a = load_artifacts(dir_);
  OnlineOptions opt;
  opt.reps = 2;
  const OnlineReport r = online(a, a.test, opt);
  EXPECT_EQ(r.hf_factorizations, 0);
  EXPECT_EQ(r.dim, a.basis.dim());
  ASSERT_EQ(r.rows.size(), a.test.size());
  for (const auto& row : r.rows) {
    EXPECT_TRUE(row.reproducible);
    EXPECT_GT(row.k_N, 0.0);
    EXPECT_TRUE(std::isnan(row.k_hf));
  }
  opt.dim = 4;
  EXPECT_EQ(online(a, a.test, opt).dim, 4);
}

TEST_F(PipelineTest, VerifyAgreesWithTheRebuiltFamily) {
  std::ostringstream log;
  const VerifyReport v = verify(load_artifacts(dir_), 3, log);
  EXPECT_TRUE(v.ok()) << log.str();
  EXPECT_EQ(v.points, 3u);
}

TEST_F(PipelineTest, VersionMismatchIsRejected) {
  const fs::path copy = fs::temp_directory_path() / "rbeig_test_artifacts_v9";
  fs::remove_all(copy);
  fs::copy(dir_, copy, fs::copy_options::recursive);
  json m;
  std::ifstream(copy / "manifest.json") >> m;
  m["format_version"] = 9;
  std::ofstream(copy / "manifest.json") << m.dump(1);
  EXPECT_THROW(load_artifacts(copy), ArtifactVersionMismatch);
}
