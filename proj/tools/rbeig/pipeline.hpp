#pragma once

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rbeig/estimators/calibration.hpp"
#include "rbeig/greedy/error_curves.hpp"
#include "rbeig/greedy/greedy.hpp"
#include "rbeig/hifi/sampling.hpp"
#include "run_config.hpp"

namespace rbeig::app {

inline constexpr int kArtifactFormatVersion = 1;

std::shared_ptr<const AffineOperatorFamily> build_family(const RunConfig& cfg);
ParameterSets build_sets(const RunConfig& cfg);

/// Median wall time of `reps` calls (reps >= 1).
template <class Fn>
double median_seconds(int reps, Fn&& fn);

/// In-memory result of an offline run.
struct OfflineRun {
  RunConfig config;
  std::shared_ptr<const AffineOperatorFamily> family;
  ParameterSets sets;
  GreedyResult greedy;
  std::optional<ReferenceSolutions> pref;
  std::optional<CalibrationSet> calibration;
  double offline_seconds = 0.0;  ///< greedy + P_pref solves + calibration
  double hf_seconds = 0.0;       ///< median HF solve on the first test parameter
};

OfflineRun offline(const RunConfig& cfg, std::ostream& log);

/// Writes config.json, manifest.json, params_{train,test,pref}.csv, basis/,
/// operators/, factors/, trace.csv, trace_timing.csv and calibration.csv.
void save_offline(const OfflineRun& run, const std::filesystem::path& dir);

/// What the online stage needs; nothing here has an HF solver attached.
struct Artifacts {
  RunConfig config;
  ReducedBasis basis;
  ReducedOperators ops;
  ResidualFactorization factors;
  bool calibrated = false;
  double C_k = 0.0, C_u = 0.0, C_ustar = 0.0;
  double offline_seconds = 0.0;
  double hf_seconds = 0.0;
  std::vector<ParameterPoint> test;
};

Artifacts to_artifacts(const OfflineRun& run);
/// Throws ArtifactVersionMismatch when the manifest version differs.
Artifacts load_artifacts(const std::filesystem::path& dir);

struct OnlineOptions {
  int reps = 5;
  bool verify = false;  ///< also solve HF at every parameter
  Index dim = 0;        ///< leading basis vectors to use; 0 means all
};

struct OnlineRow {
  std::size_t point = 0;
  double k_N = 0, lambda_N = 0, eta_k = 0, delta_k = 0, norm_R = 0, norm_R_star = 0;
  double t_rb = 0;
  double k_hf = 0, e_k = 0, t_hf = 0;  ///< NaN unless verifying
  bool reproducible = true;             ///< a fresh reduced solve gives the same k_N bit for bit
};

struct OnlineReport {
  std::vector<OnlineRow> rows;
  Index dim = 0;
  long hf_factorizations = 0;  ///< sparse LU factorizations during the timed online loop
  double median_t_rb = 0.0;
  double t_hf = 0.0;
  double speedup = 0.0;
  double break_even = 0.0;  ///< t_offline / (t_HF - t_RB); +inf when t_HF <= t_RB
};

OnlineReport online(const Artifacts& art, const std::vector<ParameterPoint>& params, const OnlineOptions& opt);
void write_online_csv(const std::filesystem::path& path, const OnlineReport& report);

struct VerifyReport {
  std::size_t points = 0;
  double max_residual_mismatch = 0.0;  ///< relative, online vs direct norm
  bool reproducible = true;
  double max_e_k = 0.0;
  double max_eta_k = 0.0;
  bool ok() const { return reproducible && max_residual_mismatch <= 1e-8; }
};

/// Consistency checks against a rebuilt HF family.
VerifyReport verify(const Artifacts& art, std::size_t points, std::ostream& log);

/// Greedy plus error curves over P_test (with calibration on P_pref).
struct ConvergenceRun {
  OfflineRun offline;
  ReferenceSolutions test;
  ErrorCurves curves;
  std::vector<double> eps_mu;  ///< perturbation magnitude of each test A_mu
};

ConvergenceRun convergence(const RunConfig& cfg, std::ostream& log);

/// perturbation4x4 | toycore_convergence | estimator_efficiency. Writes
/// CSVs and summary.json under `out`; throws UnknownStudy.
nlohmann::json run_study(const std::string& name, const std::optional<RunConfig>& cfg,
                         const std::filesystem::path& out, std::ostream& log);

RunConfig study_defaults(const std::string& name);

// -- implementation --

template <class Fn>
double median_seconds(int reps, Fn&& fn) {
  std::vector<double> t;
  for (int r = 0; r < std::max(1, reps); ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    t.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  std::sort(t.begin(), t.end());
  const std::size_t n = t.size();
  return n % 2 ? t[n / 2] : 0.5 * (t[n / 2 - 1] + t[n / 2]);
}

}  // namespace rbeig::app
