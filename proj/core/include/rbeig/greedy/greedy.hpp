#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rbeig/estimators/calibration.hpp"
#include "rbeig/hifi/hifi_solver.hpp"
#include "rbeig/residual/residual_factors.hpp"
#include "rbeig/rom/basis.hpp"
#include "rbeig/rom/reduced_model.hpp"

namespace rbeig {

enum class Selector { eta_k, residual_sum, calibrated_k, exact_error_k, exact_error_u };

/// Throws ConfigError on an unknown name.
Selector parse_selector(const std::string& name);
std::string to_string(Selector s);

/// True for the ideal-greedy selectors that need an HF sweep of P_train.
bool needs_training_sweep(Selector s);

struct GreedyConfig {
  double tolerance = 1e-12;
  Selector selector = Selector::eta_k;
  Index max_dim = 150;
  /// POD start: HF solves at the first `pod_snapshots` training parameters,
  /// direct and adjoint, compressed to `pod_dim` vectors.
  int pod_snapshots = 1;
  Index pod_dim = 2;
  unsigned workers = 1;
  PowerIterationSettings reduced_settings;
  /// Per-iteration basis checkpoints go to iter_NNNN/ below this directory.
  std::optional<std::filesystem::path> checkpoint_dir;

  void validate() const;
};

struct GreedyIteration {
  int n = 0;
  long selected = -1;    ///< training index, -1 for a fallback-only step
  double tau = 0.0;      ///< max estimator over P_train before enrichment
  Index dim = 0;         ///< basis dimension after enrichment
  double eta_after = 0.0;  ///< eta_k at the selected parameter after enrichment
  std::vector<long> promoted;  ///< parameters added because their reduced solve failed
  double wall_seconds = 0.0;
};

enum class Termination { tolerance, dimension_cap, stalled };
std::string to_string(Termination t);

struct GreedyResult {
  ReducedBasis basis;
  ReducedOperators ops;
  ResidualFactorization factors;
  std::vector<GreedyIteration> trace;
  Termination termination = Termination::tolerance;
  std::string diagnostics;
  double final_tau = 0.0;
  std::optional<CalibrationSet> calibration;
  long hf_solves = 0;  ///< HF solves issued by the loop, excluding P_pref
};

/// Estimator-driven greedy. `pref` is required for Selector::calibrated_k
/// and is calibrated against once per enrichment with HF solutions computed
/// up front. Estimator selectors only solve at the POD parameters and at the
/// argmax winners (plus fallback promotions).
GreedyResult greedy_build(const HighFidelitySolver& hf, const std::vector<ParameterPoint>& train,
                          const GreedyConfig& config, const ReferenceSolutions* pref = nullptr);

/// Columns: iteration, selected, tau, dim, eta_after, promoted, and
/// wall_seconds when asked for. Without timing the file is reproducible
/// byte for byte.
void write_trace_csv(const std::filesystem::path& path, const std::vector<GreedyIteration>& trace,
                     bool with_timing = false);

}  // namespace rbeig
