#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "rbeig/greedy/greedy.hpp"
#include "rbeig/hifi/assembly.hpp"
#include "rbeig/hifi/mesh.hpp"

namespace rbeig::app {

enum class ProblemKind { toycore, synthetic_minicore, external };

std::string to_string(ProblemKind p);
ProblemKind parse_problem(const std::string& name);

/// Everything a run needs. All randomness flows from `seed` (parameter
/// sets) and `solver.seed` (power-iteration start vectors).
struct RunConfig {
  ProblemKind problem = ProblemKind::toycore;
  int cells_per_side = 30;
  BoundaryCondition bc = BoundaryCondition::dirichlet;
  std::string external_A;  ///< Matrix Market paths, problem = external only
  std::string external_B;

  std::size_t n_train = 300;
  std::size_t n_test = 50;
  std::size_t n_pref = 10;
  std::uint64_t seed = 2024;

  double tolerance = 1e-12;
  Selector selector = Selector::eta_k;
  Index max_dim = 150;
  int pod_snapshots = 1;
  Index pod_dim = 2;

  double tau_u = 1e-6;
  double tau_lambda = 1e-7;
  int max_iterations = 10000;
  std::uint64_t solver_seed = 0;

  GramKind norm = GramKind::identity;
  FissionOperator fission = FissionOperator::assembled;

  Index curve_step = 10;  ///< basis sizes reported in error curves
  unsigned workers = 1;
  std::string output_dir = "rbeig_out";

  /// Defaults of a problem: toy core as above; minicore uses 35 cells,
  /// Robin boundary, residual_sum selection and a 5 + 5 -> 10 POD start.
  static RunConfig defaults(ProblemKind problem);

  PowerIterationSettings solver_settings() const;
  GreedyConfig greedy_config() const;
  void validate() const;
};

/// Missing keys take the defaults of the given problem; unknown keys are a
/// ConfigError.
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& c);

RunConfig load_config(const std::filesystem::path& path);
void save_config(const std::filesystem::path& path, const RunConfig& c);

}  // namespace rbeig::app
