#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pipeline.hpp"
#include "rbeig/errors.hpp"
#include "rbeig/linalg/dense_eig.hpp"
#include "rbeig/linalg/matrix_io.hpp"
#include "rbeig/util/csv.hpp"

namespace fs = std::filesystem;
using namespace rbeig;
using app::OnlineOptions;

namespace {

enum Exit { kOk = 0, kInputError = 1, kNumericalFailure = 2 };

int verify_matrices(const fs::path& a_path, const fs::path& b_path, const PowerIterationSettings& s) {
  const SparseMatrix A = read_mtx(a_path);
  const SparseMatrix B = read_mtx(b_path);
  const EigenSolution sol = solve_eigenpair(A, B, s);
  std::cout << "k = " << format_double(sol.k) << ", lambda = " << format_double(sol.lambda) << " ("
            << sol.iterations_direct << " + " << sol.iterations_adjoint << " iterations)\n";
  if (A.rows() > 2000) {
    std::cout << "dense cross-check skipped (n = " << A.rows() << ")\n";
    return kOk;
  }
  const auto pairs = dense_eig_oracle(Matrix(A), Matrix(B));
  const double lambda = pairs.front().lambda.real();
  const double rel = std::abs(sol.lambda - lambda) / std::abs(lambda);
  std::cout << "dense oracle lambda = " << format_double(lambda) << ", relative difference " << rel << '\n';
  return rel <= 1e-6 ? kOk : kNumericalFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Reduced basis eigenvalue solver with a posteriori estimators"};
  cli.require_subcommand(1);
  unsigned workers = 0;
  cli.add_option("-j,--workers", workers, "Worker threads for parameter sweeps (overrides the config)");

  auto* off = cli.add_subcommand("offline", "Greedy training, residual factors and calibration");
  std::string off_config, off_output;
  off->add_option("-c,--config", off_config, "JSON run configuration")->required()->check(CLI::ExistingFile);
  off->add_option("-o,--output", off_output, "Artifact directory (default: output_dir of the config)");

  auto* on = cli.add_subcommand("online", "Reduced solves and estimators for a parameter file");
  std::string on_artifacts, on_params, on_output;
  OnlineOptions on_opt;
  on->add_option("-a,--artifacts", on_artifacts, "Artifact directory")->required()->check(CLI::ExistingDirectory);
  on->add_option("-p,--params", on_params, "Parameter CSV (default: the artifact test set)");
  on->add_option("-o,--output", on_output, "Result CSV (default: <artifacts>/online.csv)");
  on->add_option("--reps", on_opt.reps, "Timing repetitions per parameter")->check(CLI::PositiveNumber);
  on->add_option("--dim", on_opt.dim, "Use the leading N basis vectors");
  on->add_flag("--verify", on_opt.verify, "Also solve the high-fidelity problem at every parameter");

  auto* st = cli.add_subcommand("study", "Reproduce one of the figure data sets");
  std::string st_name, st_config, st_output = "study_out";
  st->add_option("name", st_name, "perturbation4x4 | toycore_convergence | estimator_efficiency")->required();
  st->add_option("-c,--config", st_config, "JSON run configuration overriding the study defaults")
      ->check(CLI::ExistingFile);
  st->add_option("-o,--output", st_output, "Output directory");

  auto* ve = cli.add_subcommand("verify", "Check artifacts against the high-fidelity model");
  std::string ve_artifacts, ve_config;
  std::vector<std::string> ve_matrices;
  std::size_t ve_points = 5;
  ve->add_option("-a,--artifacts", ve_artifacts, "Artifact directory")->check(CLI::ExistingDirectory);
  ve->add_option("-c,--config", ve_config, "Configuration with problem = external")->check(CLI::ExistingFile);
  ve->add_option("--matrices", ve_matrices, "A.mtx B.mtx")->expected(2)->check(CLI::ExistingFile);
  ve->add_option("--points", ve_points, "Number of test parameters to check");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return cli.exit(e) == 0 ? kOk : kInputError;
  }

  try {
    if (*off) {
      auto cfg = app::load_config(off_config);
      if (workers) cfg.workers = workers;
      const fs::path out = off_output.empty() ? fs::path(cfg.output_dir) : fs::path(off_output);
      const auto run = app::offline(cfg, std::cout);
      app::save_offline(run, out);
      std::cout << "artifacts written to " << out.string() << '\n';
    } else if (*on) {
      const auto art = app::load_artifacts(on_artifacts);
      const auto params = on_params.empty() ? art.test : read_parameters_csv(on_params);
      const auto rep = app::online(art, params, on_opt);
      const fs::path out = on_output.empty() ? fs::path(on_artifacts) / "online.csv" : fs::path(on_output);
      app::write_online_csv(out, rep);
      std::cout << "online: " << rep.rows.size() << " parameters at N = " << rep.dim << ", median t_RB "
                << rep.median_t_rb << " s, t_HF " << rep.t_hf << " s, speedup " << rep.speedup << '\n'
                << "online: HF factorizations during the online loop: " << rep.hf_factorizations << '\n'
                << "break-even: the offline stage pays off after " << std::ceil(rep.break_even)
                << " parameter evaluations\n";
      bool reproducible = true;
      for (const auto& r : rep.rows) reproducible &= r.reproducible;
      if (!reproducible || rep.hf_factorizations != 0) {
        std::cerr << "online path is not reproducible or touched the HF solver\n";
        return kNumericalFailure;
      }
    } else if (*st) {
      std::optional<app::RunConfig> cfg;
      if (!st_config.empty()) cfg = app::load_config(st_config);
      if (!cfg && workers) {
        cfg = app::study_defaults(st_name);
      }
      if (cfg && workers) cfg->workers = workers;
      const auto summary = app::run_study(st_name, cfg, st_output, std::cout);
      std::cout << summary.dump(2) << '\n';
    } else if (*ve) {
      if (!ve_matrices.empty() || !ve_config.empty()) {
        PowerIterationSettings s;
        fs::path a, b;
        if (!ve_config.empty()) {
          const auto cfg = app::load_config(ve_config);
          if (cfg.problem != app::ProblemKind::external) throw ConfigError("verify --config expects problem = external");
          s = cfg.solver_settings();
          a = cfg.external_A;
          b = cfg.external_B;
        } else {
          a = ve_matrices[0];
          b = ve_matrices[1];
        }
        return verify_matrices(a, b, s);
      }
      if (ve_artifacts.empty()) throw ConfigError("verify needs --artifacts, --matrices or --config");
      const auto art = app::load_artifacts(ve_artifacts);
      const auto rep = app::verify(art, ve_points, std::cout);
      std::cout << "verify: " << rep.points << " parameters, residual mismatch " << rep.max_residual_mismatch
                << ", max e_k " << rep.max_e_k << ", max eta_k " << rep.max_eta_k
                << (rep.reproducible ? "" : ", online solve NOT reproducible") << '\n';
      return rep.ok() ? kOk : kNumericalFailure;
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kOk;
}
