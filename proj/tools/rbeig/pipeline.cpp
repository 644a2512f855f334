#include "pipeline.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

#include "rbeig/errors.hpp"
#include "rbeig/estimators/estimators.hpp"
#include "rbeig/estimators/perturbation.hpp"
#include "rbeig/util/csv.hpp"
#include "rbeig/util/parallel.hpp"

namespace rbeig::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void require_parametric(const RunConfig& cfg) {
  if (cfg.problem == ProblemKind::external) {
    throw ConfigError("external matrices carry no affine decomposition; use `verify --matrices` instead");
  }
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

// Tolerance-free json for NaN / inf.
json num(double v) { return std::isfinite(v) ? json(v) : json(format_double(v)); }

}  // namespace

std::shared_ptr<const AffineOperatorFamily> build_family(const RunConfig& cfg) {
  require_parametric(cfg);
  const CaseGeometry g = cfg.problem == ProblemKind::toycore ? toycore_geometry(cfg.cells_per_side)
                                                             : minicore_geometry(cfg.cells_per_side);
  const Mesh2D mesh = build_mesh(g.L, g.cells_per_side, g.partition, cfg.bc);
  AssemblyOptions opt;
  opt.gram = cfg.norm;
  opt.fission = cfg.fission;
  return std::make_shared<const AffineOperatorFamily>(assemble_affine_family(mesh, opt));
}

ParameterSets build_sets(const RunConfig& cfg) {
  require_parametric(cfg);
  if (cfg.problem == ProblemKind::toycore) return toycore_sets(cfg.n_train, cfg.n_test, cfg.n_pref, cfg.seed);
  return minicore_sets(cfg.n_train, cfg.n_test, cfg.n_pref, cfg.seed);
}

OfflineRun offline(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  OfflineRun run;
  run.config = cfg;
  run.family = build_family(cfg);
  run.sets = build_sets(cfg);
  const HighFidelitySolver hf(run.family, cfg.solver_settings());
  log << "offline: " << to_string(cfg.problem) << ", " << run.family->size() << " dofs, " << run.sets.train.size()
      << " training parameters, selector " << to_string(cfg.selector) << '\n';

  const auto t0 = std::chrono::steady_clock::now();
  if (cfg.n_pref > 0) run.pref = compute_reference(hf, run.sets.pref, cfg.workers);
  run.greedy = greedy_build(hf, run.sets.train, cfg.greedy_config(), run.pref ? &*run.pref : nullptr);
  if (run.pref) {
    run.calibration = calibrate(*run.pref, run.greedy.ops, run.greedy.factors, run.greedy.basis.V,
                                cfg.solver_settings(), cfg.workers);
    for (const auto& w : run.calibration->warnings) log << "warning: " << w << '\n';
  }
  run.offline_seconds = seconds_since(t0);
  run.hf_seconds = median_seconds(5, [&] { hf.solve(run.sets.test.front()); });

  log << "offline: N = " << run.greedy.basis.dim() << ", " << run.greedy.trace.size() << " iterations, stop: "
      << to_string(run.greedy.termination) << " (tau = " << run.greedy.final_tau << ")";
  if (!run.greedy.diagnostics.empty()) log << " - " << run.greedy.diagnostics;
  log << "\noffline: " << run.offline_seconds << " s, HF solve " << run.hf_seconds << " s\n";
  if (run.greedy.termination == Termination::dimension_cap) {
    log << "warning: dimension cap reached before the tolerance\n";
  }
  return run;
}

void save_offline(const OfflineRun& run, const fs::path& dir) {
  fs::create_directories(dir);
  save_config(dir / "config.json", run.config);
  write_parameters_csv(dir / "params_train.csv", run.sets.train);
  write_parameters_csv(dir / "params_test.csv", run.sets.test);
  if (!run.sets.pref.empty()) write_parameters_csv(dir / "params_pref.csv", run.sets.pref);
  save_basis(dir / "basis", run.greedy.basis);
  save_reduced_operators(dir / "operators", run.greedy.ops);
  run.greedy.factors.save(dir / "factors");
  write_trace_csv(dir / "trace.csv", run.greedy.trace);
  write_trace_csv(dir / "trace_timing.csv", run.greedy.trace, true);
  if (run.calibration) write_calibration_csv(dir / "calibration.csv", *run.calibration);

  json m;
  m["format_version"] = kArtifactFormatVersion;
  m["dim"] = run.greedy.basis.dim();
  m["ambient_dim"] = run.greedy.basis.ambient_dim();
  m["termination"] = to_string(run.greedy.termination);
  m["diagnostics"] = run.greedy.diagnostics;
  m["final_tau"] = num(run.greedy.final_tau);
  m["hf_solves"] = run.greedy.hf_solves;
  m["offline_seconds"] = run.offline_seconds;
  m["hf_seconds"] = run.hf_seconds;
  m["calibrated"] = run.calibration.has_value();
  if (run.calibration) {
    m["C_k"] = num(run.calibration->C_k);
    m["C_u"] = num(run.calibration->C_u);
    m["C_ustar"] = num(run.calibration->C_ustar);
  }
  m["csv_schemas"] = {
      {"trace.csv", {"iteration", "selected", "tau", "dim", "eta_after", "promoted"}},
      {"calibration.csv", {"point", "E_k", "E_u", "E_ustar", "skipped"}},
      {"online.csv",
       {"point", "k_N", "lambda_N", "delta_k", "eta_k", "norm_R", "norm_R_star", "t_rb", "k_hf", "e_k", "t_hf"}}};
  write_json(dir / "manifest.json", m);
}

Artifacts to_artifacts(const OfflineRun& run) {
  Artifacts a;
  a.config = run.config;
  a.basis = run.greedy.basis;
  a.ops = run.greedy.ops;
  a.factors = run.greedy.factors;
  a.calibrated = run.calibration.has_value();
  if (a.calibrated) {
    a.C_k = run.calibration->C_k;
    a.C_u = run.calibration->C_u;
    a.C_ustar = run.calibration->C_ustar;
  }
  a.offline_seconds = run.offline_seconds;
  a.hf_seconds = run.hf_seconds;
  a.test = run.sets.test;
  return a;
}

Artifacts load_artifacts(const fs::path& dir) {
  const json m = read_json(dir / "manifest.json");
  const int version = m.value("format_version", -1);
  if (version != kArtifactFormatVersion) {
    throw ArtifactVersionMismatch("artifact format_version " + std::to_string(version) + ", expected " +
                                  std::to_string(kArtifactFormatVersion));
  }
  Artifacts a;
  a.config = load_config(dir / "config.json");
  a.basis = load_basis(dir / "basis");
  a.ops = load_reduced_operators(dir / "operators");
  a.factors = ResidualFactorization::load(dir / "factors");
  if (a.ops.dim() != a.basis.dim() || a.factors.dim() != a.basis.dim()) {
    throw ConfigError("artifact pieces disagree on the basis dimension");
  }
  a.calibrated = m.at("calibrated").get<bool>();
  if (a.calibrated) {
    a.C_k = m.at("C_k").get<double>();
    a.C_u = m.at("C_u").get<double>();
    a.C_ustar = m.at("C_ustar").get<double>();
  }
  a.offline_seconds = m.at("offline_seconds").get<double>();
  a.hf_seconds = m.at("hf_seconds").get<double>();
  a.test = read_parameters_csv(dir / "params_test.csv");
  return a;
}

OnlineReport online(const Artifacts& art, const std::vector<ParameterPoint>& params, const OnlineOptions& opt) {
  const Index N = opt.dim > 0 ? std::min(opt.dim, art.basis.dim()) : art.basis.dim();
  const ReducedOperators ops = art.ops.truncated(N);
  const Matrix V = art.basis.V.leftCols(N);
  const PowerIterationSettings s = art.config.solver_settings();

  OnlineReport rep;
  rep.dim = N;
  rep.rows.resize(params.size());
  const long fact0 = sparse_factorization_count();
  for (std::size_t i = 0; i < params.size(); ++i) {
    OnlineRow& r = rep.rows[i];
    r.point = i;
    OnlineEstimate e;
    r.t_rb = median_seconds(opt.reps, [&] { e = online_estimate(ops, art.factors, V, params[i], s); });
    r.k_N = e.rb.k_N;
    r.lambda_N = e.rb.lambda_N;
    r.eta_k = e.eta_k;
    r.delta_k = art.calibrated ? art.C_k * e.eta_k : kNaN;
    r.norm_R = e.norm_R;
    r.norm_R_star = e.norm_R_star;
    r.reproducible = solve_reduced(ops, V, params[i], s, false).k_N == e.rb.k_N;
    r.k_hf = r.e_k = r.t_hf = kNaN;
  }
  rep.hf_factorizations = sparse_factorization_count() - fact0;

  std::vector<double> t;
  for (const auto& r : rep.rows) t.push_back(r.t_rb);
  std::sort(t.begin(), t.end());
  rep.median_t_rb = t.empty() ? kNaN : t[t.size() / 2];

  rep.t_hf = art.hf_seconds;
  if (opt.verify) {
    const HighFidelitySolver hf(build_family(art.config), s);
    std::vector<double> th;
    for (std::size_t i = 0; i < params.size(); ++i) {
      OnlineRow& r = rep.rows[i];
      EigenSolution sol;
      r.t_hf = median_seconds(opt.reps, [&] { sol = hf.solve(params[i]); });
      r.k_hf = sol.k;
      r.e_k = std::abs(r.k_N - sol.k);
      th.push_back(r.t_hf);
    }
    std::sort(th.begin(), th.end());
    if (!th.empty()) rep.t_hf = th[th.size() / 2];
  }
  rep.speedup = rep.t_hf / rep.median_t_rb;
  rep.break_even = rep.t_hf > rep.median_t_rb ? art.offline_seconds / (rep.t_hf - rep.median_t_rb)
                                               : std::numeric_limits<double>::infinity();
  return rep;
}

void write_online_csv(const fs::path& path, const OnlineReport& report) {
  CsvWriter w(path,
              {"point", "k_N", "lambda_N", "delta_k", "eta_k", "norm_R", "norm_R_star", "t_rb", "k_hf", "e_k", "t_hf"});
  for (const auto& r : report.rows) {
    w << r.point << r.k_N << r.lambda_N << r.delta_k << r.eta_k << r.norm_R << r.norm_R_star << r.t_rb << r.k_hf
      << r.e_k << r.t_hf;
    w.end_row();
  }
}

VerifyReport verify(const Artifacts& art, std::size_t points, std::ostream& log) {
  const auto family = build_family(art.config);
  const PowerIterationSettings s = art.config.solver_settings();
  const HighFidelitySolver hf(family, s);
  const Matrix& V = art.basis.V;
  VerifyReport rep;
  rep.points = std::min(points, art.test.size());
  for (std::size_t i = 0; i < rep.points; ++i) {
    const ParameterPoint& mu = art.test[i];
    const OnlineEstimate e = online_estimate(art.ops, art.factors, V, mu, s);
    rep.reproducible &= solve_reduced(art.ops, V, mu, s, false).k_N == e.rb.k_N;

    const ParametricPencil pm = assemble_parametric(*family, mu);
    const Vector u = V * e.rb.c, us = V * e.rb.c_star;
    const ResidualPair direct = residuals(pm.A, pm.B, u, us, e.rb.k_N, family->X);
    const double m1 = std::abs(direct.norm_R - e.norm_R) / std::max(direct.norm_R, 1e-300);
    const double m2 = std::abs(direct.norm_R_star - e.norm_R_star) / std::max(direct.norm_R_star, 1e-300);
    rep.max_residual_mismatch = std::max({rep.max_residual_mismatch, m1, m2});

    const EigenSolution sol = hf.solve(mu);
    const double ek = std::abs(sol.k - e.rb.k_N);
    rep.max_e_k = std::max(rep.max_e_k, ek);
    rep.max_eta_k = std::max(rep.max_eta_k, e.eta_k);
    log << "verify " << i << ": k_N = " << format_double(e.rb.k_N) << ", k = " << format_double(sol.k)
        << ", e_k = " << ek << ", eta_k = " << e.eta_k << ", residual mismatch " << std::max(m1, m2) << '\n';
  }
  return rep;
}

ConvergenceRun convergence(const RunConfig& cfg, std::ostream& log) {
  ConvergenceRun run;
  run.offline = offline(cfg, log);
  const HighFidelitySolver hf(run.offline.family, cfg.solver_settings());
  run.test = compute_reference(hf, run.offline.sets.test, cfg.workers);
  const Index dim = run.offline.greedy.basis.dim();
  const std::vector<Index> Ns = size_grid(std::min<Index>(cfg.curve_step, dim), dim, cfg.curve_step);
  run.curves = evaluate_error_curves(run.offline.greedy.basis.V, run.offline.greedy.ops, run.offline.greedy.factors,
                                     run.test, Ns, cfg.solver_settings(),
                                     run.offline.pref ? &*run.offline.pref : nullptr, cfg.workers);
  run.eps_mu.resize(run.test.params.size());
  parallel_for(run.eps_mu.size(), cfg.workers, [&](std::size_t i) {
    run.eps_mu[i] = perturbation_magnitude(assemble_parametric(*run.offline.family, run.test.params[i]).A);
  });
  return run;
}

RunConfig study_defaults(const std::string& name) {
  if (name == "toycore_convergence") {
    RunConfig c = RunConfig::defaults(ProblemKind::toycore);
    c.max_dim = 100;
    return c;
  }
  if (name == "estimator_efficiency") {
    RunConfig c = RunConfig::defaults(ProblemKind::synthetic_minicore);
    c.max_dim = 100;
    return c;
  }
  if (name == "perturbation4x4") return RunConfig::defaults(ProblemKind::toycore);
  throw UnknownStudy("unknown study '" + name + "' (perturbation4x4, toycore_convergence, estimator_efficiency)");
}

namespace {

json curves_summary(const ConvergenceRun& run) {
  const auto& rows = run.curves.rows;
  json s;
  s["dim"] = run.offline.greedy.basis.dim();
  s["termination"] = to_string(run.offline.greedy.termination);
  s["offline_seconds"] = run.offline.offline_seconds;
  s["first_N"] = rows.front().N;
  s["first_mean_e_k_rel"] = num(rows.front().mean_e_k_rel);
  s["last_N"] = rows.back().N;
  s["last_mean_e_k_rel"] = num(rows.back().mean_e_k_rel);
  s["last_mean_e_u"] = num(rows.back().mean_e_u);
  s["orders_of_magnitude"] = num(std::log10(rows.front().mean_e_k_rel / rows.back().mean_e_k_rel));
  s["last_coverage_k"] = num(rows.back().coverage_k);
  s["last_C_k"] = num(rows.back().C_k);
  double eta_max = 0.0;
  for (const auto& it : run.offline.greedy.trace)
    if (it.selected >= 0 && std::isfinite(it.eta_after)) eta_max = std::max(eta_max, it.eta_after);
  s["max_selected_eta_after"] = eta_max;
  if (!run.eps_mu.empty()) {
    s["eps_mu_min"] = *std::min_element(run.eps_mu.begin(), run.eps_mu.end());
    s["eps_mu_max"] = *std::max_element(run.eps_mu.begin(), run.eps_mu.end());
  }
  return s;
}

void write_curves(const ConvergenceRun& run, const fs::path& out) {
  write_error_curves_csv(out / "error_curves.csv", run.curves.rows);
  write_error_points_csv(out / "error_points.csv", run.curves.points);
  write_trace_csv(out / "trace.csv", run.offline.greedy.trace);
  if (run.offline.calibration) write_calibration_csv(out / "calibration.csv", *run.offline.calibration);
  CsvWriter w(out / "perturbation_magnitude.csv", {"point", "eps_mu"});
  for (std::size_t i = 0; i < run.eps_mu.size(); ++i) {
    w << i << run.eps_mu[i];
    w.end_row();
  }
}

}  // namespace

json run_study(const std::string& name, const std::optional<RunConfig>& cfg, const fs::path& out, std::ostream& log) {
  const RunConfig c = cfg ? *cfg : study_defaults(name);
  fs::create_directories(out);
  json summary;
  summary["study"] = name;

  if (name == "perturbation4x4") {
    const auto t0 = std::chrono::steady_clock::now();
    const PerturbationExample ex = four_by_four_example();
    const auto rows = perturbation_study(ex.S, ex.T, log_grid(1e-6, 1e-2, 12), ex.k_N);
    write_perturbation_csv(out / "perturbation.csv", rows);
    summary["slope"] = num(fit_loglog_slope(rows));
    summary["C_sym"] = rows.front().C_sym;
    summary["points"] = rows.size();
    summary["seconds"] = seconds_since(t0);
    log << "perturbation4x4: slope " << summary["slope"] << '\n';
  } else if (name == "toycore_convergence" || name == "estimator_efficiency") {
    const ConvergenceRun run = convergence(c, log);
    write_curves(run, out);
    save_config(out / "config.json", c);
    summary.update(curves_summary(run));
    log << name << ": mean e_k,rel " << format_double(run.curves.rows.front().mean_e_k_rel) << " at N = "
        << run.curves.rows.front().N << ", " << format_double(run.curves.rows.back().mean_e_k_rel) << " at N = "
        << run.curves.rows.back().N << "; coverage of C_k eta_k: " << format_double(run.curves.rows.back().coverage_k)
        << '\n';
  } else {
    throw UnknownStudy("unknown study '" + name + "'");
  }
  write_json(out / "summary.json", summary);
  return summary;
}

}  // namespace rbeig::app
