#include "rbeig/greedy/greedy.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "rbeig/errors.hpp"
#include "rbeig/estimators/estimators.hpp"
#include "rbeig/util/csv.hpp"
#include "rbeig/util/parallel.hpp"

namespace rbeig {

Selector parse_selector(const std::string& name) {
  if (name == "eta_k") return Selector::eta_k;
  if (name == "residual_sum") return Selector::residual_sum;
  if (name == "calibrated_k") return Selector::calibrated_k;
  if (name == "exact_error_k") return Selector::exact_error_k;
  if (name == "exact_error_u") return Selector::exact_error_u;
  throw ConfigError("unknown estimator selector '" + name + "'");
}

std::string to_string(Selector s) {
  switch (s) {
    case Selector::eta_k: return "eta_k";
    case Selector::residual_sum: return "residual_sum";
    case Selector::calibrated_k: return "calibrated_k";
    case Selector::exact_error_k: return "exact_error_k";
    case Selector::exact_error_u: return "exact_error_u";
  }
  return "?";
}

bool needs_training_sweep(Selector s) { return s == Selector::exact_error_k || s == Selector::exact_error_u; }

std::string to_string(Termination t) {
  switch (t) {
    case Termination::tolerance: return "tolerance";
    case Termination::dimension_cap: return "dimension_cap";
    case Termination::stalled: return "stalled";
  }
  return "?";
}

void GreedyConfig::validate() const {
  if (!(tolerance > 0.0)) throw ConfigError("greedy tolerance must be positive");
  if (max_dim < 1) throw ConfigError("max_dim must be positive");
  if (pod_snapshots < 1) throw ConfigError("pod_snapshots must be positive");
  if (pod_dim < 1 || pod_dim > 2 * pod_snapshots) throw ConfigError("pod_dim must lie in [1, 2 pod_snapshots]");
  reduced_settings.validate();
}

namespace {

using Clock = std::chrono::steady_clock;

struct Snapshots {
  std::vector<Vector> vectors;
  std::vector<SnapshotTag> tags;

  void add(const EigenSolution& s, long index) {
    vectors.push_back(s.u);
    tags.push_back({"train", index, SnapshotKind::direct});
    vectors.push_back(s.u_star);
    tags.push_back({"train", index, SnapshotKind::adjoint});
  }
};

}  // namespace

GreedyResult greedy_build(const HighFidelitySolver& hf, const std::vector<ParameterPoint>& train,
                          const GreedyConfig& config, const ReferenceSolutions* pref) {
  config.validate();
  if (train.empty()) throw ConfigError("empty training set");
  if (config.selector == Selector::calibrated_k && pref == nullptr) {
    throw ConfigError("calibrated_k selection needs a P_pref reference set");
  }
  const auto& family = hf.family();
  const auto& X = family.X;
  const unsigned workers = config.workers;
  const long solves_before = hf.solves();

  // Ideal greedy: the whole training set is solved once.
  std::vector<EigenSolution> train_hf;
  if (needs_training_sweep(config.selector)) train_hf = compute_reference(hf, train, workers).solutions;
  auto hf_at = [&](std::size_t i) { return train_hf.empty() ? hf.solve(train[i]) : train_hf[i]; };

  GreedyResult out;
  Snapshots list;
  {
    std::vector<Vector> pod_in;
    const std::size_t n0 = std::min<std::size_t>(config.pod_snapshots, train.size());
    for (std::size_t i = 0; i < n0; ++i) {
      const EigenSolution s = hf_at(i);
      pod_in.push_back(s.u);
      pod_in.push_back(s.u_star);
    }
    const ReducedBasis pod = pod_compress(pod_in, X, std::min<Index>(config.pod_dim, pod_in.size()));
    for (Index j = 0; j < pod.dim(); ++j) {
      list.vectors.push_back(pod.V.col(j));
      list.tags.push_back({"pod", static_cast<long>(j), SnapshotKind::direct});
    }
  }

  auto rebuild = [&] {
    out.basis = orthonormalize(list.vectors, X, list.tags);
    out.ops = ReducedOperators::project(family, out.basis.V);
    if (out.factors.dim() == 0) {
      out.factors = ResidualFactorization::precompute(family, out.basis.V, workers);
    } else {
      out.factors.extend(family, out.basis.V, workers);
    }
    if (config.selector == Selector::calibrated_k) {
      out.calibration = calibrate(*pref, out.ops, out.factors, out.basis.V, config.reduced_settings, workers);
    }
  };
  rebuild();

  std::map<long, double> selected_tau;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const bool lift = config.selector == Selector::exact_error_u;

  for (int n = 0;; ++n) {
    const auto t0 = Clock::now();
    const std::size_t m = train.size();
    std::vector<double> delta(m, nan);
    std::vector<char> failed(m, 0);
    parallel_for(m, workers, [&](std::size_t i) {
      try {
        const OnlineEstimate e =
            online_estimate(out.ops, out.factors, out.basis.V, train[i], config.reduced_settings, lift);
        switch (config.selector) {
          case Selector::eta_k: delta[i] = e.eta_k; break;
          case Selector::residual_sum: delta[i] = e.norm_R + e.norm_R_star; break;
          case Selector::calibrated_k: delta[i] = out.calibration->delta_k(e.eta_k); break;
          case Selector::exact_error_k: delta[i] = std::abs(e.rb.k_N - train_hf[i].k); break;
          case Selector::exact_error_u: delta[i] = aligned_distance(e.rb.u_N, train_hf[i].u); break;
        }
      } catch (const ReducedNotConverged&) {
        failed[i] = 1;
      } catch (const DegeneratePairing&) {
        failed[i] = 1;
      }
    });

    GreedyIteration rec;
    rec.n = n;

    // Fallback: parameters without a usable reduced solution become snapshots.
    for (std::size_t i = 0; i < m; ++i) {
      if (failed[i] && !selected_tau.count(static_cast<long>(i))) rec.promoted.push_back(static_cast<long>(i));
    }
    bool stuck_failure = false;
    for (std::size_t i = 0; i < m; ++i) stuck_failure |= failed[i] && selected_tau.count(static_cast<long>(i));

    long winner = -1;
    double tau = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (failed[i]) continue;
      if (winner < 0 || delta[i] > tau) {
        winner = static_cast<long>(i);
        tau = delta[i];
      }
    }
    rec.tau = rec.promoted.empty() ? tau : std::numeric_limits<double>::infinity();
    out.final_tau = rec.tau;

    if (rec.promoted.empty()) {
      if (stuck_failure) {
        out.termination = Termination::stalled;
        out.diagnostics = "reduced solve keeps failing at an already selected parameter";
        break;
      }
      if (tau <= config.tolerance) {
        out.termination = Termination::tolerance;
        break;
      }
      if (out.basis.dim() >= config.max_dim) {
        out.termination = Termination::dimension_cap;
        out.diagnostics = "dimension cap " + std::to_string(config.max_dim) + " reached with tau = " +
                          format_double(tau);
        break;
      }
      const auto it = selected_tau.find(winner);
      if (it != selected_tau.end() && tau >= it->second) {
        out.termination = Termination::stalled;
        out.diagnostics = "argmax repeats parameter " + std::to_string(winner) + " with Delta " +
                          format_double(tau) + " >= " + format_double(it->second);
        break;
      }
      rec.selected = winner;
      selected_tau[winner] = tau;
      list.add(hf_at(static_cast<std::size_t>(winner)), winner);
    } else {
      if (out.basis.dim() >= config.max_dim) {
        out.termination = Termination::dimension_cap;
        out.diagnostics = "dimension cap reached while reduced solves were failing";
        break;
      }
      for (long i : rec.promoted) {
        selected_tau[i] = std::numeric_limits<double>::infinity();
        list.add(hf_at(static_cast<std::size_t>(i)), i);
      }
    }

    const Index dim_before = out.basis.dim();
    rebuild();
    rec.dim = out.basis.dim();
    if (rec.selected >= 0) {
      try {
        rec.eta_after = online_estimate(out.ops, out.factors, out.basis.V, train[rec.selected],
                                        config.reduced_settings)
                            .eta_k;
      } catch (const NumericalError&) {
        rec.eta_after = nan;
      }
    } else {
      rec.eta_after = nan;
    }
    rec.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    out.trace.push_back(rec);

    if (config.checkpoint_dir) {
      char name[32];
      std::snprintf(name, sizeof(name), "iter_%04d", n);
      save_basis(*config.checkpoint_dir / name, out.basis);
    }
    if (rec.dim == dim_before) {
      out.termination = Termination::stalled;
      out.diagnostics = "enrichment did not increase the basis dimension";
      break;
    }
  }

  out.hf_solves = hf.solves() - solves_before;
  return out;
}

void write_trace_csv(const std::filesystem::path& path, const std::vector<GreedyIteration>& trace,
                     bool with_timing) {
  std::vector<std::string> header{"iteration", "selected", "tau", "dim", "eta_after", "promoted"};
  if (with_timing) header.push_back("wall_seconds");
  CsvWriter w(path, header);
  for (const auto& r : trace) {
    std::string promoted;
    for (std::size_t i = 0; i < r.promoted.size(); ++i) promoted += (i ? ";" : "") + std::to_string(r.promoted[i]);
    w << r.n << static_cast<long long>(r.selected) << r.tau << static_cast<long long>(r.dim) << r.eta_after
      << promoted;
    if (with_timing) w << r.wall_seconds;
    w.end_row();
  }
}

}  // namespace rbeig
