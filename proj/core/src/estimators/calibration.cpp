#include "rbeig/estimators/calibration.hpp"

#include <algorithm>
#include <cmath>

#include "rbeig/errors.hpp"
#include "rbeig/estimators/estimators.hpp"
#include "rbeig/util/csv.hpp"
#include "rbeig/util/parallel.hpp"

namespace rbeig {

ReferenceSolutions compute_reference(const HighFidelitySolver& hf, const std::vector<ParameterPoint>& params,
                                     unsigned workers) {
  ReferenceSolutions ref;
  ref.params = params;
  ref.solutions.resize(params.size());
  parallel_for(params.size(), workers, [&](std::size_t i) { ref.solutions[i] = hf.solve(params[i]); });
  return ref;
}

double aligned_distance(const Vector& a, const Vector& b) {
  return a.dot(b) >= 0.0 ? (a - b).norm() : (a + b).norm();
}

CalibrationSet calibrate(const ReferenceSolutions& ref, const ReducedOperators& ops,
                         const ResidualFactorization& factors, const Matrix& V,
                         const PowerIterationSettings& settings, unsigned workers) {
  const std::size_t m = ref.params.size();
  CalibrationSet cal;
  cal.pref = ref.params;
  cal.E_k.assign(m, 0.0);
  cal.E_u.assign(m, 0.0);
  cal.E_ustar.assign(m, 0.0);
  std::vector<char> skip(m, 0);

  parallel_for(m, workers, [&](std::size_t i) {
    const OnlineEstimate e = online_estimate(ops, factors, V, ref.params[i], settings, true);
    const EigenSolution& hf = ref.solutions[i];
    if (e.norm_R < kZeroResidualCutoff || e.norm_R_star < kZeroResidualCutoff) {
      skip[i] = 1;
      return;
    }
    cal.E_k[i] = std::abs(e.rb.k_N - hf.k) / e.eta_k;
    cal.E_u[i] = aligned_distance(e.rb.u_N, hf.u) / e.norm_R;
    cal.E_ustar[i] = aligned_distance(e.rb.u_star_N, hf.u_star) / e.norm_R_star;
  });

  cal.skipped.assign(skip.begin(), skip.end());
  bool any = false;
  for (std::size_t i = 0; i < m; ++i) {
    if (cal.skipped[i]) {
      cal.warnings.push_back("pref point " + std::to_string(i) + ": residual below " +
                             std::to_string(kZeroResidualCutoff) + ", efficiency undefined");
      continue;
    }
    any = true;
    cal.C_k = std::max(cal.C_k, cal.E_k[i]);
    cal.C_u = std::max(cal.C_u, cal.E_u[i]);
    cal.C_ustar = std::max(cal.C_ustar, cal.E_ustar[i]);
  }
  cal.degenerate = !any || (cal.C_k == 0.0 && cal.C_u == 0.0 && cal.C_ustar == 0.0);
  if (cal.degenerate) cal.warnings.push_back("calibration is degenerate: all efficiencies vanish");
  return cal;
}

double coverage(const std::vector<double>& error, const std::vector<double>& bound) {
  if (error.size() != bound.size()) throw DimensionMismatch("coverage needs equally sized lists");
  if (error.empty()) return 0.0;
  std::size_t hit = 0;
  for (std::size_t i = 0; i < error.size(); ++i) hit += error[i] <= bound[i] ? 1 : 0;
  return static_cast<double>(hit) / static_cast<double>(error.size());
}

void write_calibration_csv(const std::filesystem::path& path, const CalibrationSet& cal) {
  CsvWriter w(path, {"point", "E_k", "E_u", "E_ustar", "skipped"});
  for (std::size_t i = 0; i < cal.pref.size(); ++i) {
    w << i << cal.E_k[i] << cal.E_u[i] << cal.E_ustar[i] << (cal.skipped[i] ? 1 : 0);
    w.end_row();
  }
  w << "max" << cal.C_k << cal.C_u << cal.C_ustar << 0;
  w.end_row();
}

}  // namespace rbeig
