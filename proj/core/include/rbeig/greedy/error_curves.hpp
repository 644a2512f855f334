#pragma once

#include <filesystem>
#include <vector>

#include "rbeig/estimators/calibration.hpp"
#include "rbeig/residual/residual_factors.hpp"
#include "rbeig/rom/reduced_model.hpp"

namespace rbeig {

/// Errors and estimators of one test parameter at one basis size.
struct ErrorPoint {
  Index N = 0;
  std::size_t point = 0;
  bool failed = false;  ///< reduced solve failed; errors are NaN
  double k_N = 0.0;
  double e_k = 0.0;
  double e_k_rel = 0.0;
  double e_u = 0.0;
  double e_u_rel = 0.0;
  double e_ustar = 0.0;
  double eta_k = 0.0;
  double norm_R = 0.0;
  double norm_R_star = 0.0;
  double delta_k = 0.0;  ///< C_k eta_k; NaN without calibration
};

/// Mean and max over the non-failed test points.
struct ErrorCurveRow {
  Index N = 0;
  std::size_t failures = 0;
  double mean_e_k = 0, max_e_k = 0;
  double mean_e_k_rel = 0, max_e_k_rel = 0;
  double mean_e_u = 0, max_e_u = 0;
  double mean_e_u_rel = 0, max_e_u_rel = 0;
  double mean_e_ustar = 0, max_e_ustar = 0;
  double mean_eta_k = 0, max_eta_k = 0;
  double mean_norm_R = 0, max_norm_R = 0;
  double mean_norm_R_star = 0, max_norm_R_star = 0;
  double C_k = 0;         ///< calibrated constant at this N; NaN without P_pref
  double coverage_k = 0;  ///< fraction with e_k <= delta_k; NaN without P_pref
};

struct ErrorCurves {
  std::vector<ErrorCurveRow> rows;
  std::vector<ErrorPoint> points;
};

/// Errors of the leading-N truncations of V against HF reference solutions.
/// With `pref`, each truncation is calibrated on it and coverage of
/// Delta_k = C_k eta_k is reported.
ErrorCurves evaluate_error_curves(const Matrix& V, const ReducedOperators& ops, const ResidualFactorization& factors,
                                  const ReferenceSolutions& test, const std::vector<Index>& Ns,
                                  const PowerIterationSettings& settings, const ReferenceSolutions* pref = nullptr,
                                  unsigned workers = 1);

/// Sizes lo, lo + step, ... capped at hi (hi always included).
std::vector<Index> size_grid(Index lo, Index hi, Index step);

void write_error_curves_csv(const std::filesystem::path& path, const std::vector<ErrorCurveRow>& rows);
void write_error_points_csv(const std::filesystem::path& path, const std::vector<ErrorPoint>& points);

}  // namespace rbeig
