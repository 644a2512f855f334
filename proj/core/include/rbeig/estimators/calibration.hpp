#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rbeig/hifi/hifi_solver.hpp"
#include "rbeig/hifi/parameters.hpp"
#include "rbeig/residual/residual_factors.hpp"
#include "rbeig/rom/reduced_model.hpp"

namespace rbeig {

/// High-fidelity eigenpairs of a fixed parameter list.
struct ReferenceSolutions {
  std::vector<ParameterPoint> params;
  std::vector<EigenSolution> solutions;
};

ReferenceSolutions compute_reference(const HighFidelitySolver& hf, const std::vector<ParameterPoint>& params,
                                     unsigned workers = 1);

/// Efficiencies on P_pref and their maxima.
///   E_k = |k_N - k| / eta_k,  E_u = |u_N - u| / |R_N|,  E_u* = |u*_N - u*| / |R*_N|
struct CalibrationSet {
  std::vector<ParameterPoint> pref;
  std::vector<double> E_k;
  std::vector<double> E_u;
  std::vector<double> E_ustar;
  std::vector<bool> skipped;  ///< residual below the cutoff, left out of the maxima
  double C_k = 0.0;
  double C_u = 0.0;
  double C_ustar = 0.0;
  bool degenerate = false;  ///< every efficiency vanished or was skipped
  std::vector<std::string> warnings;

  double delta_k(double eta) const { return C_k * eta; }
  double delta_u(double norm_R) const { return C_u * norm_R; }
  double delta_ustar(double norm_R_star) const { return C_ustar * norm_R_star; }
};

inline constexpr double kZeroResidualCutoff = 1e-13;

/// Eigenvector errors are taken after aligning the sign of the reduced
/// vector with the reference.
CalibrationSet calibrate(const ReferenceSolutions& ref, const ReducedOperators& ops,
                         const ResidualFactorization& factors, const Matrix& V,
                         const PowerIterationSettings& settings, unsigned workers = 1);

/// |a - b| with the sign of a chosen to match b.
double aligned_distance(const Vector& a, const Vector& b);

/// Fraction of entries with error <= bound.
double coverage(const std::vector<double>& error, const std::vector<double>& bound);

/// Columns: point, E_k, E_u, E_ustar, skipped; the maxima go in a last row
/// labelled "max".
void write_calibration_csv(const std::filesystem::path& path, const CalibrationSet& cal);

}  // namespace rbeig
