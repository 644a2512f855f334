#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "rbeig/hifi/mesh.hpp"
#include "rbeig/hifi/parameters.hpp"

namespace rbeig {

/// Toy core draws: Sigma_s,0,ij ~ U[0, 0.15]; Sigma_ti ~ U[2(S_s,12 + S_s,21), 0.7];
/// D_i = 1 / (3 Sigma_ti); Sigma_ii = Sigma_ti - S_s,ii; Sigma_ij = -S_s,ij;
/// chi_i nuSf_j = delta_ij. A subdomain draw that violates `limits` is
/// redrawn from the same stream.
std::vector<ParameterPoint> sample_toycore(std::size_t n, std::uint64_t seed, int subdomains = 4,
                                           const CoercivityLimits& limits = {});

struct MacroRanges {
  std::array<double, 2> burnup{0.0, 60000.0};
  std::array<double, 2> fuel_temperature{560.0, 1200.0};
  std::array<double, 2> boron{0.0, 2000.0};
  std::array<double, 2> moderator_density{0.66, 0.78};
};

/// 5x5 assembly layout, row-major from (0, 0): UGD12 at the center, UO2 on
/// the surrounding ring, reflector on the outer ring.
std::vector<Material> minicore_layout();

/// Smooth synthetic map from a macro state to the ten coefficients. Each
/// material has a baseline record; normalized macro fields shift it
/// linearly. Coercive over the whole default range.
SubdomainCoefficients synthetic_coefficients(const MacroState& s, const MacroRanges& ranges = {});

/// Per assembly: material from the layout, four macro fields uniform over
/// `ranges`.
std::vector<ParameterPoint> sample_synthetic_minicore(std::size_t n, std::uint64_t seed,
                                                      const MacroRanges& ranges = {});

/// Geometry of the two test cases.
struct CaseGeometry {
  double L;
  int cells_per_side;
  Partition partition;
  BoundaryCondition bc;
};
CaseGeometry toycore_geometry(int cells_per_side = 30);
CaseGeometry minicore_geometry(int cells_per_side = 35);

struct ParameterSets {
  std::vector<ParameterPoint> train;
  std::vector<ParameterPoint> test;
  std::vector<ParameterPoint> pref;
};

/// The three sets are consecutive distinct draws of one stream (train,
/// then test, then pref), so they are pairwise disjoint and the training set
/// equals the plain sampler output for the same seed.
ParameterSets toycore_sets(std::size_t n_train, std::size_t n_test, std::size_t n_pref, std::uint64_t seed,
                           const CoercivityLimits& limits = {});
ParameterSets minicore_sets(std::size_t n_train, std::size_t n_test, std::size_t n_pref, std::uint64_t seed,
                            const MacroRanges& ranges = {});

/// One row per (point, subdomain) with the ten coefficients and, when
/// present, the macro state.
void write_parameters_csv(const std::filesystem::path& path, const std::vector<ParameterPoint>& points);
std::vector<ParameterPoint> read_parameters_csv(const std::filesystem::path& path);

}  // namespace rbeig
