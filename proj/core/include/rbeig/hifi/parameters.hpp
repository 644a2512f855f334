#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace rbeig {

/// The ten PDE coefficients on one subdomain. Off-diagonal removal terms
/// follow the sign of the bilinear form: sigma_12 = -Sigma_s,0,12.
struct SubdomainCoefficients {
  double D1 = 0.0;
  double sigma11 = 0.0;
  double sigma12 = 0.0;
  double D2 = 0.0;
  double sigma21 = 0.0;
  double sigma22 = 0.0;
  double chi1_nusf1 = 0.0;
  double chi1_nusf2 = 0.0;
  double chi2_nusf1 = 0.0;
  double chi2_nusf2 = 0.0;
};

enum class Material { ugd12 = 0, uo2 = 1, reflector = 2 };

/// Macro state of one assembly in the synthetic minicore.
struct MacroState {
  Material material = Material::uo2;
  double burnup = 0.0;             ///< MWd/t
  double fuel_temperature = 0.0;   ///< K
  double boron = 0.0;              ///< ppm
  double moderator_density = 0.0;  ///< g/cm^3
};

/// One parameter value: the coefficient record of every subdomain, plus the
/// macro states that produced it when the point comes from the minicore
/// sampler.
struct ParameterPoint {
  std::vector<SubdomainCoefficients> sub;
  std::vector<MacroState> macro;

  int subdomain_count() const { return static_cast<int>(sub.size()); }
  bool operator==(const ParameterPoint& o) const;
};

/// f(mu_k) = (D1, S11, S12, D2, S21, S22).
std::array<double, 6> f_coefficients(const SubdomainCoefficients& c);
/// g(mu_k) = (chi1 nuSf1, chi1 nuSf2, chi2 nuSf1, chi2 nuSf2).
std::array<double, 4> g_coefficients(const SubdomainCoefficients& c);

struct CoercivityLimits {
  double alpha = 1e-3;
  double epsilon = 0.99;
};

/// Checks D_i >= alpha, S_ii >= alpha, |S_ij| <= epsilon S_ii, fission
/// products non-negative and at least one of them nonzero somewhere.
/// Returns a description of the first violation.
std::optional<std::string> coercivity_violation(const ParameterPoint& mu, const CoercivityLimits& lim = {});

/// Throws CoercivityViolation.
void check_coercivity(const ParameterPoint& mu, const CoercivityLimits& lim = {});

}  // namespace rbeig
