#include "rbeig/hifi/parameters.hpp"

#include <cmath>

#include "rbeig/errors.hpp"

namespace rbeig {

bool ParameterPoint::operator==(const ParameterPoint& o) const {
  if (sub.size() != o.sub.size()) return false;
  for (std::size_t k = 0; k < sub.size(); ++k) {
    if (f_coefficients(sub[k]) != f_coefficients(o.sub[k])) return false;
    if (g_coefficients(sub[k]) != g_coefficients(o.sub[k])) return false;
  }
  return true;
}

std::array<double, 6> f_coefficients(const SubdomainCoefficients& c) {
  return {c.D1, c.sigma11, c.sigma12, c.D2, c.sigma21, c.sigma22};
}

std::array<double, 4> g_coefficients(const SubdomainCoefficients& c) {
  return {c.chi1_nusf1, c.chi1_nusf2, c.chi2_nusf1, c.chi2_nusf2};
}

std::optional<std::string> coercivity_violation(const ParameterPoint& mu, const CoercivityLimits& lim) {
  if (mu.sub.empty()) return "parameter point has no subdomains";
  bool any_fission = false;
  for (std::size_t k = 0; k < mu.sub.size(); ++k) {
    const auto& c = mu.sub[k];
    const std::string at = " on subdomain " + std::to_string(k);
    for (double v : f_coefficients(c))
      if (!std::isfinite(v)) return "non-finite coefficient" + at;
    if (c.D1 < lim.alpha || c.D2 < lim.alpha) return "D_i below alpha" + at;
    if (c.sigma11 < lim.alpha || c.sigma22 < lim.alpha) return "Sigma_ii below alpha" + at;
    if (std::abs(c.sigma12) > lim.epsilon * c.sigma11) return "|Sigma_12| > eps Sigma_11" + at;
    if (std::abs(c.sigma21) > lim.epsilon * c.sigma22) return "|Sigma_21| > eps Sigma_22" + at;
    for (double v : g_coefficients(c)) {
      if (!(v >= 0.0)) return "negative fission term" + at;
      if (v > 0.0) any_fission = true;
    }
  }
  if (!any_fission) return "all fission terms vanish";
  return std::nullopt;
}

void check_coercivity(const ParameterPoint& mu, const CoercivityLimits& lim) {
  if (auto why = coercivity_violation(mu, lim)) throw CoercivityViolation(*why);
}

}  // namespace rbeig
