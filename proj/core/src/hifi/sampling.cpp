#include "rbeig/hifi/sampling.hpp"

#include <algorithm>
#include <functional>

#include "rbeig/errors.hpp"
#include "rbeig/util/csv.hpp"
#include "rbeig/util/rng.hpp"

namespace rbeig {

namespace {

constexpr int kMaxRedraws = 100000;

SubdomainCoefficients draw_toy_subdomain(Rng& rng, const CoercivityLimits& limits) {
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    const double s11 = rng.uniform(0.0, 0.15);
    const double s12 = rng.uniform(0.0, 0.15);
    const double s21 = rng.uniform(0.0, 0.15);
    const double s22 = rng.uniform(0.0, 0.15);
    const double lo = 2.0 * (s12 + s21);
    const double t1 = rng.uniform(lo, 0.7);
    const double t2 = rng.uniform(lo, 0.7);
    SubdomainCoefficients c;
    c.D1 = 1.0 / (3.0 * t1);
    c.D2 = 1.0 / (3.0 * t2);
    c.sigma11 = t1 - s11;
    c.sigma22 = t2 - s22;
    c.sigma12 = -s12;
    c.sigma21 = -s21;
    c.chi1_nusf1 = 1.0;
    c.chi2_nusf2 = 1.0;
    ParameterPoint probe{{c}, {}};
    if (!coercivity_violation(probe, limits)) return c;
  }
  throw CoercivityViolation("toy-core sampler could not meet the coercivity limits");
}

ParameterPoint draw_toy_point(Rng& rng, int K, const CoercivityLimits& limits) {
  ParameterPoint mu;
  for (int k = 0; k < K; ++k) mu.sub.push_back(draw_toy_subdomain(rng, limits));
  return mu;
}

double lerp(const std::array<double, 2>& r, double t) { return r[0] + (r[1] - r[0]) * t; }
double unlerp(const std::array<double, 2>& r, double v) {
  return r[1] == r[0] ? 0.0 : (v - r[0]) / (r[1] - r[0]);
}

ParameterPoint draw_minicore_point(Rng& rng, const MacroRanges& ranges) {
  ParameterPoint mu;
  for (Material m : minicore_layout()) {
    MacroState s;
    s.material = m;
    s.burnup = lerp(ranges.burnup, rng.uniform());
    s.fuel_temperature = lerp(ranges.fuel_temperature, rng.uniform());
    s.boron = lerp(ranges.boron, rng.uniform());
    s.moderator_density = lerp(ranges.moderator_density, rng.uniform());
    mu.macro.push_back(s);
    mu.sub.push_back(synthetic_coefficients(s, ranges));
  }
  return mu;
}

ParameterSets distinct_sets(const std::function<ParameterPoint()>& next, std::size_t n_train,
                            std::size_t n_test, std::size_t n_pref) {
  std::vector<ParameterPoint> all;
  const std::size_t total = n_train + n_test + n_pref;
  while (all.size() < total) {
    ParameterPoint mu = next();
    if (std::find(all.begin(), all.end(), mu) == all.end()) all.push_back(std::move(mu));
  }
  ParameterSets s;
  s.train.assign(all.begin(), all.begin() + n_train);
  s.test.assign(all.begin() + n_train, all.begin() + n_train + n_test);
  s.pref.assign(all.begin() + n_train + n_test, all.end());
  return s;
}

}  // namespace

std::vector<ParameterPoint> sample_toycore(std::size_t n, std::uint64_t seed, int subdomains,
                                           const CoercivityLimits& limits) {
  if (n < 1) throw ConfigError("sample size must be at least 1");
  Rng rng(seed);
  std::vector<ParameterPoint> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(draw_toy_point(rng, subdomains, limits));
  return out;
}

std::vector<Material> minicore_layout() {
  std::vector<Material> m(25, Material::reflector);
  for (int j = 1; j <= 3; ++j)
    for (int i = 1; i <= 3; ++i) m[j * 5 + i] = Material::uo2;
  m[2 * 5 + 2] = Material::ugd12;
  return m;
}

SubdomainCoefficients synthetic_coefficients(const MacroState& s, const MacroRanges& ranges) {
  // Normalized macro fields, centered on the middle of their range.
  const double bu = unlerp(ranges.burnup, s.burnup) - 0.5;
  const double tf = unlerp(ranges.fuel_temperature, s.fuel_temperature) - 0.5;
  const double cb = unlerp(ranges.boron, s.boron) - 0.5;
  const double rho = unlerp(ranges.moderator_density, s.moderator_density) - 0.5;

  // Baselines: D1, D2, absorption 1, absorption 2, downscatter, nuSf1, nuSf2.
  struct Base {
    double d1, d2, a1, a2, s12, f1, f2;
  };
  static constexpr Base kBase[3] = {
      {1.40, 0.38, 0.0105, 0.125, 0.0165, 0.0060, 0.100},  // UGD12
      {1.42, 0.40, 0.0095, 0.080, 0.0170, 0.0065, 0.120},  // UO2
      {1.30, 0.30, 0.0010, 0.030, 0.0240, 0.0, 0.0},       // reflector
  };
  const Base& b = kBase[static_cast<int>(s.material)];
  const bool fuel = s.material != Material::reflector;

  const double d1 = b.d1 * (1.0 - 0.05 * rho);
  const double d2 = b.d2 * (1.0 - 0.04 * rho);
  const double a1 = b.a1 * (1.0 + (fuel ? 0.06 * tf + 0.03 * bu : 0.0) + 0.02 * cb);
  const double a2 = b.a2 * (1.0 + 0.12 * cb + (fuel ? 0.04 * bu : 0.0) + 0.03 * rho);
  const double s12 = b.s12 * (1.0 + 0.10 * rho);
  const double s21 = 0.01 * s12;

  SubdomainCoefficients c;
  c.D1 = d1;
  c.D2 = d2;
  c.sigma11 = a1 + s12;
  c.sigma12 = -s21;
  c.sigma21 = -s12;
  c.sigma22 = a2 + s21;
  c.chi1_nusf1 = b.f1 * (1.0 - 0.15 * bu);
  c.chi1_nusf2 = b.f2 * (1.0 - 0.20 * bu - 0.01 * tf);
  return c;
}

std::vector<ParameterPoint> sample_synthetic_minicore(std::size_t n, std::uint64_t seed,
                                                      const MacroRanges& ranges) {
  if (n < 1) throw ConfigError("sample size must be at least 1");
  Rng rng(seed);
  std::vector<ParameterPoint> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(draw_minicore_point(rng, ranges));
  return out;
}

CaseGeometry toycore_geometry(int cells_per_side) {
  return {60.0, cells_per_side, Partition::uniform(60.0, 2), BoundaryCondition::dirichlet};
}

CaseGeometry minicore_geometry(int cells_per_side) {
  return {107.52, cells_per_side, Partition::uniform(107.52, 5), BoundaryCondition::robin};
}

ParameterSets toycore_sets(std::size_t n_train, std::size_t n_test, std::size_t n_pref, std::uint64_t seed,
                           const CoercivityLimits& limits) {
  Rng rng(seed);
  return distinct_sets([&] { return draw_toy_point(rng, 4, limits); }, n_train, n_test, n_pref);
}

ParameterSets minicore_sets(std::size_t n_train, std::size_t n_test, std::size_t n_pref, std::uint64_t seed,
                            const MacroRanges& ranges) {
  Rng rng(seed);
  return distinct_sets([&] { return draw_minicore_point(rng, ranges); }, n_train, n_test, n_pref);
}

namespace {
const char* material_name(Material m) {
  switch (m) {
    case Material::ugd12: return "UGD12";
    case Material::uo2: return "UO2";
    case Material::reflector: return "reflector";
  }
  return "?";
}
Material material_from(const std::string& s) {
  if (s == "UGD12") return Material::ugd12;
  if (s == "UO2") return Material::uo2;
  if (s == "reflector") return Material::reflector;
  throw ConfigError("unknown material '" + s + "'");
}
}  // namespace

void write_parameters_csv(const std::filesystem::path& path, const std::vector<ParameterPoint>& points) {
  CsvWriter w(path, {"point", "subdomain", "D1", "sigma11", "sigma12", "D2", "sigma21", "sigma22",
                     "chi1_nusf1", "chi1_nusf2", "chi2_nusf1", "chi2_nusf2", "material", "burnup",
                     "fuel_temperature", "boron", "moderator_density"});
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& mu = points[i];
    for (int k = 0; k < mu.subdomain_count(); ++k) {
      w << i << k;
      for (double v : f_coefficients(mu.sub[k])) w << v;
      for (double v : g_coefficients(mu.sub[k])) w << v;
      if (mu.macro.size() == mu.sub.size()) {
        const auto& s = mu.macro[k];
        w << material_name(s.material) << s.burnup << s.fuel_temperature << s.boron << s.moderator_density;
      } else {
        w << "" << "" << "" << "" << "";
      }
      w.end_row();
    }
  }
}

std::vector<ParameterPoint> read_parameters_csv(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  std::vector<ParameterPoint> out;
  const auto mat_col = t.column("material");
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto point = static_cast<std::size_t>(t.number(r, "point"));
    const auto sub = static_cast<std::size_t>(t.number(r, "subdomain"));
    if (point == out.size()) out.emplace_back();
    if (point + 1 != out.size() || sub != out.back().sub.size()) {
      throw ConfigError("parameter CSV rows must be ordered by point then subdomain");
    }
    SubdomainCoefficients c;
    c.D1 = t.number(r, "D1");
    c.sigma11 = t.number(r, "sigma11");
    c.sigma12 = t.number(r, "sigma12");
    c.D2 = t.number(r, "D2");
    c.sigma21 = t.number(r, "sigma21");
    c.sigma22 = t.number(r, "sigma22");
    c.chi1_nusf1 = t.number(r, "chi1_nusf1");
    c.chi1_nusf2 = t.number(r, "chi1_nusf2");
    c.chi2_nusf1 = t.number(r, "chi2_nusf1");
    c.chi2_nusf2 = t.number(r, "chi2_nusf2");
    out.back().sub.push_back(c);
    if (!t.rows[r][mat_col].empty()) {
      MacroState s;
      s.material = material_from(t.rows[r][mat_col]);
      s.burnup = t.number(r, "burnup");
      s.fuel_temperature = t.number(r, "fuel_temperature");
      s.boron = t.number(r, "boron");
      s.moderator_density = t.number(r, "moderator_density");
      out.back().macro.push_back(s);
    }
  }
  return out;
}

}  // namespace rbeig
