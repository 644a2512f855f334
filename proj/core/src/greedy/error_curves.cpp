#include "rbeig/greedy/error_curves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rbeig/errors.hpp"
#include "rbeig/estimators/estimators.hpp"
#include "rbeig/util/csv.hpp"
#include "rbeig/util/parallel.hpp"

namespace rbeig {

namespace {

struct Stat {
  double sum = 0.0;
  double max = 0.0;
  std::size_t n = 0;
  void add(double v) {
    sum += v;
    max = n == 0 ? v : std::max(max, v);
    ++n;
  }
  double mean() const { return n ? sum / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN(); }
};

}  // namespace

std::vector<Index> size_grid(Index lo, Index hi, Index step) {
  if (lo < 1 || hi < lo || step < 1) throw ConfigError("size_grid needs 1 <= lo <= hi and step >= 1");
  std::vector<Index> g;
  for (Index n = lo; n < hi; n += step) g.push_back(n);
  g.push_back(hi);
  return g;
}

ErrorCurves evaluate_error_curves(const Matrix& V, const ReducedOperators& ops, const ResidualFactorization& factors,
                                  const ReferenceSolutions& test, const std::vector<Index>& Ns,
                                  const PowerIterationSettings& settings, const ReferenceSolutions* pref,
                                  unsigned workers) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const std::size_t m = test.params.size();
  ErrorCurves out;
  for (Index N : Ns) {
    if (N < 1 || N > V.cols()) throw DimensionMismatch("requested basis size outside [1, dim]");
    const Matrix Vn = V.leftCols(N);
    const ReducedOperators opn = ops.truncated(N);

    double C_k = nan;
    if (pref) C_k = calibrate(*pref, opn, factors, Vn, settings, workers).C_k;

    std::vector<ErrorPoint> pts(m);
    parallel_for(m, workers, [&](std::size_t i) {
      ErrorPoint& p = pts[i];
      p.N = N;
      p.point = i;
      const EigenSolution& hf = test.solutions[i];
      try {
        const OnlineEstimate e = online_estimate(opn, factors, Vn, test.params[i], settings, true);
        p.k_N = e.rb.k_N;
        p.e_k = std::abs(e.rb.k_N - hf.k);
        p.e_k_rel = p.e_k / std::abs(hf.k);
        p.e_u = aligned_distance(e.rb.u_N, hf.u);
        p.e_u_rel = p.e_u / hf.u.norm();
        p.e_ustar = aligned_distance(e.rb.u_star_N, hf.u_star);
        p.eta_k = e.eta_k;
        p.norm_R = e.norm_R;
        p.norm_R_star = e.norm_R_star;
        p.delta_k = C_k * e.eta_k;
      } catch (const NumericalError&) {
        p.failed = true;
        p.k_N = p.e_k = p.e_k_rel = p.e_u = p.e_u_rel = p.e_ustar = nan;
        p.eta_k = p.norm_R = p.norm_R_star = p.delta_k = nan;
      }
    });

    ErrorCurveRow row;
    row.N = N;
    Stat ek, ekr, eu, eur, eus, eta, r, rs;
    std::vector<double> errs, bounds;
    for (const auto& p : pts) {
      if (p.failed) {
        ++row.failures;
        continue;
      }
      ek.add(p.e_k);
      ekr.add(p.e_k_rel);
      eu.add(p.e_u);
      eur.add(p.e_u_rel);
      eus.add(p.e_ustar);
      eta.add(p.eta_k);
      r.add(p.norm_R);
      rs.add(p.norm_R_star);
      errs.push_back(p.e_k);
      bounds.push_back(p.delta_k);
    }
    row.mean_e_k = ek.mean(), row.max_e_k = ek.max;
    row.mean_e_k_rel = ekr.mean(), row.max_e_k_rel = ekr.max;
    row.mean_e_u = eu.mean(), row.max_e_u = eu.max;
    row.mean_e_u_rel = eur.mean(), row.max_e_u_rel = eur.max;
    row.mean_e_ustar = eus.mean(), row.max_e_ustar = eus.max;
    row.mean_eta_k = eta.mean(), row.max_eta_k = eta.max;
    row.mean_norm_R = r.mean(), row.max_norm_R = r.max;
    row.mean_norm_R_star = rs.mean(), row.max_norm_R_star = rs.max;
    row.C_k = C_k;
    // Failed points count as uncovered.
    if (pref) {
      errs.resize(m, 1.0);
      bounds.resize(m, 0.0);
      row.coverage_k = coverage(errs, bounds);
    } else {
      row.coverage_k = nan;
    }
    out.rows.push_back(row);
    out.points.insert(out.points.end(), pts.begin(), pts.end());
  }
  return out;
}

void write_error_curves_csv(const std::filesystem::path& path, const std::vector<ErrorCurveRow>& rows) {
  CsvWriter w(path, {"N", "failures", "mean_e_k", "max_e_k", "mean_e_k_rel", "max_e_k_rel", "mean_e_u", "max_e_u",
                     "mean_e_u_rel", "max_e_u_rel", "mean_e_ustar", "max_e_ustar", "mean_eta_k", "max_eta_k",
                     "mean_norm_R", "max_norm_R", "mean_norm_R_star", "max_norm_R_star", "C_k", "coverage_k"});
  for (const auto& r : rows) {
    w << static_cast<long long>(r.N) << r.failures << r.mean_e_k << r.max_e_k << r.mean_e_k_rel << r.max_e_k_rel
      << r.mean_e_u << r.max_e_u << r.mean_e_u_rel << r.max_e_u_rel << r.mean_e_ustar << r.max_e_ustar
      << r.mean_eta_k << r.max_eta_k << r.mean_norm_R << r.max_norm_R << r.mean_norm_R_star << r.max_norm_R_star
      << r.C_k << r.coverage_k;
    w.end_row();
  }
}

void write_error_points_csv(const std::filesystem::path& path, const std::vector<ErrorPoint>& points) {
  CsvWriter w(path, {"N", "point", "failed", "k_N", "e_k", "e_k_rel", "e_u", "e_u_rel", "e_ustar", "eta_k",
                     "norm_R", "norm_R_star", "delta_k", "efficiency_k"});
  for (const auto& p : points) {
    w << static_cast<long long>(p.N) << p.point << (p.failed ? 1 : 0) << p.k_N << p.e_k << p.e_k_rel << p.e_u
      << p.e_u_rel << p.e_ustar << p.eta_k << p.norm_R << p.norm_R_star << p.delta_k
      << (p.eta_k > 0.0 ? p.e_k / p.eta_k : std::numeric_limits<double>::quiet_NaN());
    w.end_row();
  }
}

}  // namespace rbeig
