#include "rbeig/rom/reduced_model.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "rbeig/errors.hpp"
#include "rbeig/linalg/matrix_io.hpp"

namespace rbeig {

ReducedOperators ReducedOperators::project(const AffineOperatorFamily& family, const Matrix& V) {
  if (V.rows() != family.size()) throw DimensionMismatch("basis rows do not match the family size");
  ReducedOperators r;
  const int K = family.subdomain_count();
  r.A.resize(K);
  r.B.resize(K);
  for (int k = 0; k < K; ++k) {
    for (int p = 0; p < 6; ++p) r.A[k][p] = V.transpose() * (family.A[k][p] * V);
    for (int q = 0; q < 4; ++q) r.B[k][q] = V.transpose() * (family.B[k][q] * V);
  }
  r.M_bc = V.transpose() * (family.M_bc * V);
  r.VtV = V.transpose() * V;
  return r;
}

ReducedOperators ReducedOperators::truncated(Index n) const {
  if (n < 1 || n > dim()) throw DimensionMismatch("truncation outside [1, N]");
  ReducedOperators r;
  r.A.resize(A.size());
  r.B.resize(B.size());
  for (std::size_t k = 0; k < A.size(); ++k) {
    for (int p = 0; p < 6; ++p) r.A[k][p] = A[k][p].topLeftCorner(n, n);
    for (int q = 0; q < 4; ++q) r.B[k][q] = B[k][q].topLeftCorner(n, n);
  }
  r.M_bc = M_bc.topLeftCorner(n, n);
  r.VtV = VtV.topLeftCorner(n, n);
  return r;
}

std::pair<Matrix, Matrix> ReducedOperators::assemble(const ParameterPoint& mu) const {
  if (mu.subdomain_count() != static_cast<int>(A.size())) {
    throw DimensionMismatch("parameter subdomain count does not match the reduced operators");
  }
  Matrix An = M_bc;
  Matrix Bn = Matrix::Zero(dim(), dim());
  for (std::size_t k = 0; k < A.size(); ++k) {
    const auto f = f_coefficients(mu.sub[k]);
    const auto g = g_coefficients(mu.sub[k]);
    for (int p = 0; p < 6; ++p)
      if (f[p] != 0.0) An.noalias() += f[p] * A[k][p];
    for (int q = 0; q < 4; ++q)
      if (g[q] != 0.0) Bn.noalias() += g[q] * B[k][q];
  }
  return {std::move(An), std::move(Bn)};
}

namespace {

// Rescales coordinates so that V c has unit Euclidean norm and, when lifted,
// obeys the sign convention.
void finish(Vector& c, Vector& lifted, const Matrix& V, const Matrix& VtV, bool lift) {
  if (lift) {
    lifted = V * c;
    const double n = lifted.norm();
    lifted /= n;
    c /= n;
    Index imax = 0;
    lifted.cwiseAbs().maxCoeff(&imax);
    if (lifted[imax] < 0.0) {
      lifted = -lifted;
      c = -c;
    }
  } else {
    c /= std::sqrt(c.dot(VtV * c));
  }
}

}  // namespace

ReducedSolution solve_reduced(const ReducedOperators& ops, const Matrix& V, const ParameterPoint& mu,
                              const PowerIterationSettings& settings, bool lift) {
  if (lift && V.cols() != ops.dim()) throw DimensionMismatch("basis and reduced operators disagree on N");
  const auto [An, Bn] = ops.assemble(mu);
  EigenSolution sol;
  try {
    sol = solve_eigenpair(An, Bn, settings);
  } catch (const NotConverged& e) {
    throw ReducedNotConverged(e.what());
  } catch (const FactorizationFailed& e) {
    throw ReducedNotConverged(e.what());
  }
  ReducedSolution r;
  r.c = std::move(sol.u);
  r.c_star = std::move(sol.u_star);
  r.iterations_direct = sol.iterations_direct;
  r.iterations_adjoint = sol.iterations_adjoint;

  const double pairing = r.c_star.dot(An * r.c);
  const double scale = An.norm() * r.c.norm() * r.c_star.norm();
  if (!(std::abs(pairing) > 1e-14 * scale)) {
    throw DegeneratePairing("reduced <c*, A_N c> = " + std::to_string(pairing));
  }
  r.k_N = r.c_star.dot(Bn * r.c) / pairing;
  r.lambda_N = 1.0 / r.k_N;
  finish(r.c, r.u_N, V, ops.VtV, lift);
  finish(r.c_star, r.u_star_N, V, ops.VtV, lift);
  r.pairing = r.c_star.dot(An * r.c);
  return r;
}

void save_reduced_operators(const std::filesystem::path& dir, const ReducedOperators& ops) {
  std::filesystem::create_directories(dir);
  nlohmann::json j;
  j["format_version"] = 1;
  j["dim"] = ops.dim();
  j["subdomains"] = ops.A.size();
  for (std::size_t k = 0; k < ops.A.size(); ++k) {
    for (std::size_t p = 0; p < 6; ++p)
      write_dense_mtx(dir / ("A_" + std::to_string(k) + "_" + std::to_string(p) + ".mtx"), ops.A[k][p]);
    for (std::size_t q = 0; q < 4; ++q)
      write_dense_mtx(dir / ("B_" + std::to_string(k) + "_" + std::to_string(q) + ".mtx"), ops.B[k][q]);
  }
  write_dense_mtx(dir / "M_bc.mtx", ops.M_bc);
  write_dense_mtx(dir / "VtV.mtx", ops.VtV);
  std::ofstream(dir / "operators.json") << j.dump(1) << '\n';
}

ReducedOperators load_reduced_operators(const std::filesystem::path& dir) {
  std::ifstream in(dir / "operators.json");
  if (!in) throw ConfigError("missing " + (dir / "operators.json").string());
  const nlohmann::json j = nlohmann::json::parse(in);
  if (j.at("format_version").get<int>() != 1) {
    throw ArtifactVersionMismatch("reduced operators: unsupported format_version");
  }
  ReducedOperators ops;
  const std::size_t K = j.at("subdomains").get<std::size_t>();
  ops.A.resize(K);
  ops.B.resize(K);
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t p = 0; p < 6; ++p)
      ops.A[k][p] = read_dense_mtx(dir / ("A_" + std::to_string(k) + "_" + std::to_string(p) + ".mtx"));
    for (std::size_t q = 0; q < 4; ++q)
      ops.B[k][q] = read_dense_mtx(dir / ("B_" + std::to_string(k) + "_" + std::to_string(q) + ".mtx"));
  }
  ops.M_bc = read_dense_mtx(dir / "M_bc.mtx");
  ops.VtV = read_dense_mtx(dir / "VtV.mtx");
  if (ops.dim() != j.at("dim").get<Index>()) throw ConfigError("reduced operators: dimension mismatch");
  return ops;
}

}  // namespace rbeig
