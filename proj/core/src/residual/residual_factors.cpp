#include "rbeig/residual/residual_factors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "rbeig/errors.hpp"
#include "rbeig/linalg/matrix_io.hpp"
#include "rbeig/util/parallel.hpp"

namespace rbeig {

namespace {

constexpr int kFormatVersion = 1;

struct Dictionary {
  std::vector<SparseMatrix> mats;
  ResidualFactorization::ComponentIds direct;
  ResidualFactorization::ComponentIds adjoint;
};

bool same(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.nonZeros() != b.nonZeros()) return false;
  return (a - b).norm() == 0.0;
}

Dictionary build_dictionary(const AffineOperatorFamily& fam) {
  Dictionary d;
  auto add = [&](const SparseMatrix& C) -> int {
    if (C.nonZeros() == 0 || C.norm() == 0.0) return -1;
    for (std::size_t m = 0; m < d.mats.size(); ++m)
      if (same(d.mats[m], C)) return static_cast<int>(m);
    d.mats.push_back(C);
    return static_cast<int>(d.mats.size() - 1);
  };
  const int K = fam.subdomain_count();
  for (auto* ids : {&d.direct, &d.adjoint}) {
    ids->A.resize(K);
    ids->B.resize(K);
  }
  for (int k = 0; k < K; ++k) {
    for (int p = 0; p < 6; ++p) d.direct.A[k][p] = add(fam.A[k][p]);
    for (int q = 0; q < 4; ++q) d.direct.B[k][q] = add(fam.B[k][q]);
  }
  d.direct.bc = add(fam.M_bc);
  for (int k = 0; k < K; ++k) {
    for (int p = 0; p < 6; ++p) d.adjoint.A[k][p] = add(SparseMatrix(fam.A[k][p].transpose()));
    for (int q = 0; q < 4; ++q) d.adjoint.B[k][q] = add(SparseMatrix(fam.B[k][q].transpose()));
  }
  d.adjoint.bc = add(SparseMatrix(fam.M_bc.transpose()));
  return d;
}

std::set<int> ids_of(const ResidualFactorization::ComponentIds& c) {
  std::set<int> s;
  for (const auto& a : c.A)
    for (int v : a) s.insert(v);
  for (const auto& b : c.B)
    for (int v : b) s.insert(v);
  s.insert(c.bc);
  s.erase(-1);
  return s;
}

std::vector<Index> row_support(const SparseMatrix& C) {
  std::vector<char> hit(C.rows(), 0);
  for (Index j = 0; j < C.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(C, j); it; ++it)
      if (it.value() != 0.0) hit[it.row()] = 1;
  std::vector<Index> rows;
  for (Index r = 0; r < C.rows(); ++r)
    if (hit[r]) rows.push_back(r);
  return rows;
}

// C V and X^{-1} C V compressed to their nonzero rows.
struct Applied {
  std::vector<Index> y_rows;
  Matrix Y;
  std::vector<Index> z_rows;
  Matrix Z;
};

Applied apply_component(const SparseMatrix& C, const Matrix& V, const GramOperator& X) {
  Applied a;
  a.y_rows = row_support(C);
  const Matrix CV = C * V;
  a.Y = CV(a.y_rows, Eigen::all);
  if (X.is_identity()) {
    a.z_rows = a.y_rows;
    a.Z = a.Y;
  } else {
    const Matrix Z = X.solve(CV);
    for (Index r = 0; r < Z.rows(); ++r)
      if (Z.row(r).cwiseAbs().maxCoeff() != 0.0) a.z_rows.push_back(r);
    a.Z = Z(a.z_rows, Eigen::all);
  }
  return a;
}

// Positions, inside two sorted row lists, of their common rows.
void intersect(const std::vector<Index>& a, const std::vector<Index>& b, std::vector<Index>& pa,
               std::vector<Index>& pb) {
  pa.clear();
  pb.clear();
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      pa.push_back(static_cast<Index>(i++));
      pb.push_back(static_cast<Index>(j++));
    }
  }
}

}  // namespace

std::size_t ResidualFactorization::stored_blocks() const { return blocks_.size(); }

int ResidualFactorization::slot(int i, int j) const {
  if (i < 0 || j < 0) return -1;
  if (i > j) std::swap(i, j);
  return slot_[static_cast<std::size_t>(i) * n_unique_ + j];
}

Matrix ResidualFactorization::block(int i, int j) const {
  if (i < 0 || j < 0) return Matrix::Zero(n_, n_);
  const int s = slot(i, j);
  if (s < 0) return Matrix::Zero(n_, n_);
  return i <= j ? blocks_[s] : Matrix(blocks_[s].transpose());
}

ResidualFactorization ResidualFactorization::precompute(const AffineOperatorFamily& family, const Matrix& V,
                                                        unsigned workers) {
  ResidualFactorization r;
  r.extend(family, V, workers);
  return r;
}

void ResidualFactorization::extend(const AffineOperatorFamily& family, const Matrix& V, unsigned workers) {
  if (V.rows() != family.size()) throw DimensionMismatch("basis rows do not match the family size");
  if (V.cols() < n_) throw DimensionMismatch("extend needs a basis at least as large as the current one");
  const Index n_old = n_;
  const Index N = V.cols();
  const Dictionary dict = build_dictionary(family);
  if (n_old > 0 && (dict.mats.size() != n_unique_ || ambient_ != V.rows())) {
    throw DimensionMismatch("extend called with a different operator family");
  }

  std::vector<Applied> applied(dict.mats.size());
  parallel_for(dict.mats.size(), workers,
               [&](std::size_t m) { applied[m] = apply_component(dict.mats[m], V, family.X); });

  if (n_old == 0) {
    n_unique_ = dict.mats.size();
    ambient_ = V.rows();
    direct_ = dict.direct;
    adjoint_ = dict.adjoint;
    slot_.assign(n_unique_ * n_unique_, -1);
    pairs_.clear();
    blocks_.clear();
    std::set<std::pair<int, int>> wanted;
    for (const auto& ids : {ids_of(direct_), ids_of(adjoint_)})
      for (int i : ids)
        for (int j : ids)
          if (i <= j) wanted.insert({i, j});
    std::vector<Index> pa, pb;
    for (const auto& [i, j] : wanted) {
      intersect(applied[i].y_rows, applied[j].z_rows, pa, pb);
      if (pa.empty()) continue;
      slot_[static_cast<std::size_t>(i) * n_unique_ + j] = static_cast<int>(pairs_.size());
      pairs_.push_back({i, j});
    }
    blocks_.assign(pairs_.size(), Matrix());
  }

  parallel_for(pairs_.size(), workers, [&](std::size_t s) {
    const auto [i, j] = pairs_[s];
    const Applied& a = applied[i];
    const Applied& b = applied[j];
    std::vector<Index> pa, pb;
    intersect(a.y_rows, b.z_rows, pa, pb);
    const Matrix Ya = a.Y(pa, Eigen::all);
    const Matrix Zb = b.Z(pb, Eigen::all);
    Matrix G(N, N);
    if (n_old == 0) {
      G.noalias() = Ya.transpose() * Zb;
    } else {
      const Index dn = N - n_old;
      G.topLeftCorner(n_old, n_old) = blocks_[s];
      G.rightCols(dn).noalias() = Ya.transpose() * Zb.rightCols(dn);
      G.bottomLeftCorner(dn, n_old).noalias() = Ya.rightCols(dn).transpose() * Zb.leftCols(n_old);
    }
    blocks_[s] = std::move(G);
  });
  n_ = N;
}

ResidualQuadratic ResidualFactorization::quadratic(const ParameterPoint& mu, const Vector& c, ResidualSide side,
                                                   double k_for_magnitude) const {
  const ComponentIds& ids = side == ResidualSide::direct ? direct_ : adjoint_;
  if (mu.subdomain_count() != static_cast<int>(ids.A.size())) {
    throw DimensionMismatch("parameter subdomain count does not match the residual factors");
  }
  const Index n = c.size();
  if (n < 1 || n > n_) throw DimensionMismatch("coefficient vector longer than the stored basis");

  // |R|^2 = sum_ij w_i w_j c^T G_ij c with w = k alpha + beta.
  std::vector<double> alpha(n_unique_, 0.0), beta(n_unique_, 0.0);
  for (std::size_t k = 0; k < ids.A.size(); ++k) {
    const auto f = f_coefficients(mu.sub[k]);
    const auto g = g_coefficients(mu.sub[k]);
    for (int p = 0; p < 6; ++p)
      if (ids.A[k][p] >= 0) alpha[ids.A[k][p]] -= f[p];
    for (int q = 0; q < 4; ++q)
      if (ids.B[k][q] >= 0) beta[ids.B[k][q]] += g[q];
  }
  if (ids.bc >= 0) alpha[ids.bc] -= 1.0;

  ResidualQuadratic out;
  for (std::size_t s = 0; s < pairs_.size(); ++s) {
    const auto [i, j] = pairs_[s];
    const double wi = k_for_magnitude * alpha[i] + beta[i];
    const double wj = k_for_magnitude * alpha[j] + beta[j];
    if (alpha[i] == 0.0 && beta[i] == 0.0) continue;
    if (alpha[j] == 0.0 && beta[j] == 0.0) continue;
    const double v = c.dot(blocks_[s].topLeftCorner(n, n) * c);
    const double mult = i == j ? 1.0 : 2.0;
    // For i != j the pair contributes w_i w_j (v_ij + v_ji) = 2 w_i w_j v.
    out.a2 += mult * alpha[i] * alpha[j] * v;
    out.a1 += mult * (alpha[i] * beta[j] + beta[i] * alpha[j]) * v;
    out.a0 += mult * beta[i] * beta[j] * v;
    out.magnitude += mult * std::abs(wi * wj * v);
  }
  return out;
}

double ResidualFactorization::online_norm(const ParameterPoint& mu, const Vector& c, double k_N,
                                          ResidualSide side) const {
  const ResidualQuadratic q = quadratic(mu, c, side, k_N);
  const double value = q.at(k_N);
  if (value >= 0.0) return std::sqrt(value);
  if (value >= -1e-12 * q.magnitude) return 0.0;
  throw NegativeQuadraticForm("c^T G c = " + std::to_string(value) + " with term magnitude " +
                              std::to_string(q.magnitude));
}

Matrix ResidualFactorization::D(int k, int l, int p, int pp) const {
  return block(direct_.A.at(k).at(p), direct_.A.at(l).at(pp));
}
Matrix ResidualFactorization::E(int k, int l, int p, int q) const {
  return block(direct_.A.at(k).at(p), direct_.B.at(l).at(q));
}
Matrix ResidualFactorization::F(int k, int l, int q, int qq) const {
  return block(direct_.B.at(k).at(q), direct_.B.at(l).at(qq));
}
Matrix ResidualFactorization::D_bc(int k, int p) const { return block(direct_.bc, direct_.A.at(k).at(p)); }
Matrix ResidualFactorization::E_bc(int k, int q) const { return block(direct_.bc, direct_.B.at(k).at(q)); }
Matrix ResidualFactorization::F_bc() const { return block(direct_.bc, direct_.bc); }

namespace {

nlohmann::json ids_to_json(const ResidualFactorization::ComponentIds& ids) {
  return {{"A", ids.A}, {"B", ids.B}, {"bc", ids.bc}};
}

ResidualFactorization::ComponentIds ids_from_json(const nlohmann::json& j) {
  ResidualFactorization::ComponentIds ids;
  ids.A = j.at("A").get<std::vector<std::array<int, 6>>>();
  ids.B = j.at("B").get<std::vector<std::array<int, 4>>>();
  ids.bc = j.at("bc").get<int>();
  return ids;
}

}  // namespace

void ResidualFactorization::save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir / "blocks");
  nlohmann::json j;
  j["format_version"] = kFormatVersion;
  j["dim"] = n_;
  j["ambient_dim"] = ambient_;
  j["dictionary_size"] = n_unique_;
  j["direct"] = ids_to_json(direct_);
  j["adjoint"] = ids_to_json(adjoint_);
  auto& pairs = j["blocks"] = nlohmann::json::array();
  for (std::size_t s = 0; s < pairs_.size(); ++s) {
    const std::string file = "blocks/G_" + std::to_string(pairs_[s].first) + "_" +
                             std::to_string(pairs_[s].second) + ".mtx";
    write_dense_mtx(dir / file, blocks_[s]);
    pairs.push_back({{"i", pairs_[s].first}, {"j", pairs_[s].second}, {"file", file}});
  }
  std::ofstream(dir / "manifest.json") << j.dump(1) << '\n';
}

ResidualFactorization ResidualFactorization::load(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw ConfigError("missing " + (dir / "manifest.json").string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed residual manifest: ") + e.what());
  }
  if (j.value("format_version", -1) != kFormatVersion) {
    throw ArtifactVersionMismatch("residual factors have format version " +
                                  std::to_string(j.value("format_version", -1)) + ", expected " +
                                  std::to_string(kFormatVersion));
  }
  ResidualFactorization r;
  r.n_ = j.at("dim").get<Index>();
  r.ambient_ = j.at("ambient_dim").get<Index>();
  r.n_unique_ = j.at("dictionary_size").get<std::size_t>();
  r.direct_ = ids_from_json(j.at("direct"));
  r.adjoint_ = ids_from_json(j.at("adjoint"));
  r.slot_.assign(r.n_unique_ * r.n_unique_, -1);
  for (const auto& b : j.at("blocks")) {
    const int i = b.at("i").get<int>();
    const int jj = b.at("j").get<int>();
    r.slot_[static_cast<std::size_t>(i) * r.n_unique_ + jj] = static_cast<int>(r.pairs_.size());
    r.pairs_.push_back({i, jj});
    Matrix G = read_dense_mtx(dir / b.at("file").get<std::string>());
    if (G.rows() != r.n_ || G.cols() != r.n_) throw ConfigError("residual block has the wrong size");
    r.blocks_.push_back(std::move(G));
  }
  return r;
}

}  // namespace rbeig
