#include "rbeig/rom/basis.hpp"

#include <fstream>

#include <Eigen/SVD>
#include <json.hpp>

#include "rbeig/errors.hpp"
#include "rbeig/linalg/matrix_io.hpp"

namespace rbeig {

namespace {
constexpr double kDropRatio = 1e-10;
constexpr double kRankFloor = 1e-14;

Matrix stack(const std::vector<Vector>& snapshots) {
  if (snapshots.empty()) throw EmptyBasis("no snapshots");
  const Index n = snapshots.front().size();
  Matrix S(n, static_cast<Index>(snapshots.size()));
  for (std::size_t j = 0; j < snapshots.size(); ++j) {
    if (snapshots[j].size() != n) throw DimensionMismatch("snapshots have different sizes");
    S.col(static_cast<Index>(j)) = snapshots[j];
  }
  return S;
}
}  // namespace

ReducedBasis orthonormalize(const std::vector<Vector>& snapshots, const GramOperator& X,
                            const std::vector<SnapshotTag>& tags) {
  if (!tags.empty() && tags.size() != snapshots.size()) {
    throw DimensionMismatch("one tag per snapshot expected");
  }
  std::vector<Vector> kept;
  ReducedBasis out;
  for (std::size_t j = 0; j < snapshots.size(); ++j) {
    Vector v = snapshots[j];
    if (v.size() != X.size()) throw DimensionMismatch("snapshot size does not match the Gram operator");
    const double original = X.norm(v);
    if (!(original > 0.0)) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vector& q : kept) v -= X.inner(q, v) * q;
    }
    const double remaining = X.norm(v);
    if (remaining < kDropRatio * original) continue;
    kept.push_back(v / remaining);
    if (!tags.empty()) out.provenance.push_back(tags[j]);
  }
  if (kept.empty()) throw EmptyBasis("all snapshots were linearly dependent or zero");
  out.V = stack(kept);
  return out;
}

Vector pod_singular_values(const std::vector<Vector>& snapshots, const GramOperator& X) {
  const Matrix W = X.whiten(stack(snapshots));
  Eigen::BDCSVD<Matrix> svd(W);
  return svd.singularValues();
}

ReducedBasis pod_compress(const std::vector<Vector>& snapshots, const GramOperator& X, Index target_dim) {
  if (target_dim < 1 || target_dim > static_cast<Index>(snapshots.size())) {
    throw InputError("POD target dimension must lie in [1, number of snapshots]");
  }
  const Matrix S = stack(snapshots);
  if (S.rows() != X.size()) throw DimensionMismatch("snapshot size does not match the Gram operator");
  const Matrix W = X.whiten(S);
  Eigen::BDCSVD<Matrix> svd(W, Eigen::ComputeThinU);
  const Vector& s = svd.singularValues();
  Index rank = 0;
  while (rank < s.size() && s[rank] > kRankFloor * s[0]) ++rank;
  if (rank < target_dim) {
    throw RankDeficient("snapshot family has numerical rank " + std::to_string(rank) + " < " +
                        std::to_string(target_dim));
  }
  ReducedBasis out;
  out.V = X.unwhiten(svd.matrixU().leftCols(target_dim));
  // Fix the sign of each mode so that repeated runs agree.
  for (Index j = 0; j < out.V.cols(); ++j) {
    Index imax = 0;
    out.V.col(j).cwiseAbs().maxCoeff(&imax);
    if (out.V(imax, j) < 0.0) out.V.col(j) *= -1.0;
  }
  return out;
}

void save_basis(const std::filesystem::path& dir, const ReducedBasis& basis) {
  std::filesystem::create_directories(dir);
  write_dense_mtx(dir / "V.mtx", basis.V);
  nlohmann::json j;
  j["rows"] = basis.V.rows();
  j["cols"] = basis.V.cols();
  auto& prov = j["provenance"] = nlohmann::json::array();
  for (const auto& t : basis.provenance) {
    prov.push_back({{"set", t.set}, {"index", t.index},
                    {"kind", t.kind == SnapshotKind::direct ? "direct" : "adjoint"}});
  }
  std::ofstream(dir / "basis.json") << j.dump(2) << '\n';
}

ReducedBasis load_basis(const std::filesystem::path& dir) {
  std::ifstream in(dir / "basis.json");
  if (!in) throw ConfigError("missing " + (dir / "basis.json").string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed basis manifest: ") + e.what());
  }
  ReducedBasis b;
  b.V = read_dense_mtx(dir / "V.mtx");
  if (b.V.rows() != j.at("rows").get<Index>() || b.V.cols() != j.at("cols").get<Index>()) {
    throw ConfigError("basis manifest does not match V.mtx");
  }
  for (const auto& t : j.at("provenance")) {
    b.provenance.push_back({t.at("set").get<std::string>(), t.at("index").get<long>(),
                            t.at("kind").get<std::string>() == "direct" ? SnapshotKind::direct
                                                                        : SnapshotKind::adjoint});
  }
  return b;
}

}  // namespace rbeig
