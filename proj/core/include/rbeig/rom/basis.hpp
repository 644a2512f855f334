#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rbeig/linalg/gram.hpp"
#include "rbeig/linalg/types.hpp"

namespace rbeig {

enum class SnapshotKind { direct, adjoint };

/// Where a snapshot came from: which parameter set, the index inside it and
/// whether it is a direct or adjoint eigenvector.
struct SnapshotTag {
  std::string set = "train";
  long index = -1;
  SnapshotKind kind = SnapshotKind::direct;
  bool operator==(const SnapshotTag&) const = default;
};

/// Columns of V are orthonormal in the X inner product.
struct ReducedBasis {
  Matrix V;
  std::vector<SnapshotTag> provenance;

  Index dim() const { return V.cols(); }
  Index ambient_dim() const { return V.rows(); }
};

/// Modified Gram-Schmidt with one re-orthogonalization pass. A vector whose
/// norm after projection falls under 1e-10 of its original norm is dropped
/// together with its tag. Throws EmptyBasis when nothing survives.
ReducedBasis orthonormalize(const std::vector<Vector>& snapshots, const GramOperator& X,
                            const std::vector<SnapshotTag>& tags = {});

/// Leading left singular directions of the X-weighted snapshot matrix.
/// Throws RankDeficient when fewer than `target_dim` singular values exceed
/// 1e-14 times the largest one.
ReducedBasis pod_compress(const std::vector<Vector>& snapshots, const GramOperator& X, Index target_dim);

/// Singular values of the X-weighted snapshot matrix (energy spectrum).
Vector pod_singular_values(const std::vector<Vector>& snapshots, const GramOperator& X);

/// Dense Matrix Market file plus a JSON manifest with the provenance.
void save_basis(const std::filesystem::path& dir, const ReducedBasis& basis);
ReducedBasis load_basis(const std::filesystem::path& dir);

}  // namespace rbeig
