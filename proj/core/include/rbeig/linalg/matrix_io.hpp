#pragma once

#include <filesystem>

#include "rbeig/linalg/types.hpp"

namespace rbeig {

/// Matrix Market coordinate format, general real. Values are written with
/// 17 significant digits so a round trip is exact.
void write_mtx(const std::filesystem::path& path, const SparseMatrix& A);
SparseMatrix read_mtx(const std::filesystem::path& path);

/// Matrix Market array format (column-major), general real.
void write_dense_mtx(const std::filesystem::path& path, const Matrix& A);
Matrix read_dense_mtx(const std::filesystem::path& path);

/// Plain comma-separated rows without header.
void write_csv_matrix(const std::filesystem::path& path, const Matrix& A);
Matrix read_csv_matrix(const std::filesystem::path& path);

}  // namespace rbeig
