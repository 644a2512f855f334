#include "rbeig/linalg/matrix_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <unsupported/Eigen/SparseExtra>

#include "rbeig/errors.hpp"

namespace rbeig {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << std::setprecision(17);
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  return in;
}

}  // namespace

void write_mtx(const std::filesystem::path& path, const SparseMatrix& A) {
  auto out = open_out(path);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << A.rows() << ' ' << A.cols() << ' ' << A.nonZeros() << '\n';
  for (Index j = 0; j < A.outerSize(); ++j) {
    for (SparseMatrix::InnerIterator it(A, j); it; ++it) {
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
    }
  }
  if (!out) throw ConfigError("write failed for " + path.string());
}

SparseMatrix read_mtx(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ConfigError("missing " + path.string());
  SparseMatrix A;
  if (!Eigen::loadMarket(A, path.string())) throw ConfigError("malformed Matrix Market file " + path.string());
  A.makeCompressed();
  return A;
}

void write_dense_mtx(const std::filesystem::path& path, const Matrix& A) {
  auto out = open_out(path);
  out << "%%MatrixMarket matrix array real general\n";
  out << A.rows() << ' ' << A.cols() << '\n';
  for (Index j = 0; j < A.cols(); ++j)
    for (Index i = 0; i < A.rows(); ++i) out << A(i, j) << '\n';
  if (!out) throw ConfigError("write failed for " + path.string());
}

Matrix read_dense_mtx(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("%%MatrixMarket matrix array", 0) != 0) {
    throw ConfigError("not a dense Matrix Market file: " + path.string());
  }
  while (std::getline(in, line) && !line.empty() && line[0] == '%') {
  }
  std::istringstream hdr(line);
  Index rows = 0, cols = 0;
  if (!(hdr >> rows >> cols) || rows < 0 || cols < 0) throw ConfigError("bad size line in " + path.string());
  Matrix A(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i)
      if (!(in >> A(i, j))) throw ConfigError("truncated dense matrix " + path.string());
  return A;
}

void write_csv_matrix(const std::filesystem::path& path, const Matrix& A) {
  auto out = open_out(path);
  for (Index i = 0; i < A.rows(); ++i) {
    for (Index j = 0; j < A.cols(); ++j) out << (j ? "," : "") << A(i, j);
    out << '\n';
  }
}

Matrix read_csv_matrix(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (!rows.empty() && row.size() != rows.front().size()) throw ConfigError("ragged CSV " + path.string());
    rows.push_back(std::move(row));
  }
  const Index r = static_cast<Index>(rows.size());
  const Index c = r ? static_cast<Index>(rows.front().size()) : 0;
  Matrix A(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) A(i, j) = rows[i][j];
  return A;
}

}  // namespace rbeig
