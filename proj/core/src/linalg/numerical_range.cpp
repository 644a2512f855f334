#include "rbeig/linalg/numerical_range.hpp"

#include <Eigen/Eigenvalues>

#include "rbeig/errors.hpp"

namespace rbeig {

double Interval::distance(double z) const {
  if (z < low) return low - z;
  if (z > high) return z - high;
  return 0.0;
}

Interval numerical_range_interval(const Matrix& Q) {
  if (Q.rows() != Q.cols() || Q.rows() == 0) {
    throw DimensionMismatch("numerical range needs a non-empty square matrix");
  }
  const Matrix sym = 0.5 * (Q + Q.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw SolverFailure("symmetric eigensolver failed");
  const auto& ev = es.eigenvalues();
  return Interval{ev[0], ev[ev.size() - 1]};
}

}  // namespace rbeig
