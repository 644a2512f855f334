#include "rbeig/linalg/norms.hpp"

#include <Eigen/SVD>

#include "rbeig/linalg/power_iteration.hpp"

namespace rbeig {

double spectral_norm(const Matrix& T) {
  if (T.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(T);
  return svd.singularValues()[0];
}

double spectral_norm(const SparseMatrix& T, double rel_tol, int max_iterations) {
  if (T.nonZeros() == 0) return 0.0;
  Vector x = positive_start_vector(T.cols(), 0x5eed);
  double sigma2 = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    Vector y = T.transpose() * (T * x);
    const double next = x.dot(y);
    const double ny = y.norm();
    if (ny == 0.0) return 0.0;
    x = y / ny;
    if (it > 0 && std::abs(next - sigma2) <= rel_tol * next) {
      sigma2 = next;
      break;
    }
    sigma2 = next;
  }
  return std::sqrt(sigma2);
}

}  // namespace rbeig
