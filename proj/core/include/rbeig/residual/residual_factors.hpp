#pragma once

#include <array>
#include <filesystem>
#include <vector>

#include "rbeig/hifi/assembly.hpp"
#include "rbeig/hifi/parameters.hpp"
#include "rbeig/linalg/types.hpp"

namespace rbeig {

enum class ResidualSide { direct, adjoint };

/// Squared residual norm as a polynomial in k_N: |R|^2 = a2 k^2 + a1 k + a0.
struct ResidualQuadratic {
  double a2 = 0.0;
  double a1 = 0.0;
  double a0 = 0.0;
  double magnitude = 0.0;  ///< sum of |individual terms| at the evaluated k_N, for cancellation control

  double at(double k) const { return (a2 * k + a1) * k + a0; }
};

/// Reduced residual factors for the dual norm |r|_{X^{-1}}.
///
/// The residual (B_mu - k_N A_mu) V c is a weighted sum of the affine
/// components applied to V c. Components that coincide (including the
/// transposes needed on the adjoint side, e.g. a coupling mass block and the
/// transpose of its mirror) are merged into one entry of a dictionary
/// C_1..C_m, and the factor blocks
///
///   G_ij = (C_i V)^T X^{-1} (C_j V),  i <= j
///
/// are stored for every pair that is not structurally zero. The classical
/// D, E, F and boundary blocks are all of this form and can be read back
/// through the accessors below.
class ResidualFactorization {
 public:
  static ResidualFactorization precompute(const AffineOperatorFamily& family, const Matrix& V,
                                          unsigned workers = 1);

  /// Recomputes for a basis whose first dim() columns are the current
  /// basis; only the new rows and columns of each block are formed.
  void extend(const AffineOperatorFamily& family, const Matrix& V, unsigned workers = 1);

  Index dim() const { return n_; }
  std::size_t dictionary_size() const { return n_unique_; }
  std::size_t stored_blocks() const;

  /// Coefficients of |R|^2 in k_N, using the leading c.size() basis vectors.
  ResidualQuadratic quadratic(const ParameterPoint& mu, const Vector& c, ResidualSide side,
                              double k_for_magnitude = 0.0) const;

  /// sqrt(c^T G c). A negative value above -1e-12 times the term magnitude
  /// is rounding and clamps to zero; below that NegativeQuadraticForm is
  /// thrown.
  double online_norm(const ParameterPoint& mu, const Vector& c, double k_N,
                     ResidualSide side = ResidualSide::direct) const;

  /// Classical blocks, e.g. D(k,l,p,p') = V^T A_{k,p}^T X^{-1} A_{l,p'} V.
  /// Indices are zero-based. Structurally zero blocks come back as zeros.
  Matrix D(int k, int l, int p, int pp) const;
  Matrix E(int k, int l, int p, int q) const;
  Matrix F(int k, int l, int q, int qq) const;
  Matrix D_bc(int k, int p) const;
  Matrix E_bc(int k, int q) const;
  Matrix F_bc() const;

  void save(const std::filesystem::path& dir) const;
  static ResidualFactorization load(const std::filesystem::path& dir);

  /// Ids into the dictionary; -1 for a zero component.
  struct ComponentIds {
    std::vector<std::array<int, 6>> A;
    std::vector<std::array<int, 4>> B;
    int bc = -1;
  };
  const ComponentIds& direct_ids() const { return direct_; }
  const ComponentIds& adjoint_ids() const { return adjoint_; }

 private:
  Matrix block(int i, int j) const;
  int slot(int i, int j) const;

  Index n_ = 0;
  Index ambient_ = 0;
  std::size_t n_unique_ = 0;
  ComponentIds direct_;
  ComponentIds adjoint_;
  std::vector<int> slot_;             ///< n_unique^2 table, -1 when structurally zero
  std::vector<std::pair<int, int>> pairs_;
  std::vector<Matrix> blocks_;
};

}  // namespace rbeig
