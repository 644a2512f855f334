#pragma once

#include "rbeig/linalg/types.hpp"

namespace rbeig {

/// Closed real interval.
struct Interval {
  double low = 0.0;
  double high = 0.0;

  bool contains(double z) const { return z >= low && z <= high; }
  /// Distance from a real point; zero inside.
  double distance(double z) const;
};

/// Real numerical range {<v, Qv> : |v| = 1, v real}. The skew part of Q does
/// not contribute to a real quadratic form, so this is the spectral interval
/// of (Q + Q^T) / 2.
Interval numerical_range_interval(const Matrix& Q);

}  // namespace rbeig
