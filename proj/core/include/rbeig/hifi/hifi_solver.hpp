#pragma once

#include <memory>

#include "rbeig/hifi/assembly.hpp"
#include "rbeig/linalg/power_iteration.hpp"

namespace rbeig {

/// High-fidelity direct + adjoint eigensolver for one parameter. Every call
/// performs one sparse LU factorization, recorded on the shared counter.
class HighFidelitySolver {
 public:
  HighFidelitySolver(std::shared_ptr<const AffineOperatorFamily> family, PowerIterationSettings settings);

  EigenSolution solve(const ParameterPoint& mu) const;

  long factorizations() const { return counter_->count.load(); }
  long solves() const { return solves_->load(); }
  const AffineOperatorFamily& family() const { return *family_; }
  const PowerIterationSettings& settings() const { return settings_; }

 private:
  std::shared_ptr<const AffineOperatorFamily> family_;
  PowerIterationSettings settings_;
  std::shared_ptr<FactorizationCounter> counter_;
  std::shared_ptr<std::atomic<long>> solves_;
};

}  // namespace rbeig
