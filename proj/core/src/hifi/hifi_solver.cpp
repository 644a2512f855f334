#include "rbeig/hifi/hifi_solver.hpp"

namespace rbeig {

HighFidelitySolver::HighFidelitySolver(std::shared_ptr<const AffineOperatorFamily> family,
                                       PowerIterationSettings settings)
    : family_(std::move(family)),
      settings_(settings),
      counter_(std::make_shared<FactorizationCounter>()),
      solves_(std::make_shared<std::atomic<long>>(0)) {
  settings_.validate();
}

EigenSolution HighFidelitySolver::solve(const ParameterPoint& mu) const {
  const auto pencil = assemble_parametric(*family_, mu);
  ++*solves_;
  return solve_eigenpair(pencil.A, pencil.B, settings_, counter_.get());
}

}  // namespace rbeig
