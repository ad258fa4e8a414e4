#pragma once

#include <vector>

#include "tunable/schedule.hpp"

namespace tunable::testing {

/// Dual-bisection answer of an allocation problem, computed in long double.
struct ReferenceSolution {
  std::vector<double> values;
  /// Accuracy: the negative multiplier lambda with h'(d_k) = lambda a_k / b_k.
  /// Work: the multiplier of the budget constraint.
  double multiplier = 0.0;
};

/// Bisects the budget equation over the clamped stationary schedule. The
/// derivative inverse is evaluated by its own scalar bisection for the
/// log-squared kind, so no part of the library solver is reused.
ReferenceSolution reference_accuracy(const ScheduleProblem& p);

/// Minimizes sum a_k d_k(omega_k) with d_k = (omega_k / b_k)^{-1/r} (r > 0),
/// or the proportional split clamp(s * b_k) for r == 0, under the work budget.
ReferenceSolution reference_work(const WorkProblem& p);

}  // namespace tunable::testing
