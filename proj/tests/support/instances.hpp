#pragma once

#include <cstddef>
#include <random>

#include "tunable/schedule.hpp"

namespace tunable::testing {

struct AccuracyDraw {
  CostKind kind = CostKind::power;
  double r = 1.0;
  std::size_t n_min = 2;
  std::size_t n_max = 40;
  /// Draw a finite upper factor M (always finite for the log kinds).
  bool finite_upper = true;
  /// Draw a positive lower factor m (zero otherwise).
  bool positive_lower = true;
};

/// Random instance with a, b log-uniform over several decades.
ScheduleProblem random_accuracy_problem(std::mt19937_64& rng, const AccuracyDraw& draw);

/// Power instance with m = 0 and M = inf, so the interior closed form applies.
ScheduleProblem random_interior_problem(std::mt19937_64& rng, double r, std::size_t n);

/// Work instance; when `bounded` is false the bounds are 0 and +inf.
WorkProblem random_work_problem(std::mt19937_64& rng, double r, std::size_t n, bool bounded);

/// Cost exponent for the kind: a random power exponent, 0 otherwise.
double random_exponent(std::mt19937_64& rng);

}  // namespace tunable::testing
