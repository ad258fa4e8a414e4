#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "tunable/schedule.hpp"

namespace tunable {

/// rho[k] = j iff nu[k] is the (j+1)-th largest entry; ties go to the lower
/// original index first.
std::vector<std::size_t> descending_rank(std::span<const double> nu);

/// Inverse permutation of `rho`: order[j] is the index holding rank j.
std::vector<std::size_t> rank_order(std::span<const std::size_t> rho);

/// Total cost of the constant reference schedule, sum_k b_k h(delta_ref).
double reference_budget(const ScheduleProblem& p);

/// Modeled cost sum_k b_k h(d_k) of an arbitrary schedule.
double schedule_cost(const ScheduleProblem& p, std::span<const double> deltas);

double schedule_objective(std::span<const double> a, std::span<const double> values);
double schedule_objective(std::span<const double> a, const Schedule& s);

/// Interior-only closed form for h_r with r > 0. Returns nullopt when the
/// formula violates a bound, in which case solve_accuracy must be used.
std::optional<Schedule> closed_form_interior_accuracy(const ScheduleProblem& p);

/// Optimal accuracy schedule with its KKT certificate.
///
/// The multiplier is located by a monotone search on the clamped stationary
/// schedule, which fixes the saturated ranks; on the resulting partition the
/// multiplier is recomputed in closed form (power, logarithmic) or by a
/// bracketed root with Newton polish (log-squared). Any index that ends up
/// violating a bound moves into the saturated sets and the partition is
/// re-solved.
SolvedSchedule solve_accuracy(const ScheduleProblem& p);

/// Interior-only closed form of the work-controlled problem.
std::optional<Schedule> closed_form_interior_work(const WorkProblem& p);

SolvedSchedule solve_work(const WorkProblem& p);

/// Weights (a_k^r b_k)^{1/(r+1)} of the work allocation, computed in log space.
std::vector<double> work_weights(std::span<const double> a, std::span<const double> b, double r);

/// Exhaustive grid search used as an optimality oracle in tests (N <= 4).
struct BruteForceResult {
  Schedule schedule;
  double objective = 0.0;
  /// Grid spacing along each axis.
  double spacing = 0.0;
  /// sum_k a_k * spacing, the slack allowed when comparing against an exact solver.
  double error_bound = 0.0;
  std::size_t candidates_kept = 0;
};

BruteForceResult brute_force_oracle(const ScheduleProblem& p, std::size_t grid_points);

}  // namespace tunable
