#include <algorithm>
#include <cmath>
#include <limits>

#include "tunable/error.hpp"
#include "tunable/schedule_solver.hpp"

namespace tunable {

BruteForceResult brute_force_oracle(const ScheduleProblem& p, std::size_t grid_points) {
  const std::size_t n = p.size();
  detail::require(n <= 4, "brute force oracle supports at most 4 iterations");
  detail::require(std::isfinite(p.upper()), "brute force oracle needs a finite upper bound");
  detail::require(grid_points >= 2, "brute force oracle needs at least 2 grid points");

  const double lo = p.lower();
  const double hi = p.upper();
  // With a zero floor h blows up at the left end, so the grid starts one cell in.
  const bool open_left = lo <= 0.0;
  const double spacing = open_left ? hi / static_cast<double>(grid_points)
                                   : (hi - lo) / static_cast<double>(grid_points - 1);
  std::vector<double> grid(grid_points);
  for (std::size_t i = 0; i < grid_points; ++i) {
    grid[i] = open_left ? spacing * static_cast<double>(i + 1) : lo + spacing * static_cast<double>(i);
  }
  grid.back() = hi;

  const CostModel& h = p.cost();
  // Per-axis weighted cost and one-cell cost variation.
  std::vector<std::vector<double>> cost(n, std::vector<double>(grid_points));
  std::vector<std::vector<double>> slack(n, std::vector<double>(grid_points));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < grid_points; ++i) {
      const double here = h.raw_value(grid[i]);
      const double neighbour = i + 1 < grid_points ? grid[i + 1] : grid[i - 1];
      cost[k][i] = p.b()[k] * here;
      slack[k][i] = p.b()[k] * std::abs(here - h.raw_value(neighbour));
    }
  }

  const double budget = reference_budget(p);
  BruteForceResult best;
  best.objective = std::numeric_limits<double>::infinity();
  best.spacing = spacing;
  for (double a : p.a()) best.error_bound += a * spacing;

  std::vector<std::size_t> idx(n, 0);
  while (true) {
    double spent = 0.0;
    double tol = 0.0;
    double obj = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      spent += cost[k][idx[k]];
      tol = std::max(tol, slack[k][idx[k]]);
      obj += p.a()[k] * grid[idx[k]];
    }
    if (std::abs(spent - budget) <= tol) {
      ++best.candidates_kept;
      if (obj < best.objective) {
        best.objective = obj;
        best.schedule.values.resize(n);
        for (std::size_t k = 0; k < n; ++k) best.schedule.values[k] = grid[idx[k]];
      }
    }
    std::size_t k = 0;
    while (k < n && ++idx[k] == grid_points) idx[k++] = 0;
    if (k == n) break;
  }
  if (best.candidates_kept == 0) throw NumericalFailure("brute force grid kept no candidate");
  best.schedule.kind = ScheduleKind::accuracy;
  return best;
}

}  // namespace tunable
