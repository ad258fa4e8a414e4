#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "tunable/config.hpp"
#include "tunable/cost_model.hpp"
#include "tunable/fgm.hpp"
#include "tunable/schedule.hpp"

namespace tunable {

/// h_r: logarithmic for r == 0, power otherwise.
CostModel cost_for_exponent(double r, Interval domain = {});

struct BaselineParams {
  double delta_ref = 1e-3;
  double mu = 0.0;
  double L = 1.0;
  std::size_t N = 1;
  int linear_sign = -1;
};

/// constant: delta_ref; poly3: delta_ref (k+1)^{-3}; linear: delta_ref (1 - sqrt(mu/L))^{s k}.
Schedule baseline_schedule(ScheduleName name, const BaselineParams& params);

/// Schedule of `family` spending the same modeled budget as the constant reference.
Schedule match_budget(ScheduleName family, const ScheduleProblem& p);

/// Eighty-iteration log-squared instance with three cost groups: a_k = k + 1,
/// b_k in {3, 2, 8} / 420, delta_ref = 1e-4, m = 0, M = 2.
ScheduleProblem toy_problem();

/// sum_k h(delta_k), evaluated without domain checks.
double modeled_cost(const CostModel& cost, const std::vector<double>& deltas);

/// One point of the experiment grid.
struct Cell {
  long d = 0;
  double mu = 0.0;
  double r = 0.0;
  std::size_t N = 0;
  double delta_ref = 0.0;

  [[nodiscard]] std::string label() const;
};

struct RunResult {
  ScheduleName schedule = ScheduleName::constant;
  std::uint64_t seed = 0;
  std::vector<RunRecord> trajectory;
  double terminal_objective = 0.0;
  /// Lower bound on F* certified at the terminal point.
  double fstar_bound = 0.0;
  double gap = 0.0;
  double total_work = 0.0;
  double modeled_cost = 0.0;
  double final_bound = 0.0;
  std::size_t exhausted_calls = 0;
  bool failed = false;
  std::string error;
};

struct CellResult {
  Cell cell;
  double L = 0.0;
  /// Best lower bound on F* over the reference run and every terminal point.
  double fstar = 0.0;
  /// Offline schedules (the bootstrap part for online_tunable).
  std::vector<std::pair<ScheduleName, Schedule>> schedules;
  std::vector<RunResult> runs;
};

struct InstanceInfo {
  long d = 0;
  double kappa_hat = 0.0;
  double norm_squared = 0.0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<InstanceInfo> instances;
  std::vector<CellResult> cells;
};

struct SummaryRow {
  int experiment = 0;
  ScheduleName schedule = ScheduleName::constant;
  double mu = 0.0;
  double r = 0.0;
  std::size_t N = 0;
  double delta_ref = 0.0;
  double median_gap = 0.0;
  double mean_gap = 0.0;
  double total_inner_work = 0.0;
  long d = 0;
};

using LogFn = std::function<void(const std::string&)>;

/// Runs every (cell, schedule, seed) combination of the config.
ExperimentResult run_experiment(const ExperimentConfig& config, const LogFn& log = {});

/// Median and mean terminal gap plus mean inner work per (cell, schedule), over successful runs.
std::vector<SummaryRow> summarize(const ExperimentResult& result);

/// Writes summary.csv at the top of `dir`, and per cell a directory with
/// trajectory.csv and <schedule>/schedule.csv.
void emit_outputs(const ExperimentResult& result, const std::filesystem::path& dir);

}  // namespace tunable
