#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tunable {

enum class ScheduleName { tunable, constant, poly3, linear, online_tunable };

std::string to_string(ScheduleName name);
ScheduleName parse_schedule_name(const std::string& text);

/// Parameters of one experiment run. Lists expand into a grid of cells.
struct ExperimentConfig {
  int experiment = 1;
  std::vector<long> d{30};
  long n = 100;
  double p = 10.0;
  double sigma = 1e-3;
  double upsilon = 100.0;
  std::vector<double> mu{0.0, 0.1};
  double alpha = 100.0;
  /// Cost exponents; empty means pick from kappa_hat (0 when positive, 1/2 otherwise).
  std::vector<double> r{0.0, 1.0};
  std::vector<double> delta_ref{1e-3};
  std::vector<std::size_t> N{500, 2000};
  double M = 100.0;
  double m = 0.0;
  std::size_t N_r = 50;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  std::vector<ScheduleName> schedules{ScheduleName::tunable, ScheduleName::constant};
  std::uint64_t data_seed = 20240501;
  std::size_t max_inner = 10000;
  /// Iterations of the reference run behind the F* estimate; 0 picks 2 * max(N).
  std::size_t fstar_iterations = 0;
  /// Inexactness of the reference run; 0 picks a per-experiment default.
  double fstar_delta = 0.0;
  /// Objective sampling cadence along trajectories; 0 samples only the last iterate.
  std::size_t sample_every = 10;
  /// Sign s of the linear baseline delta_ref * (1 - sqrt(mu/L))^{s k}.
  int linear_sign = -1;
  std::size_t threads = 1;

  [[nodiscard]] bool r_auto() const { return r.empty(); }
  void validate() const;
};

/// Desk-scale defaults for experiment 1, 2 or 3.
ExperimentConfig default_config(int experiment);

/// Parses `key = value` lines (`#` starts a comment) on top of default_config(experiment).
/// Unknown keys and keys that do not apply to the experiment are rejected.
ExperimentConfig parse_config(std::istream& in, int experiment);
ExperimentConfig load_config(const std::filesystem::path& path, int experiment);

/// Comma-separated seed list such as "0,1,2".
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

}  // namespace tunable
