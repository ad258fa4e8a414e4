#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <random>

namespace tunable {

/// Scenario matrix (rows theta_i) with the constants of the robust problems.
struct ScenarioData {
  Eigen::MatrixXd O;  ///< n x d
  Eigen::VectorXd theta_bar;
  double sigma = 1e-3;
  double upsilon = 100.0;
  double mu = 0.0;
  double p = 1.0;
  std::uint64_t seed = 0;
  /// Extreme eigenvalues of O O^T, filled by compute_spectrum().
  double gram_max = 0.0;
  double gram_min = 0.0;

  [[nodiscard]] Eigen::Index n() const { return O.rows(); }
  [[nodiscard]] Eigen::Index d() const { return O.cols(); }
  /// Recomputes theta_bar and the Gram spectrum from O.
  void refresh();
};

/// Deterministic generator seeded from a master seed and any number of stream labels.
std::mt19937_64 make_rng(std::uint64_t master, std::initializer_list<std::uint64_t> labels);

/// n rows with i.i.d. N(0, 1/p) entries.
ScenarioData generate_scenarios(Eigen::Index n, Eigen::Index d, double p, std::uint64_t seed);

/// lambda_min(O O^T) / lambda_max(O O^T), 0 when below 1e-10 relative.
double kappa_hat(const ScenarioData& data);

/// lambda_max(O O^T) = ||O||_2^2.
double spectral_norm_squared(const ScenarioData& data);

/// Uniform draw on the unit simplex (normalized exponentials).
Eigen::VectorXd uniform_simplex_point(Eigen::Index d, std::mt19937_64& rng);

/// Instance file: `# key = value` header lines followed by the rows of O as CSV.
void write_instance(const std::filesystem::path& path, const ScenarioData& data);
ScenarioData read_instance(const std::filesystem::path& path);

}  // namespace tunable
