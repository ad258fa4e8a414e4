#include "tunable/scenarios.hpp"

#include <Eigen/Eigenvalues>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tunable/csv_io.hpp"
#include "tunable/error.hpp"

namespace tunable {

void ScenarioData::refresh() {
  detail::require(O.rows() > 0 && O.cols() > 0, "scenario matrix must be nonempty");
  theta_bar = O.colwise().mean().transpose();
  // Eigensolve on the smaller Gram side; O O^T and O^T O share nonzero eigenvalues.
  const bool rows_side = O.rows() <= O.cols();
  const Eigen::MatrixXd gram = rows_side ? Eigen::MatrixXd(O * O.transpose())
                                         : Eigen::MatrixXd(O.transpose() * O);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalFailure("Gram eigensolve failed");
  gram_max = eig.eigenvalues().maxCoeff();
  gram_min = rows_side ? std::max(0.0, eig.eigenvalues().minCoeff()) : 0.0;
}

std::mt19937_64 make_rng(std::uint64_t master, std::initializer_list<std::uint64_t> labels) {
  std::vector<std::uint32_t> words;
  const auto push = [&](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(master);
  for (auto l : labels) push(l);
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

ScenarioData generate_scenarios(Eigen::Index n, Eigen::Index d, double p, std::uint64_t seed) {
  detail::require(n >= 1 && d >= 1, "need n, d >= 1");
  detail::require(p > 0.0, "generation scale p must be positive");
  auto rng = make_rng(seed, {0x5ce9a710});
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(p));
  ScenarioData data;
  data.O.resize(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) data.O(i, j) = normal(rng);
  }
  data.p = p;
  data.seed = seed;
  data.refresh();
  return data;
}

double kappa_hat(const ScenarioData& data) {
  if (data.gram_max <= 0.0) return 0.0;
  if (data.gram_min < 1e-10 * data.gram_max) return 0.0;
  return data.gram_min / data.gram_max;
}

double spectral_norm_squared(const ScenarioData& data) { return data.gram_max; }

Eigen::VectorXd uniform_simplex_point(Eigen::Index d, std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  Eigen::VectorXd x(d);
  for (Eigen::Index i = 0; i < d; ++i) x[i] = expo(rng);
  return x / x.sum();
}

void write_instance(const std::filesystem::path& path, const ScenarioData& data) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << "# sigma = " << format_double(data.sigma) << '\n'
      << "# upsilon = " << format_double(data.upsilon) << '\n'
      << "# mu = " << format_double(data.mu) << '\n'
      << "# p = " << format_double(data.p) << '\n'
      << "# seed = " << data.seed << '\n';
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    for (Eigen::Index j = 0; j < data.d(); ++j) {
      if (j > 0) out << ',';
      out << format_double(data.O(i, j));
    }
    out << '\n';
  }
}

ScenarioData read_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  ScenarioData data;
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      detail::require(eq != std::string::npos, "malformed instance header: " + line);
      std::string key = line.substr(1, eq - 1);
      key.erase(0, key.find_first_not_of(' '));
      key.erase(key.find_last_not_of(' ') + 1);
      const std::string value = line.substr(eq + 1);
      if (key == "sigma") data.sigma = parse_double(value, key);
      else if (key == "upsilon") data.upsilon = parse_double(value, key);
      else if (key == "mu") data.mu = parse_double(value, key);
      else if (key == "p") data.p = parse_double(value, key);
      else if (key == "seed") data.seed = static_cast<std::uint64_t>(std::stoull(value));
      else throw InvalidInput("unknown instance header key '" + key + "'");
      continue;
    }
    std::vector<double> row;
    for (const auto& cell : split_csv_line(line)) row.push_back(parse_double(cell, "matrix entry"));
    detail::require(rows.empty() || row.size() == rows.front().size(),
                    "instance rows differ in length");
    rows.push_back(std::move(row));
  }
  detail::require(!rows.empty(), "instance file has no matrix rows");
  data.O.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      data.O(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  data.refresh();
  return data;
}

}  // namespace tunable
