#include <benchmark/benchmark.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "tunable/certificates.hpp"
#include "tunable/lambert_w.hpp"
#include "tunable/oracles.hpp"
#include "tunable/scenarios.hpp"
#include "tunable/schedule_solver.hpp"
#include "tunable/simplex.hpp"

namespace {

using namespace tunable;

ScheduleProblem fgm_problem(std::size_t n, CostKind kind) {
  const auto certs = fixed_step_certificates(n, 10.0, 0.0);
  const auto coeffs = impact_coefficients_fgm(certs);
  CostModel h = CostModel::power(0.5);
  if (kind == CostKind::logarithmic) h = CostModel::logarithmic();
  if (kind == CostKind::log_squared) h = CostModel::log_squared();
  return {coeffs.a, coeffs.b, 1e-3, 0.0, 100.0, h};
}

void BM_SolveAccuracy(benchmark::State& state, CostKind kind) {
  const auto p = fgm_problem(static_cast<std::size_t>(state.range(0)), kind);
  for (auto _ : state) benchmark::DoNotOptimize(solve_accuracy(p));
  state.SetComplexityN(state.range(0));
}
BENCHMARK_CAPTURE(BM_SolveAccuracy, power, CostKind::power)->RangeMultiplier(4)->Range(16, 16384)->Complexity();
BENCHMARK_CAPTURE(BM_SolveAccuracy, log, CostKind::logarithmic)->RangeMultiplier(4)->Range(16, 16384)->Complexity();
BENCHMARK_CAPTURE(BM_SolveAccuracy, logsq, CostKind::log_squared)->RangeMultiplier(4)->Range(16, 16384)->Complexity();

void BM_SolveWork(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  WorkProblem p;
  p.a.resize(static_cast<std::size_t>(state.range(0)));
  p.b.resize(p.a.size());
  for (auto& v : p.a) v = u(rng);
  for (auto& v : p.b) v = u(rng);
  p.omega_bar = 10.0 * static_cast<double>(p.a.size());
  p.omega_M = 2.0;
  p.omega_m = 20.0;
  p.r = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(solve_work(p));
}
BENCHMARK(BM_SolveWork)->RangeMultiplier(4)->Range(16, 16384);

void BM_LambertW(benchmark::State& state) {
  std::vector<double> xs;
  for (int i = -8; i <= 12; ++i) xs.push_back(std::pow(10.0, i));
  for (auto _ : state) {
    for (double x : xs) benchmark::DoNotOptimize(lambert_w0(x));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(xs.size()));
}
BENCHMARK(BM_LambertW);

void BM_ProjectSimplex(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  Eigen::VectorXd v(state.range(0));
  for (auto& x : v) x = g(rng);
  for (auto _ : state) benchmark::DoNotOptimize(project_simplex(v));
}
BENCHMARK(BM_ProjectSimplex)->Range(8, 4096);

void BM_HullOracle(benchmark::State& state, bool warm) {
  ScenarioData data = generate_scenarios(100, 200, 0.2, 7);
  data.mu = 0.1;
  auto rng = make_rng(3, {});
  const Eigen::VectorXd x = uniform_simplex_point(data.d(), rng);
  const Eigen::VectorXd step = uniform_simplex_point(data.d(), rng);
  const double delta = std::pow(10.0, -static_cast<double>(state.range(0)));
  InnerState shared;
  double omega = 0.0;
  std::size_t k = 0;
  for (auto _ : state) {
    // Walk along a short path so warm starts see a moving target.
    const Eigen::VectorXd y = x + 1e-3 * static_cast<double>(k++ % 10) * (step - x);
    InnerState cold;
    omega += hull_oracle(data, y, delta, warm ? shared : cold, 1000000).inner_work;
  }
  state.counters["omega"] = benchmark::Counter(omega, benchmark::Counter::kAvgIterations);
}
BENCHMARK_CAPTURE(BM_HullOracle, cold, false)->DenseRange(2, 8, 3);
BENCHMARK_CAPTURE(BM_HullOracle, warm, true)->DenseRange(2, 8, 3);

}  // namespace

BENCHMARK_MAIN();
