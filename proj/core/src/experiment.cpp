#include "tunable/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "tunable/certificates.hpp"
#include "tunable/csv_io.hpp"
#include "tunable/error.hpp"
#include "tunable/online.hpp"
#include "tunable/oracles.hpp"
#include "tunable/scenarios.hpp"
#include "tunable/schedule_solver.hpp"

namespace tunable {

CostModel cost_for_exponent(double r, Interval domain) {
  detail::require(r >= 0.0, "cost exponent must be >= 0");
  if (r == 0.0) {
    domain.hi = std::min(domain.hi, CostModel::kLogSquaredCap);
    return CostModel::logarithmic(domain);
  }
  return CostModel::power(r, domain);
}

Schedule baseline_schedule(ScheduleName name, const BaselineParams& params) {
  detail::require(params.delta_ref > 0.0, "baseline needs a positive reference inexactness");
  detail::require(params.N >= 1, "baseline needs N >= 1");
  Schedule s{std::vector<double>(params.N, params.delta_ref), ScheduleKind::accuracy};
  switch (name) {
    case ScheduleName::constant:
      break;
    case ScheduleName::poly3:
      for (std::size_t k = 0; k < params.N; ++k) {
        const double base = static_cast<double>(k + 1);
        s.values[k] = params.delta_ref / (base * base * base);
      }
      break;
    case ScheduleName::linear: {
      detail::require(params.mu > 0.0, "the linear baseline needs mu > 0");
      detail::require(params.L > params.mu, "the linear baseline needs L > mu");
      detail::require(params.linear_sign == 1 || params.linear_sign == -1,
                      "linear_sign must be +1 or -1");
      const double log_rate = std::log1p(-std::sqrt(params.mu / params.L));
      for (std::size_t k = 0; k < params.N; ++k) {
        s.values[k] = params.delta_ref *
                      std::exp(params.linear_sign * static_cast<double>(k) * log_rate);
      }
      break;
    }
    case ScheduleName::tunable:
    case ScheduleName::online_tunable:
      throw InvalidInput("tunable schedules come from the solver, not from a baseline formula");
  }
  return s;
}

Schedule match_budget(ScheduleName family, const ScheduleProblem& p) {
  switch (family) {
    case ScheduleName::constant:
      return Schedule{std::vector<double>(p.size(), p.delta_ref()), ScheduleKind::accuracy};
    case ScheduleName::tunable:
      return solve_accuracy(p).schedule;
    default:
      throw InvalidInput("match_budget supports the tunable and constant families");
  }
}

ScheduleProblem toy_problem() {
  constexpr std::size_t kN = 80;
  std::vector<double> a(kN);
  std::vector<double> b(kN);
  for (std::size_t k = 0; k < kN; ++k) {
    a[k] = static_cast<double>(k + 1);
    b[k] = (k < 20 ? 3.0 : k < 40 ? 2.0 : 8.0) / 420.0;
  }
  return ScheduleProblem(std::move(a), std::move(b), 1e-4, 0.0, 2.0, CostModel::log_squared());
}

double modeled_cost(const CostModel& cost, const std::vector<double>& deltas) {
  double s = 0.0;
  for (double d : deltas) s += cost.raw_value(d);
  return s;
}

std::string Cell::label() const {
  std::ostringstream os;
  os << "d" << d << "_mu" << mu << "_r" << r << "_N" << N << "_dref" << delta_ref;
  return os.str();
}

namespace {

// Runs fn(i) for i in [0, count) on up to `threads` workers; the first
// exception is rethrown after all workers stop.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  const std::size_t workers = std::min(threads, count);
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

double median_of(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

ProblemKind problem_kind(int experiment) {
  return experiment == 1 ? ProblemKind::softmax : ProblemKind::hull;
}

double step_constant(const ExperimentConfig& c, const ScenarioData& data, double mu) {
  switch (c.experiment) {
    case 1: return c.upsilon * spectral_norm_squared(data) + mu;
    case 2: return 2.0 / c.sigma + mu;
    default: return 1.0 / c.sigma + mu;
  }
}

struct Instance {
  ScenarioData data;
  InstanceInfo info;
};

struct Reference {
  long d = 0;
  double mu = 0.0;
  double fstar = 0.0;
};

// Everything one FGM run needs besides the schedule.
struct RunSetup {
  const ExperimentConfig* config = nullptr;
  const ScenarioData* data = nullptr;
  double mu = 0.0;
  double L = 0.0;
  double r = 0.0;
  std::uint64_t seed = 0;
};

struct RunOutput {
  FgmResult fgm;
  double terminal_objective = 0.0;
  /// Lower bound on F* from the model at the terminal point.
  double fstar_bound = 0.0;
};

RunOutput execute_run(const RunSetup& s, const ScheduleFn& schedule, std::size_t N,
                      std::size_t sample_every) {
  const ExperimentConfig& c = *s.config;
  ScenarioData data = *s.data;
  data.mu = s.mu;
  const ProblemKind kind = problem_kind(c.experiment);
  const std::size_t objective_inner = c.max_inner * 100;

  auto start_rng = make_rng(c.data_seed, {static_cast<std::uint64_t>(data.d()), s.seed, 0});
  const Eigen::VectorXd x0 = uniform_simplex_point(data.d(), start_rng);

  FgmConfig fc;
  fc.mu = s.mu;
  fc.L_init = s.L;
  fc.L_cap = s.L;
  fc.mode = c.experiment == 3 ? StepMode::adaptive : StepMode::fixed_step;
  fc.sample_every = sample_every;

  // Noise directions are shared by every schedule of the same seed.
  auto noise_rng = make_rng(c.data_seed, {static_cast<std::uint64_t>(data.d()), s.seed, 1});
  const CostModel noise_cost = cost_for_exponent(s.r);
  InnerState oracle_state;
  OracleFn oracle;
  if (kind == ProblemKind::softmax) {
    oracle = [&](const Eigen::VectorXd& x, double delta) {
      return noisy_oracle(data, x, delta, c.alpha, noise_cost, noise_rng);
    };
  } else {
    oracle = [&](const Eigen::VectorXd& x, double delta) {
      return hull_oracle(data, x, delta, oracle_state, c.max_inner);
    };
  }
  InnerState objective_state;
  const ObjectiveFn objective = [&](const Eigen::VectorXd& x) {
    return objective_value(data, kind, x, 1e-10, objective_inner, &objective_state);
  };

  RunOutput out;
  out.fgm = fgm_run(fc, oracle, schedule, N, x0, objective);
  if (objective_state.w.size() == 0) objective_state = oracle_state;
  out.terminal_objective = objective(out.fgm.x);
  if (!out.fgm.trajectory.empty()) out.fgm.trajectory.back().objective = out.terminal_objective;
  out.fstar_bound = estimate_fstar(data, kind, out.fgm.x, objective_inner, &objective_state);
  return out;
}

double reference_fstar(const ExperimentConfig& c, const ScenarioData& base, double mu,
                       std::size_t iterations, double delta) {
  ScenarioData data = base;
  data.mu = mu;
  const ProblemKind kind = problem_kind(c.experiment);
  FgmConfig fc;
  fc.mu = mu;
  fc.L_init = step_constant(c, data, mu);
  fc.L_cap = fc.L_init;
  fc.mode = c.experiment == 3 ? StepMode::adaptive : StepMode::fixed_step;
  const Eigen::VectorXd x0 = Eigen::VectorXd::Constant(data.d(), 1.0 / static_cast<double>(data.d()));
  InnerState state;
  OracleFn oracle;
  if (kind == ProblemKind::softmax) {
    oracle = [&](const Eigen::VectorXd& x, double) {
      auto vg = softmax_value_grad(data, x);
      return OracleReply{vg.value, std::move(vg.gradient), 0.0, 0.0, false};
    };
  } else {
    oracle = [&](const Eigen::VectorXd& x, double d) {
      return hull_oracle(data, x, d, state, c.max_inner * 100);
    };
  }
  const auto run = fgm_run(fc, oracle, [&](std::size_t, double) { return delta; }, iterations, x0);
  return estimate_fstar(data, kind, run.x, c.max_inner * 1000, &state);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, const LogFn& log) {
  config.validate();
  const auto say = [&](const std::string& msg) {
    if (log) log(msg);
  };
  ExperimentResult result;
  result.config = config;

  // Instances, one per dimension; data fixed by the master seed.
  std::vector<Instance> instances;
  for (long d : config.d) {
    Instance inst;
    inst.data = generate_scenarios(config.n, d, config.p,
                                   config.data_seed ^ (static_cast<std::uint64_t>(d) << 20));
    inst.data.sigma = config.sigma;
    inst.data.upsilon = config.upsilon;
    inst.info = {d, kappa_hat(inst.data), spectral_norm_squared(inst.data)};
    result.instances.push_back(inst.info);
    instances.push_back(std::move(inst));
  }

  // Grid of cells.
  std::vector<std::size_t> cell_instance;
  for (std::size_t di = 0; di < instances.size(); ++di) {
    const auto& info = instances[di].info;
    const std::vector<double> rs =
        config.r_auto() ? std::vector<double>{info.kappa_hat > 0.0 ? 0.0 : 0.5} : config.r;
    for (double mu : config.mu) {
      for (double r : rs) {
        for (std::size_t N : config.N) {
          for (double dref : config.delta_ref) {
            if (r == 0.0) {
              detail::require(config.M * dref < 1.0,
                              "r = 0 needs M * delta_ref < 1 so every oracle has positive cost");
            }
            CellResult cr;
            cr.cell = {info.d, mu, r, N, dref};
            cr.L = step_constant(config, instances[di].data, mu);
            result.cells.push_back(std::move(cr));
            cell_instance.push_back(di);
          }
        }
      }
    }
  }

  // F* references, one per (instance, mu).
  std::vector<Reference> refs;
  std::vector<std::size_t> ref_instance;
  for (std::size_t di = 0; di < instances.size(); ++di) {
    for (double mu : config.mu) {
      refs.push_back({instances[di].info.d, mu, 0.0});
      ref_instance.push_back(di);
    }
  }
  const std::size_t max_N = *std::max_element(config.N.begin(), config.N.end());
  const std::size_t ref_iterations = config.fstar_iterations > 0 ? config.fstar_iterations : 2 * max_N;
  parallel_for(refs.size(), config.threads, [&](std::size_t i) {
    const auto& inst = instances[ref_instance[i]];
    double delta = config.fstar_delta;
    if (delta <= 0.0) {
      if (config.experiment == 1) delta = 0.0;
      else delta = kappa_hat(inst.data) > 0.0 ? 1e-10 : 1e-8;
    }
    refs[i].fstar = reference_fstar(config, inst.data, refs[i].mu, ref_iterations, delta);
  });
  for (const auto& ref : refs) {
    std::ostringstream os;
    os << "reference run d=" << ref.d << " mu=" << ref.mu << " F*>=" << format_double(ref.fstar);
    say(os.str());
  }

  // Offline schedules per cell.
  for (std::size_t ci = 0; ci < result.cells.size(); ++ci) {
    CellResult& cr = result.cells[ci];
    const Cell& cell = cr.cell;
    for (const auto& ref : refs) {
      if (ref.d == cell.d && ref.mu == cell.mu) cr.fstar = ref.fstar;
    }
    const CostModel shape = cost_for_exponent(cell.r);
    for (ScheduleName name : config.schedules) {
      Schedule s;
      if (name == ScheduleName::tunable) {
        const auto certs = fixed_step_certificates(cell.N, cr.L, cell.mu);
        const auto coeffs = impact_coefficients_fgm(certs);
        const ScheduleProblem problem(coeffs.a, coeffs.b, cell.delta_ref, config.m, config.M, shape);
        s = match_budget(name, problem);
      } else if (name == ScheduleName::online_tunable) {
        const auto certs = fixed_step_certificates(config.N_r, cr.L, cell.mu);
        const auto coeffs = impact_coefficients_fgm(certs);
        const ScheduleProblem problem(coeffs.a, coeffs.b, cell.delta_ref, config.m, config.M, shape);
        s = solve_accuracy(problem).schedule;
      } else {
        s = baseline_schedule(name, {cell.delta_ref, cell.mu, cr.L, cell.N, config.linear_sign});
      }
      cr.schedules.emplace_back(name, std::move(s));
    }
    cr.runs.resize(config.schedules.size() * config.seeds.size());
  }

  // All runs.
  const std::size_t per_cell = config.schedules.size() * config.seeds.size();
  parallel_for(result.cells.size() * per_cell, config.threads, [&](std::size_t job) {
    CellResult& cr = result.cells[job / per_cell];
    const std::size_t local = job % per_cell;
    const std::size_t si = local / config.seeds.size();
    const std::size_t ki = local % config.seeds.size();
    const Cell& cell = cr.cell;
    const auto& [name, offline] = cr.schedules[si];
    const ScenarioData& data = instances[cell_instance[job / per_cell]].data;

    RunResult& rr = cr.runs[local];
    rr.schedule = name;
    rr.seed = config.seeds[ki];

    ScheduleFn schedule;
    if (name == ScheduleName::online_tunable) {
      const std::size_t boot = offline.values.size();
      const auto boot_certs = fixed_step_certificates(boot, cr.L, cell.mu);
      const KnownIteration known{boot_certs.A[boot], 1.0, offline.values[boot - 1]};
      const Bounds bounds{config.m * cell.delta_ref, config.M * cell.delta_ref};
      const double r = cell.r;
      schedule = [&offline, known, bounds, r, boot](std::size_t k, double A_next) {
        if (k < boot) return offline.values[k];
        return online_extend_accuracy(known, {A_next, 1.0}, r, bounds);
      };
    } else {
      schedule = [&offline](std::size_t k, double) { return offline.values[k]; };
    }

    const RunSetup setup{&config, &data, cell.mu, cr.L, cell.r, rr.seed};
    try {
      RunOutput out = execute_run(setup, schedule, cell.N, config.sample_every);
      rr.trajectory = std::move(out.fgm.trajectory);
      rr.terminal_objective = out.terminal_objective;
      rr.fstar_bound = out.fstar_bound;
      rr.total_work = out.fgm.total_work;
      rr.exhausted_calls = out.fgm.exhausted_calls;
      rr.final_bound = rr.trajectory.empty() ? 0.0 : rr.trajectory.back().bound;
      std::vector<double> deltas;
      deltas.reserve(rr.trajectory.size());
      for (const auto& row : rr.trajectory) deltas.push_back(row.delta);
      rr.modeled_cost = modeled_cost(cost_for_exponent(cell.r), deltas);
    } catch (const FgmError& e) {
      rr.failed = true;
      rr.error = e.what();
      rr.trajectory = e.trajectory();
    } catch (const Error& e) {
      rr.failed = true;
      rr.error = e.what();
    }
    std::ostringstream os;
    os << cell.label() << " " << to_string(name) << " seed=" << rr.seed;
    if (rr.failed) {
      os << " FAILED: " << rr.error;
    } else {
      os << " objective=" << format_double(rr.terminal_objective) << " work=" << rr.total_work;
      if (rr.exhausted_calls > 0) os << " exhausted_calls=" << rr.exhausted_calls;
    }
    say(os.str());
  });

  // Every terminal point certifies a lower bound on F*; the best one per
  // (instance, mu) is shared by all cells of that problem.
  for (auto& ref : refs) {
    for (const auto& cr : result.cells) {
      if (cr.cell.d != ref.d || cr.cell.mu != ref.mu) continue;
      for (const auto& run : cr.runs) {
        if (!run.failed) ref.fstar = std::max(ref.fstar, run.fstar_bound);
      }
    }
    std::ostringstream os;
    os << "F* estimate d=" << ref.d << " mu=" << ref.mu << " F*>=" << format_double(ref.fstar);
    say(os.str());
  }
  for (auto& cr : result.cells) {
    for (const auto& ref : refs) {
      if (ref.d == cr.cell.d && ref.mu == cr.cell.mu) cr.fstar = ref.fstar;
    }
    for (auto& run : cr.runs) {
      if (!run.failed) run.gap = run.terminal_objective - cr.fstar;
    }
  }
  return result;
}

std::vector<SummaryRow> summarize(const ExperimentResult& result) {
  std::vector<SummaryRow> rows;
  for (const auto& cr : result.cells) {
    for (const auto& [name, schedule] : cr.schedules) {
      std::vector<double> gaps;
      std::vector<double> works;
      for (const auto& run : cr.runs) {
        if (run.schedule != name || run.failed) continue;
        gaps.push_back(run.gap);
        works.push_back(run.total_work);
      }
      // Sorted sums keep the aggregates independent of the seed order.
      std::sort(gaps.begin(), gaps.end());
      std::sort(works.begin(), works.end());
      const double work = std::accumulate(works.begin(), works.end(), 0.0);
      SummaryRow row;
      row.experiment = result.config.experiment;
      row.schedule = name;
      row.mu = cr.cell.mu;
      row.r = cr.cell.r;
      row.N = cr.cell.N;
      row.delta_ref = cr.cell.delta_ref;
      row.d = cr.cell.d;
      row.median_gap = median_of(gaps);
      row.mean_gap = gaps.empty() ? std::numeric_limits<double>::quiet_NaN()
                                  : std::accumulate(gaps.begin(), gaps.end(), 0.0) /
                                        static_cast<double>(gaps.size());
      row.total_inner_work =
          gaps.empty() ? std::numeric_limits<double>::quiet_NaN() : work / static_cast<double>(gaps.size());
      rows.push_back(row);
    }
  }
  return rows;
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  return out;
}

std::string optional_number(double v) { return std::isnan(v) ? std::string() : format_double(v); }

}  // namespace

void emit_outputs(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const int experiment = result.config.experiment;
  {
    auto out = open_output(dir / "summary.csv");
    out << "experiment,schedule,mu,r,N,delta_ref,median_gap,mean_gap,total_inner_work,d\n";
    for (const auto& row : summarize(result)) {
      out << row.experiment << ',' << to_string(row.schedule) << ',' << format_double(row.mu) << ','
          << format_double(row.r) << ',' << row.N << ',' << format_double(row.delta_ref) << ','
          << optional_number(row.median_gap) << ',' << optional_number(row.mean_gap) << ','
          << optional_number(row.total_inner_work) << ',' << row.d << '\n';
    }
    if (!out) throw Error("failed writing summary.csv");
  }
  for (const auto& cr : result.cells) {
    const auto cell_dir = dir / cr.cell.label();
    auto out = open_output(cell_dir / "trajectory.csv");
    out << "experiment,schedule,seed,k,delta,omega,L,A,objective,cum_work\n";
    for (const auto& run : cr.runs) {
      for (const auto& row : run.trajectory) {
        out << experiment << ',' << to_string(run.schedule) << ',' << run.seed << ',' << row.k << ','
            << format_double(row.delta) << ',' << format_double(row.omega) << ','
            << format_double(row.L) << ',' << format_double(row.A) << ','
            << optional_number(row.objective) << ',' << format_double(row.cum_work) << '\n';
      }
    }
    if (!out) throw Error("failed writing " + (cell_dir / "trajectory.csv").string());
    for (const auto& [name, schedule] : cr.schedules) {
      write_schedule_csv(cell_dir / to_string(name) / "schedule.csv", schedule);
    }
  }
}

}  // namespace tunable
