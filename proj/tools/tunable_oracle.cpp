// tunable-oracle: inexactness schedules and the robust-optimization experiments.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include "tunable/certificates.hpp"
#include "tunable/config.hpp"
#include "tunable/cost_model.hpp"
#include "tunable/csv_io.hpp"
#include "tunable/error.hpp"
#include "tunable/experiment.hpp"
#include "tunable/schedule_solver.hpp"

namespace {

using namespace tunable;

struct ScheduleArgs {
  std::string coeffs;
  std::string cost = "power:1";
  double delta_ref = 0.0;
  double m = 0.0;
  double M = std::numeric_limits<double>::infinity();
  bool work = false;
  double budget = 0.0;
  double wmin = 0.0;
  double wmax = std::numeric_limits<double>::infinity();
  std::string out;
};

void print_certificate(std::ostream& os, const KktCertificate& cert) {
  os << "n_plus=" << cert.n_plus << " n_minus=" << cert.n_minus
     << " lambda_star=" << format_double(cert.lambda_star)
     << (cert.degenerate ? " (degenerate: every index on a bound)" : "") << '\n';
}

int run_schedule(const ScheduleArgs& args) {
  const CoefficientTable coeffs = read_coefficients_csv(args.coeffs);
  SolvedSchedule solved;
  if (args.work) {
    WorkProblem wp;
    wp.a = coeffs.a;
    wp.b = coeffs.b;
    wp.omega_bar = args.budget;
    wp.omega_M = args.wmin;
    wp.omega_m = args.wmax;
    // Only the exponent matters here; the domain just has to admit every shape.
    const CostModel shape = CostModel::parse(args.cost, {0.0, 0.5});
    detail::require(shape.kind() != CostKind::log_squared,
                    "the work-controlled problem needs a power or log cost");
    wp.r = shape.exponent();
    solved = solve_work(wp);
  } else {
    detail::require(args.delta_ref > 0.0, "--delta-ref is required for accuracy schedules");
    const CostModel shape = CostModel::parse(args.cost, {});
    const ScheduleProblem p(coeffs.a, coeffs.b, args.delta_ref, args.m, args.M, shape);
    solved = solve_accuracy(p);
    std::cerr << "budget " << format_double(reference_budget(p)) << " spent "
              << format_double(schedule_cost(p, solved.schedule.values)) << '\n';
  }
  std::cerr << "objective " << format_double(schedule_objective(coeffs.a, solved.schedule)) << '\n';
  print_certificate(std::cerr, solved.certificate);
  if (args.out.empty() || args.out == "-") {
    write_schedule_csv(std::cout, solved.schedule);
  } else {
    write_schedule_csv(std::filesystem::path(args.out), solved.schedule);
  }
  return 0;
}

int run_experiment_command(int id, const std::string& config_path, const std::string& out,
                           const std::string& seeds, std::optional<std::size_t> threads) {
  ExperimentConfig config =
      config_path.empty() ? default_config(id) : load_config(config_path, id);
  if (!seeds.empty()) config.seeds = parse_seed_list(seeds);
  if (threads) config.threads = *threads;
  config.validate();
  const auto result = run_experiment(config, [](const std::string& line) {
    std::cerr << line << '\n';
  });
  emit_outputs(result, out);
  std::size_t failures = 0;
  for (const auto& cell : result.cells) {
    for (const auto& run : cell.runs) failures += run.failed ? 1 : 0;
  }
  for (const auto& row : summarize(result)) {
    std::cout << "d=" << row.d << " mu=" << row.mu << " r=" << row.r << " N=" << row.N
              << " delta_ref=" << row.delta_ref << " " << to_string(row.schedule)
              << " median_gap=" << format_double(row.median_gap)
              << " work=" << format_double(row.total_inner_work) << '\n';
  }
  if (failures > 0) std::cerr << failures << " run(s) failed; see the log above\n";
  return 0;
}

int run_toy(const std::string& out) {
  const ScheduleProblem p = toy_problem();
  const auto solved = solve_accuracy(p);
  const auto& cert = solved.certificate;
  const double budget = reference_budget(p);
  const double spent = schedule_cost(p, solved.schedule.values);
  std::cerr << "toy instance: N=" << p.size() << " budget=" << format_double(budget)
            << " relative budget residual=" << format_double(std::abs(spent - budget) / budget)
            << '\n';
  print_certificate(std::cerr, cert);

  std::ofstream file;
  if (!out.empty() && out != "-") {
    const std::filesystem::path path(out);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    file.open(path);
    if (!file) throw Error("cannot open " + out + " for writing");
  }
  std::ostream& os = file.is_open() ? file : std::cout;
  os << "k,a,b,nu,rank,delta\n";
  for (std::size_t k = 0; k < p.size(); ++k) {
    os << k << ',' << format_double(p.a()[k]) << ',' << format_double(p.b()[k]) << ','
       << format_double(cert.nu[k]) << ',' << cert.rho[k] << ','
       << format_double(solved.schedule.values[k]) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal inexactness schedules for first-order methods with tunable oracles"};
  app.require_subcommand(1);

  ScheduleArgs sargs;
  auto* schedule = app.add_subcommand("schedule", "Solve an allocation problem from a k,a,b file");
  schedule->add_option("--coeffs", sargs.coeffs, "Coefficient CSV with header k,a,b")
      ->required()
      ->check(CLI::ExistingFile);
  schedule->add_option("--cost", sargs.cost, "Cost shape: power:R, log or logsq")
      ->capture_default_str();
  schedule->add_option("--delta-ref", sargs.delta_ref, "Reference inexactness");
  schedule->add_option("--m", sargs.m, "Lower factor (0 <= m < 1)")->capture_default_str();
  schedule->add_option("--M", sargs.M, "Upper factor (M > 1)");
  schedule->add_flag("--work", sargs.work, "Solve the work-controlled problem instead");
  schedule->add_option("--budget", sargs.budget, "Total work budget (with --work)");
  schedule->add_option("--wmin", sargs.wmin, "Per-iteration lower work bound (with --work)");
  schedule->add_option("--wmax", sargs.wmax, "Per-iteration upper work bound (with --work)");
  schedule->add_option("--out", sargs.out, "Output schedule CSV (stdout when omitted)");

  int exp_id = 1;
  std::string config_path;
  std::string exp_out;
  std::string seeds;
  std::optional<std::size_t> threads;
  auto* experiment = app.add_subcommand("experiment", "Run experiment 1, 2 or 3");
  experiment->add_option("--id", exp_id, "Experiment number")
      ->required()
      ->check(CLI::IsMember({1, 2, 3}));
  experiment->add_option("--config", config_path, "key = value config file")
      ->check(CLI::ExistingFile);
  experiment->add_option("--out", exp_out, "Output directory")->required();
  experiment->add_option("--seeds", seeds, "Comma-separated seeds overriding the config");
  experiment->add_option("--threads", threads, "Worker threads overriding the config");

  std::string toy_out;
  auto* toy = app.add_subcommand("toy", "Solve the 80-iteration log-squared toy instance");
  toy->add_option("--out", toy_out, "Output CSV (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*schedule) return run_schedule(sargs);
    if (*experiment) return run_experiment_command(exp_id, config_path, exp_out, seeds, threads);
    if (*toy) return run_toy(toy_out);
  } catch (const tunable::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 1;
}
