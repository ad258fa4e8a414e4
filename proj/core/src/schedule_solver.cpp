#include "tunable/schedule_solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

#include "tunable/error.hpp"

namespace tunable {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Relative slack when deciding whether a candidate violates a bound.
constexpr double kBoundSlack = 1e-12;

bool all_positive_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x) && x > 0.0; });
}

double sum_over(std::span<const double> values, std::span<const std::size_t> order,
                std::size_t first, std::size_t last) {
  double s = 0.0;
  for (std::size_t j = first; j < last; ++j) s += values[order[j]];
  return s;
}

// Monotone bisection of an increasing function g on [lo, hi] with g(lo) < 0 <= g(hi).
double bisect_increasing(const std::function<double(double)>& g, double lo, double hi) {
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (g(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-15 * std::max(1.0, std::abs(mid))) break;
  }
  return 0.5 * (lo + hi);
}

// Expands [lo, hi] geometrically around `start` until g(lo) < 0 <= g(hi).
std::pair<double, double> bracket_increasing(const std::function<double(double)>& g,
                                             double start) {
  double lo = start;
  double hi = start;
  double step = 1.0;
  int guard = 0;
  while (!(g(lo) < 0.0)) {
    lo -= step;
    step *= 2.0;
    if (++guard > 200) throw NumericalFailure("failed to bracket the budget multiplier (low side)");
  }
  step = 1.0;
  guard = 0;
  while (g(hi) < 0.0) {
    hi += step;
    step *= 2.0;
    if (++guard > 200) throw NumericalFailure("failed to bracket the budget multiplier (high side)");
  }
  return {lo, hi};
}

struct Partition {
  std::size_t n_plus = 0;
  std::size_t n_minus = 0;
};

}  // namespace

// ---------------------------------------------------------------------------

ScheduleProblem::ScheduleProblem(std::vector<double> a, std::vector<double> b, double delta_ref,
                                 double m, double M, const CostModel& cost_shape)
    : a_(std::move(a)),
      b_(std::move(b)),
      delta_ref_(delta_ref),
      m_(m),
      M_(M),
      cost_(cost_shape.with_domain({m * delta_ref, M * delta_ref})) {
  detail::require(!a_.empty(), "schedule problem needs at least one iteration");
  detail::require(a_.size() == b_.size(), "coefficient vectors a and b differ in length");
  detail::require(all_positive_finite(a_), "impact coefficients a must be positive and finite");
  detail::require(all_positive_finite(b_), "cost distortions b must be positive and finite");
  detail::require(std::isfinite(delta_ref_) && delta_ref_ > 0.0,
                  "reference inexactness must be positive");
  detail::require(m_ >= 0.0 && m_ < 1.0, "lower factor m must satisfy 0 <= m < 1");
  detail::require(M_ > 1.0, "upper factor M must exceed 1");
  if (cost_.kind() != CostKind::power) {
    detail::require(std::isfinite(M_), "logarithmic cost models need a finite M");
  }
}

void WorkProblem::validate() const {
  detail::require(!a.empty(), "work problem needs at least one iteration");
  detail::require(a.size() == b.size(), "coefficient vectors a and b differ in length");
  detail::require(all_positive_finite(a), "impact coefficients a must be positive and finite");
  detail::require(all_positive_finite(b), "cost distortions b must be positive and finite");
  detail::require(std::isfinite(r) && r >= 0.0, "work problem needs r >= 0");
  detail::require(std::isfinite(omega_bar) && omega_bar > 0.0, "work budget must be positive");
  const double per = omega_bar / static_cast<double>(a.size());
  detail::require(omega_M >= 0.0 && omega_M < per && per < omega_m,
                  "work bounds must satisfy omega_M < omega_bar / N < omega_m");
}

// ---------------------------------------------------------------------------

std::vector<std::size_t> descending_rank(std::span<const double> nu) {
  std::vector<std::size_t> order(nu.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return nu[i] > nu[j]; });
  std::vector<std::size_t> rho(nu.size());
  for (std::size_t j = 0; j < order.size(); ++j) rho[order[j]] = j;
  return rho;
}

std::vector<std::size_t> rank_order(std::span<const std::size_t> rho) {
  std::vector<std::size_t> order(rho.size());
  for (std::size_t k = 0; k < rho.size(); ++k) order[rho[k]] = k;
  return order;
}

double reference_budget(const ScheduleProblem& p) {
  const double total_b = std::accumulate(p.b().begin(), p.b().end(), 0.0);
  return total_b * p.cost().raw_value(p.delta_ref());
}

double schedule_cost(const ScheduleProblem& p, std::span<const double> deltas) {
  detail::require(deltas.size() == p.size(), "schedule length does not match the problem");
  double s = 0.0;
  for (std::size_t k = 0; k < deltas.size(); ++k) s += p.b()[k] * p.cost().raw_value(deltas[k]);
  return s;
}

double schedule_objective(std::span<const double> a, std::span<const double> values) {
  detail::require(a.size() == values.size(), "objective: coefficient and schedule lengths differ");
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * values[k];
  return s;
}

double schedule_objective(std::span<const double> a, const Schedule& s) {
  return schedule_objective(a, std::span<const double>(s.values));
}

// ---------------------------------------------------------------------------
// Accuracy-controlled problem

std::optional<Schedule> closed_form_interior_accuracy(const ScheduleProblem& p) {
  detail::require(p.cost().kind() == CostKind::power,
                  "interior closed form needs a power cost model");
  const double r = p.cost().exponent();
  const auto& a = p.a();
  const auto& b = p.b();
  const auto weights = work_weights(a, b, r);
  const double sum_w = std::accumulate(weights.begin(), weights.end(), 0.0);
  const double sum_b = std::accumulate(b.begin(), b.end(), 0.0);
  const double scale = p.delta_ref() * std::pow(sum_w / sum_b, 1.0 / r);

  Schedule s{std::vector<double>(a.size()), ScheduleKind::accuracy};
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double v = scale * std::exp((std::log(b[k]) - std::log(a[k])) / (r + 1.0));
    if (v < p.lower() || v > p.upper()) return std::nullopt;
    s.values[k] = v;
  }
  return s;
}

namespace {

// Solves the budget equation restricted to the transient ranks for the
// current partition. Returns the multiplier and writes transient values.
class AccuracyPartitionSolver {
 public:
  AccuracyPartitionSolver(const ScheduleProblem& p, std::span<const double> nu,
                          std::span<const std::size_t> order)
      : p_(p), nu_(nu), order_(order), budget_(reference_budget(p)) {}

  [[nodiscard]] double budget() const { return budget_; }

  // Stationary (unclamped) value of index k for multiplier exp(t) = -lambda.
  [[nodiscard]] double stationary(std::size_t k, double t) const {
    return p_.cost().raw_derivative_inverse(-std::exp(t) / nu_[k]);
  }

  [[nodiscard]] double clamped(std::size_t k, double t) const {
    return std::clamp(stationary(k, t), p_.lower(), p_.upper());
  }

  // Log of the multiplier magnitude that makes the clamped schedule spend the
  // reference budget exactly.
  [[nodiscard]] double clamped_root() const {
    const auto g = [&](double t) {
      double s = 0.0;
      for (std::size_t k = 0; k < nu_.size(); ++k) {
        s += p_.b()[k] * p_.cost().raw_value(clamped(k, t));
      }
      return s - budget_;
    };
    const auto [lo, hi] = bracket_increasing(g, start_guess());
    return bisect_increasing(g, lo, hi);
  }

  // Remaining budget for the transient ranks.
  [[nodiscard]] double transient_budget(const Partition& part) const {
    const std::size_t n = nu_.size();
    double rest = budget_;
    if (part.n_plus > 0) {
      rest -= sum_over(p_.b(), order_, 0, part.n_plus) * p_.cost().raw_value(p_.upper());
    }
    if (part.n_minus > 0) {
      rest -= sum_over(p_.b(), order_, n - part.n_minus, n) * p_.cost().raw_value(p_.lower());
    }
    return rest;
  }

  // Returns t = log(-lambda*) and the transient values (indexed by k).
  double solve_transient(const Partition& part, std::vector<double>& values) const {
    const std::size_t n = nu_.size();
    const std::size_t first = part.n_plus;
    const std::size_t last = n - part.n_minus;
    const auto& a = p_.a();
    const auto& b = p_.b();
    const double rest = transient_budget(part);
    const double sum_b_t = sum_over(b, order_, first, last);

    switch (p_.cost().kind()) {
      case CostKind::power: {
        const double r = p_.cost().exponent();
        double sum_w = 0.0;
        for (std::size_t j = first; j < last; ++j) {
          const std::size_t k = order_[j];
          sum_w += std::exp((r * std::log(a[k]) + std::log(b[k])) / (r + 1.0));
        }
        if (!(rest > 0.0)) throw NumericalFailure("transient budget is not positive");
        // rest = lambda_hat^{-r} * sum_w
        const double log_hat = -(std::log(rest) - std::log(sum_w)) / r;
        for (std::size_t j = first; j < last; ++j) {
          const std::size_t k = order_[j];
          values[k] = std::exp(log_hat + std::log(nu_[k]) / (r + 1.0));
        }
        // lambda* = -r * lambda_hat^{-(r+1)}
        return std::log(r) - (r + 1.0) * log_hat;
      }
      case CostKind::logarithmic: {
        // -sum_T b_k log(lambda_hat nu_k) = rest, evaluated in log space.
        double weighted_log_nu = 0.0;
        for (std::size_t j = first; j < last; ++j) {
          const std::size_t k = order_[j];
          weighted_log_nu += b[k] * std::log(nu_[k]);
        }
        const double log_hat = -(rest + weighted_log_nu) / sum_b_t;
        for (std::size_t j = first; j < last; ++j) {
          const std::size_t k = order_[j];
          values[k] = std::exp(log_hat + std::log(nu_[k]));
        }
        // lambda* = -1 / lambda_hat
        return -log_hat;
      }
      case CostKind::log_squared:
        break;
    }

    // General shape: bracketed root in t followed by Newton polish.
    const auto g = [&](double t) {
      double s = 0.0;
      for (std::size_t j = first; j < last; ++j) {
        const std::size_t k = order_[j];
        s += b[k] * p_.cost().raw_value(stationary(k, t));
      }
      return s - rest;
    };
    const auto [lo, hi] = bracket_increasing(g, start_guess());
    double t = bisect_increasing(g, lo, hi);
    for (int polish = 0; polish < 2; ++polish) {
      double gv = -rest;
      double dg = 0.0;
      for (std::size_t j = first; j < last; ++j) {
        const std::size_t k = order_[j];
        const double slope = -std::exp(t) / nu_[k];
        const double d = p_.cost().raw_derivative_inverse(slope);
        gv += b[k] * p_.cost().raw_value(d);
        // d h(d(t)) / dt = slope^2 / h''(d)
        dg += b[k] * slope * slope / p_.cost().raw_second_derivative(d);
      }
      if (!(dg > 0.0) || !std::isfinite(dg)) break;
      const double next = t - gv / dg;
      if (!std::isfinite(next) || next < lo || next > hi) break;
      t = next;
    }
    for (std::size_t j = first; j < last; ++j) {
      const std::size_t k = order_[j];
      values[k] = stationary(k, t);
    }
    return t;
  }

 private:
  [[nodiscard]] double start_guess() const {
    double mean_log_nu = 0.0;
    for (double v : nu_) mean_log_nu += std::log(v);
    mean_log_nu /= static_cast<double>(nu_.size());
    const double slope = p_.cost().raw_derivative(p_.delta_ref());
    return std::log(-slope) + mean_log_nu;
  }

  const ScheduleProblem& p_;
  std::span<const double> nu_;
  std::span<const std::size_t> order_;
  double budget_;
};

}  // namespace

SolvedSchedule solve_accuracy(const ScheduleProblem& p) {
  const std::size_t n = p.size();
  const auto& a = p.a();
  const auto& b = p.b();

  KktCertificate cert;
  cert.nu.resize(n);
  for (std::size_t k = 0; k < n; ++k) cert.nu[k] = b[k] / a[k];
  cert.rho = descending_rank(cert.nu);
  const auto order = rank_order(cert.rho);

  AccuracyPartitionSolver solver(p, cert.nu, order);
  const double lo = p.lower();
  const double hi = p.upper();
  // h(0) is infinite for every supported shape, so nothing saturates at a zero floor.
  const bool floor_can_bind = lo > 0.0;

  // Initial partition from the clamped stationary schedule.
  Partition part;
  {
    const double t = solver.clamped_root();
    for (std::size_t j = 0; j < n; ++j) {
      if (solver.stationary(order[j], t) >= hi) ++part.n_plus;
      else break;
    }
    if (floor_can_bind) {
      for (std::size_t j = n; j-- > part.n_plus;) {
        if (solver.stationary(order[j], t) <= lo) ++part.n_minus;
        else break;
      }
    }
  }

  std::vector<double> values(n, 0.0);
  double t = 0.0;
  bool settled = false;
  for (std::size_t pass = 0; pass <= 4 * n + 4; ++pass) {
    if (part.n_plus + part.n_minus >= n) {
      // Every index saturated: the degenerate shape, valid only if the
      // bounds spend exactly the budget.
      const double mismatch = solver.transient_budget(part);
      if (std::abs(mismatch) > 1e-10 * solver.budget()) {
        throw NumericalFailure("saturated partition does not match the budget");
      }
      cert.degenerate = true;
      t = std::numeric_limits<double>::quiet_NaN();
      settled = true;
      break;
    }
    t = solver.solve_transient(part, values);

    const std::size_t top = order[part.n_plus];
    const std::size_t bottom = order[n - 1 - part.n_minus];
    if (values[top] > hi * (1.0 + kBoundSlack)) {
      ++part.n_plus;
      continue;
    }
    if (floor_can_bind && values[bottom] < lo * (1.0 - kBoundSlack)) {
      ++part.n_minus;
      continue;
    }
    // A saturated index whose stationary value moved back inside the box
    // returns to the transient set.
    if (part.n_plus > 0 && solver.stationary(order[part.n_plus - 1], t) < hi * (1.0 - kBoundSlack)) {
      --part.n_plus;
      continue;
    }
    if (part.n_minus > 0 &&
        solver.stationary(order[n - part.n_minus], t) > lo * (1.0 + kBoundSlack)) {
      --part.n_minus;
      continue;
    }
    settled = true;
    break;
  }
  if (!settled) throw NumericalFailure("partition search for the accuracy schedule did not settle");

  for (std::size_t j = 0; j < part.n_plus; ++j) values[order[j]] = hi;
  for (std::size_t j = n - part.n_minus; j < n; ++j) values[order[j]] = lo;
  for (double& v : values) v = std::clamp(v, lo, hi);

  cert.n_plus = part.n_plus;
  cert.n_minus = part.n_minus;
  cert.lambda_star = cert.degenerate ? std::numeric_limits<double>::quiet_NaN() : -std::exp(t);
  return {Schedule{std::move(values), ScheduleKind::accuracy}, std::move(cert)};
}

// ---------------------------------------------------------------------------
// Work-controlled problem

std::vector<double> work_weights(std::span<const double> a, std::span<const double> b, double r) {
  detail::require(a.size() == b.size(), "coefficient vectors a and b differ in length");
  std::vector<double> w(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    w[k] = std::exp((r * std::log(a[k]) + std::log(b[k])) / (r + 1.0));
  }
  return w;
}

std::optional<Schedule> closed_form_interior_work(const WorkProblem& p) {
  p.validate();
  const auto w = work_weights(p.a, p.b, p.r);
  const double sum_w = std::accumulate(w.begin(), w.end(), 0.0);
  Schedule s{std::vector<double>(w.size()), ScheduleKind::work};
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double v = p.omega_bar * w[k] / sum_w;
    if (v < p.omega_M || v > p.omega_m) return std::nullopt;
    s.values[k] = v;
  }
  return s;
}

namespace {

// Work spent by the pinned indices; skips empty groups so an infinite bound stays out.
double pinned_work(const Partition& part, double lo, double hi) {
  double spent = 0.0;
  if (part.n_plus > 0) spent += static_cast<double>(part.n_plus) * lo;
  if (part.n_minus > 0) spent += static_cast<double>(part.n_minus) * hi;
  return spent;
}

}  // namespace

SolvedSchedule solve_work(const WorkProblem& p) {
  p.validate();
  const std::size_t n = p.a.size();
  const auto w = work_weights(p.a, p.b, p.r);

  KktCertificate cert;
  cert.nu.resize(n);
  for (std::size_t k = 0; k < n; ++k) cert.nu[k] = 1.0 / std::pow(w[k], p.r + 1.0);
  cert.rho = descending_rank(cert.nu);
  const auto order = rank_order(cert.rho);

  const double lo = p.omega_M;
  const double hi = p.omega_m;

  // Initial partition from the clamped allocation clamp(scale * w_k).
  Partition part;
  {
    const auto g = [&](double log_scale) {
      const double scale = std::exp(log_scale);
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += std::clamp(scale * w[k], lo, hi);
      return s - p.omega_bar;
    };
    const double sum_w = std::accumulate(w.begin(), w.end(), 0.0);
    const auto [blo, bhi] = bracket_increasing(g, std::log(p.omega_bar / sum_w));
    const double scale = std::exp(bisect_increasing(g, blo, bhi));
    for (std::size_t j = 0; j < n; ++j) {
      if (scale * w[order[j]] <= lo) ++part.n_plus;
      else break;
    }
    for (std::size_t j = n; j-- > part.n_plus;) {
      if (scale * w[order[j]] >= hi) ++part.n_minus;
      else break;
    }
  }

  std::vector<double> values(n, 0.0);
  double scale = 0.0;
  bool settled = false;
  for (std::size_t pass = 0; pass <= 4 * n + 4; ++pass) {
    if (part.n_plus + part.n_minus >= n) {
      const double spent = pinned_work(part, lo, hi);
      if (std::abs(spent - p.omega_bar) > 1e-10 * p.omega_bar) {
        throw NumericalFailure("saturated work partition does not match the budget");
      }
      cert.degenerate = true;
      scale = std::numeric_limits<double>::quiet_NaN();
      settled = true;
      break;
    }
    const double rest = p.omega_bar - pinned_work(part, lo, hi);
    const double sum_w = sum_over(w, order, part.n_plus, n - part.n_minus);
    scale = rest / sum_w;
    for (std::size_t j = part.n_plus; j < n - part.n_minus; ++j) {
      values[order[j]] = scale * w[order[j]];
    }
    const std::size_t low_end = order[part.n_plus];
    const std::size_t high_end = order[n - 1 - part.n_minus];
    if (values[low_end] < lo * (1.0 - kBoundSlack)) {
      ++part.n_plus;
      continue;
    }
    if (values[high_end] > hi * (1.0 + kBoundSlack)) {
      ++part.n_minus;
      continue;
    }
    if (part.n_plus > 0 && scale * w[order[part.n_plus - 1]] > lo * (1.0 + kBoundSlack)) {
      --part.n_plus;
      continue;
    }
    if (part.n_minus > 0 && scale * w[order[n - part.n_minus]] < hi * (1.0 - kBoundSlack)) {
      --part.n_minus;
      continue;
    }
    settled = true;
    break;
  }
  if (!settled) throw NumericalFailure("partition search for the work schedule did not settle");

  for (std::size_t j = 0; j < part.n_plus; ++j) values[order[j]] = lo;
  for (std::size_t j = n - part.n_minus; j < n; ++j) values[order[j]] = hi;
  for (double& v : values) v = std::clamp(v, lo, hi);

  cert.n_plus = part.n_plus;
  cert.n_minus = part.n_minus;
  cert.lambda_star = scale;
  return {Schedule{std::move(values), ScheduleKind::work}, std::move(cert)};
}

}  // namespace tunable
