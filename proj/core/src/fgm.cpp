#include "tunable/fgm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tunable/simplex.hpp"

namespace tunable {

void FgmConfig::validate() const {
  detail::require(std::isfinite(L_init) && L_init > 0.0, "L_init must be positive");
  detail::require(std::isfinite(mu) && mu >= 0.0, "mu must be >= 0");
  detail::require(increase_factor > 1.0, "increase_factor must exceed 1");
  detail::require(decrease_factor > 1.0, "decrease_factor must exceed 1");
  detail::require(L_cap > 0.0 && L_init <= L_cap, "L_init must not exceed L_cap");
  detail::require(R2 >= 0.0, "R2 must be >= 0");
}

double bound_value(const BoundTracker& tracker, double A_N) {
  detail::require(A_N > 0.0, "bound needs A_N > 0");
  return (tracker.R2 + 2.0 * tracker.weighted_inexactness) / A_N;
}

namespace {

// Below this relative size the curvature term of the descent test is rounding noise.
constexpr double kRoundoff = 1e-13;

}  // namespace

bool line_search_validate(double f_y, const Eigen::Ref<const Eigen::VectorXd>& grad_y,
                          double f_x_next, const Eigen::Ref<const Eigen::VectorXd>& x_next,
                          const Eigen::Ref<const Eigen::VectorXd>& y, double L_candidate,
                          double delta) {
  const Eigen::VectorXd step = x_next - y;
  const double model = f_y + grad_y.dot(step) + 0.5 * L_candidate * step.squaredNorm();
  return f_x_next <= model + 2.0 * delta;
}

FgmResult fgm_run(const FgmConfig& config, const OracleFn& oracle, const ScheduleFn& schedule,
                  std::size_t N, const Eigen::VectorXd& x0, const ObjectiveFn& objective) {
  config.validate();
  detail::require(in_simplex(x0, 1e-9), "x0 must lie in the unit simplex");

  FgmResult result;
  result.x = x0;
  result.certificates.mu = config.mu;
  result.tracker.R2 = config.R2;
  result.trajectory.reserve(N);

  Eigen::VectorXd x = x0;
  Eigen::VectorXd z = x0;
  const double mu = config.mu;
  const bool adaptive = config.mode == StepMode::adaptive;
  double L_prev = config.L_init;
  // A valid smoothness estimate never drops below the strong convexity modulus.
  const double L_floor = std::max(mu, std::numeric_limits<double>::min());
  // Only a step whose descent test could have failed licenses a smaller L next time.
  bool informative = true;

  for (std::size_t k = 0; k < N; ++k) {
    const double A = result.certificates.A.back();
    double L_try = adaptive && k > 0 && informative
                       ? std::max(L_prev / config.increase_factor, L_floor)
                       : L_prev;
    double work = 0.0;
    double delta_k = 0.0;
    double reply_delta = 0.0;
    double A_next = 0.0;
    Eigen::VectorXd x_next;
    Eigen::VectorXd z_next;

    while (true) {
      bool final_try = !adaptive;
      if (L_try >= config.L_cap) {
        L_try = config.L_cap;
        final_try = true;
      }
      A_next = next_certificate(A, L_try, mu);
      if (!std::isfinite(A_next)) {
        throw FgmError("certificate overflow at step " + std::to_string(k),
                       std::move(result.trajectory));
      }
      const double a = A_next - A;
      delta_k = schedule(k, A_next);
      const Eigen::VectorXd y = (A * x + a * z) / A_next;
      const OracleReply reply = oracle(y, delta_k);
      work += reply.inner_work;
      if (reply.exhausted) ++result.exhausted_calls;
      reply_delta = reply.delta;

      const Eigen::VectorXd centre =
          ((1.0 + mu * A) * z + a * mu * y - a * reply.gradient) / (1.0 + mu * A_next);
      if (!centre.allFinite()) {
        throw FgmError("non-finite iterate at step " + std::to_string(k),
                       std::move(result.trajectory));
      }
      z_next = project_simplex(centre);
      x_next = (A * x + a * z_next) / A_next;
      if (final_try) {
        informative = true;
        break;
      }

      const OracleReply probe = oracle(x_next, delta_k);
      work += probe.inner_work;
      if (probe.exhausted) ++result.exhausted_calls;
      if (line_search_validate(reply.value, reply.gradient, probe.value, x_next, y, L_try,
                               delta_k)) {
        const double curvature = 0.5 * L_try * (x_next - y).squaredNorm();
        informative = curvature > kRoundoff * (1.0 + std::abs(reply.value));
        break;
      }
      L_try *= config.decrease_factor;
    }

    x = std::move(x_next);
    z = std::move(z_next);
    L_prev = L_try;
    result.certificates.A.push_back(A_next);
    result.certificates.L.push_back(L_try);
    result.tracker.add(A_next, reply_delta);
    result.total_work += work;

    RunRecord row;
    row.k = k;
    row.delta = delta_k;
    row.omega = work;
    row.L = L_try;
    row.A = A_next;
    row.cum_work = result.total_work;
    row.bound = bound_value(result.tracker, A_next);
    if (objective && config.sample_every > 0 && k % config.sample_every == 0) {
      row.objective = objective(x);
    }
    result.trajectory.push_back(row);
  }
  result.x = std::move(x);
  return result;
}

}  // namespace tunable
