#include "tunable/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tunable/error.hpp"
#include "tunable/simplex.hpp"

namespace tunable {

ValueGrad softmax_value_grad(const ScenarioData& data, const Eigen::Ref<const Eigen::VectorXd>& x) {
  const Eigen::VectorXd s = data.upsilon * (data.O * x);
  const double smax = s.maxCoeff();
  const Eigen::ArrayXd e = (s.array() - smax).exp();
  const double total = e.sum();
  ValueGrad out;
  out.value = (smax + std::log(total / static_cast<double>(data.n()))) / data.upsilon +
              0.5 * data.mu * x.squaredNorm();
  out.gradient = data.O.transpose() * (e / total).matrix() + data.mu * x;
  return out;
}

OracleReply noisy_oracle(const ScenarioData& data, const Eigen::Ref<const Eigen::VectorXd>& x,
                         double delta, double alpha, const CostModel& cost, std::mt19937_64& rng) {
  detail::require(delta >= 0.0, "noise level must be >= 0");
  detail::require(alpha > 0.0, "noise amplitude alpha must be positive");
  auto vg = softmax_value_grad(data, x);
  OracleReply reply;
  reply.value = vg.value;
  reply.gradient = std::move(vg.gradient);
  if (delta > 0.0) {
    std::normal_distribution<double> normal;
    Eigen::VectorXd u(x.size());
    do {
      for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = normal(rng);
    } while (u.squaredNorm() == 0.0);
    reply.gradient += (alpha * delta / u.norm()) * u;
    reply.inner_work = std::max(0.0, cost.raw_value(delta));
  }
  reply.delta = 4.0 * alpha * delta;
  return reply;
}

ValueGrad inner_q_value_grad(const ScenarioData& data, const Eigen::Ref<const Eigen::VectorXd>& w,
                             const Eigen::Ref<const Eigen::VectorXd>& x) {
  const Eigen::VectorXd u = data.O.transpose() * w;
  const Eigen::VectorXd r = u - data.theta_bar;
  ValueGrad out;
  out.value = u.dot(x) - 0.5 * data.sigma * r.squaredNorm();
  out.gradient = data.O * (x - data.sigma * r);
  return out;
}

namespace {

// Linearization upper bound q(w) + max_i g_i - <g, w> on max q over the simplex.
double linearization_bound(double q, const Eigen::VectorXd& g, const Eigen::VectorXd& w) {
  return q + g.maxCoeff() - g.dot(w);
}

}  // namespace

double fw_gap(const ScenarioData& data, const Eigen::Ref<const Eigen::VectorXd>& x,
              std::span<const Eigen::VectorXd> history, const Eigen::VectorXd& current) {
  detail::require(!history.empty(), "Frank-Wolfe gap needs a nonempty history");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& w : history) {
    const auto vg = inner_q_value_grad(data, w, x);
    best = std::min(best, linearization_bound(vg.value, vg.gradient, w));
  }
  return std::max(0.0, best - inner_q_value_grad(data, current, x).value);
}

InnerResult fista_inner(const ScenarioData& data, const Eigen::Ref<const Eigen::VectorXd>& x,
                        double delta_target, InnerState& state, std::size_t max_inner) {
  detail::require(delta_target > 0.0, "inner target accuracy must be positive");
  const Eigen::Index n = data.n();
  if (state.w.size() != n) state.w = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));

  const double L_in = data.sigma * data.gram_max;
  detail::require(L_in > 0.0, "inner problem needs sigma * ||O||^2 > 0");
  const double kappa = kappa_hat(data);
  const double beta_fixed = kappa > 0.0 ? (1.0 - std::sqrt(kappa)) / (1.0 + std::sqrt(kappa)) : 0.0;

  // q(w) and grad q(w) at the current iterate; grad q is affine in w, so the
  // gradient at the extrapolated point is the same combination of cached gradients.
  const auto evaluate = [&](const Eigen::VectorXd& w, Eigen::VectorXd& g) {
    const Eigen::VectorXd u = data.O.transpose() * w;
    const Eigen::VectorXd r = u - data.theta_bar;
    g = data.O * (x - data.sigma * r);
    return u.dot(x) - 0.5 * data.sigma * r.squaredNorm();
  };

  Eigen::VectorXd w = state.w;
  Eigen::VectorXd g;
  double q = evaluate(w, g);
  double upper = linearization_bound(q, g, w);
  Eigen::VectorXd w_prev = w;
  Eigen::VectorXd g_prev = g;
  double t = 1.0;

  std::size_t omega = 0;
  while (upper - q > delta_target && omega < max_inner) {
    double beta = beta_fixed;
    if (kappa <= 0.0) {
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      beta = (t - 1.0) / t_next;
      t = t_next;
    }
    const Eigen::VectorXd v = w + beta * (w - w_prev);
    const Eigen::VectorXd gv = g + beta * (g - g_prev);
    w_prev = std::move(w);
    g_prev = std::move(g);
    w = project_simplex(v + gv / L_in);
    q = evaluate(w, g);
    upper = std::min(upper, linearization_bound(q, g, w));
    ++omega;
  }

  state.w = w;
  InnerResult res;
  res.w = std::move(w);
  res.value = q;
  res.gap = std::max(0.0, upper - q);
  res.omega = omega;
  res.exhausted = res.gap > delta_target;
  return res;
}

OracleReply hull_oracle(const ScenarioData& data, const Eigen::Ref<const Eigen::VectorXd>& x,
                        double delta, InnerState& state, std::size_t max_inner) {
  const InnerResult inner = fista_inner(data, x, delta, state, max_inner);
  OracleReply reply;
  reply.value = 0.5 * data.mu * x.squaredNorm() + inner.value;
  reply.gradient = data.mu * x + data.O.transpose() * inner.w;
  reply.delta = inner.exhausted ? inner.gap : delta;
  reply.inner_work = static_cast<double>(inner.omega);
  reply.exhausted = inner.exhausted;
  return reply;
}

double estimate_fstar(const ScenarioData& data, ProblemKind kind,
                      const Eigen::Ref<const Eigen::VectorXd>& x_hat, std::size_t max_inner,
                      InnerState* warm) {
  double value = 0.0;
  Eigen::VectorXd grad;
  if (kind == ProblemKind::softmax) {
    auto vg = softmax_value_grad(data, x_hat);
    value = vg.value;
    grad = std::move(vg.gradient);
  } else {
    InnerState local;
    const auto reply = hull_oracle(data, x_hat, 1e-10, warm ? *warm : local, max_inner);
    value = reply.value;
    grad = reply.gradient;
  }
  const double base = value - grad.dot(x_hat);
  if (data.mu > 0.0) {
    const Eigen::VectorXd x = project_simplex(x_hat - grad / data.mu);
    return base + grad.dot(x) + 0.5 * data.mu * (x - x_hat).squaredNorm();
  }
  return base + grad.minCoeff();
}

double objective_value(const ScenarioData& data, ProblemKind kind,
                       const Eigen::Ref<const Eigen::VectorXd>& x, double precision,
                       std::size_t max_inner, InnerState* warm) {
  if (kind == ProblemKind::softmax) return softmax_value_grad(data, x).value;
  InnerState local;
  return hull_oracle(data, x, precision, warm ? *warm : local, max_inner).value;
}

}  // namespace tunable
