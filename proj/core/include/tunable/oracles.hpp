#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <random>
#include <span>

#include "tunable/cost_model.hpp"
#include "tunable/fgm.hpp"
#include "tunable/scenarios.hpp"

namespace tunable {

struct ValueGrad {
  double value = 0.0;
  Eigen::VectorXd gradient;
};

/// upsilon^{-1} log(n^{-1} sum exp(upsilon <theta_i, x>)) + mu/2 ||x||^2.
ValueGrad softmax_value_grad(const ScenarioData& data, const Eigen::Ref<const Eigen::VectorXd>& x);

/// Exact value, gradient perturbed by alpha * delta * u with u uniform on the
/// unit sphere. The reply certifies 4 alpha delta and charges `cost(delta)`
/// units of work (0 for an exact call).
OracleReply noisy_oracle(const ScenarioData& data, const Eigen::Ref<const Eigen::VectorXd>& x,
                         double delta, double alpha, const CostModel& cost, std::mt19937_64& rng);

/// q(w; x) = <O^T w, x> - sigma/2 ||O^T w - theta_bar||^2 and its gradient in w.
ValueGrad inner_q_value_grad(const ScenarioData& data, const Eigen::Ref<const Eigen::VectorXd>& w,
                             const Eigen::Ref<const Eigen::VectorXd>& x);

/// Frank-Wolfe certificate: best linearization upper bound over the history
/// minus the value at `current`. Upper-bounds max q - q(current).
double fw_gap(const ScenarioData& data, const Eigen::Ref<const Eigen::VectorXd>& x,
              std::span<const Eigen::VectorXd> history, const Eigen::VectorXd& current);

/// Inner solver state carried between oracle calls.
struct InnerState {
  Eigen::VectorXd w;  ///< empty until the first call
};

struct InnerResult {
  Eigen::VectorXd w;
  double value = 0.0;  ///< q(w; x)
  double gap = 0.0;    ///< certified suboptimality of w
  std::size_t omega = 0;
  bool exhausted = false;
};

/// Accelerated projected gradient ascent on q(.; x) over the simplex, started
/// from `state.w` (uniform if empty), stopped once the certificate drops to
/// `delta_target` or after `max_inner` steps. Updates `state.w`.
InnerResult fista_inner(const ScenarioData& data, const Eigen::Ref<const Eigen::VectorXd>& x,
                        double delta_target, InnerState& state, std::size_t max_inner);

/// f~(x) = mu/2 ||x||^2 + q(w_x; x), grad = mu x + O^T w_x, with f~ <= f <= f~ + delta.
OracleReply hull_oracle(const ScenarioData& data, const Eigen::Ref<const Eigen::VectorXd>& x,
                        double delta, InnerState& state, std::size_t max_inner);

enum class ProblemKind { softmax, hull };

/// Lower bound on min F from the strongly convex lower model at x_hat.
/// `warm`, when given, seeds (and receives) the inner solver state.
double estimate_fstar(const ScenarioData& data, ProblemKind kind,
                      const Eigen::Ref<const Eigen::VectorXd>& x_hat,
                      std::size_t max_inner = 1000000, InnerState* warm = nullptr);

/// F(x) for the chosen problem; the hull value is evaluated to inner precision `precision`.
double objective_value(const ScenarioData& data, ProblemKind kind,
                       const Eigen::Ref<const Eigen::VectorXd>& x, double precision = 1e-10,
                       std::size_t max_inner = 1000000, InnerState* warm = nullptr);

}  // namespace tunable
