#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "tunable/certificates.hpp"
#include "tunable/error.hpp"

namespace tunable {

/// One answer of an inexact first-order oracle.
struct OracleReply {
  double value = 0.0;
  Eigen::VectorXd gradient;
  /// Guaranteed inexactness of (value, gradient).
  double delta = 0.0;
  /// Inner iterations (or modeled work) spent producing the reply.
  double inner_work = 0.0;
  /// The inner solver ran out of iterations before certifying `delta`.
  bool exhausted = false;
};

enum class StepMode { fixed_step, adaptive };

struct FgmConfig {
  StepMode mode = StepMode::fixed_step;
  double L_init = 1.0;
  double mu = 0.0;
  /// Factor by which the stepsize grows at the start of each adaptive iteration.
  double increase_factor = 1.5;
  /// Factor by which the stepsize shrinks after a failed validation.
  double decrease_factor = 2.0;
  /// Inverse stepsize that is always valid; accepted without testing.
  double L_cap = std::numeric_limits<double>::infinity();
  /// Squared distance bound used for bound reporting (2 is the simplex diameter squared).
  double R2 = 2.0;
  /// Sample the objective callback when k % sample_every == 0 (0 disables sampling).
  std::size_t sample_every = 0;

  void validate() const;
};

/// Per-iteration trajectory row; `k` refers to the step that produced x_{k+1}.
struct RunRecord {
  std::size_t k = 0;
  double delta = 0.0;
  double omega = 0.0;
  double L = 0.0;
  double A = 0.0;
  double objective = std::numeric_limits<double>::quiet_NaN();
  double cum_work = 0.0;
  double bound = 0.0;
};

struct BoundTracker {
  double R2 = 0.0;
  /// Running sum of A_{k+1} delta_k.
  double weighted_inexactness = 0.0;

  void add(double A_next, double delta) { weighted_inexactness += A_next * delta; }
};

/// (R^2 + 2 sum A_{k+1} delta_k) / A_N.
double bound_value(const BoundTracker& tracker, double A_N);

/// Inexact descent-lemma test used by the adaptive stepsize rule.
bool line_search_validate(double f_y, const Eigen::Ref<const Eigen::VectorXd>& grad_y,
                          double f_x_next, const Eigen::Ref<const Eigen::VectorXd>& x_next,
                          const Eigen::Ref<const Eigen::VectorXd>& y, double L_candidate,
                          double delta);

using OracleFn = std::function<OracleReply(const Eigen::VectorXd& point, double delta)>;
/// Receives the iteration index and the candidate certificate A_{k+1}; returns delta_k.
using ScheduleFn = std::function<double(std::size_t k, double A_next)>;
using ObjectiveFn = std::function<double(const Eigen::VectorXd& x)>;

struct FgmResult {
  Eigen::VectorXd x;
  std::vector<RunRecord> trajectory;
  CertificateSequence certificates;
  BoundTracker tracker;
  double total_work = 0.0;
  std::size_t exhausted_calls = 0;
};

/// Raised when an iterate stops being finite; carries the rows recorded so far.
class FgmError : public NumericalFailure {
 public:
  FgmError(const std::string& what, std::vector<RunRecord> trajectory)
      : NumericalFailure(what), trajectory_(std::move(trajectory)) {}
  [[nodiscard]] const std::vector<RunRecord>& trajectory() const { return trajectory_; }

 private:
  std::vector<RunRecord> trajectory_;
};

/// Similar-triangles fast gradient method over the unit simplex.
///
/// Each step solves L a^2 = A_{k+1}(1 + mu A_k) for a = A_{k+1} - A_k, queries
/// the oracle at y = (A_k x + a z) / A_{k+1}, takes the strongly convex prox
/// step on z and averages x. In adaptive mode the candidate L starts at the
/// previous value divided by `increase_factor` and is multiplied by
/// `decrease_factor` until line_search_validate passes or L reaches L_cap.
FgmResult fgm_run(const FgmConfig& config, const OracleFn& oracle, const ScheduleFn& schedule,
                  std::size_t N, const Eigen::VectorXd& x0, const ObjectiveFn& objective = {});

}  // namespace tunable
