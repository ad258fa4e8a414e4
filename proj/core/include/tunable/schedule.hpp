#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "tunable/cost_model.hpp"

namespace tunable {

/// Accuracy-controlled allocation instance: minimize sum a_k d_k subject to
/// sum b_k h(d_k) = sum b_k h(delta_ref) and m*delta_ref <= d_k <= M*delta_ref.
class ScheduleProblem {
 public:
  /// Validates the coefficients and bounds and restricts the cost shape's
  /// domain to [m * delta_ref, M * delta_ref].
  ScheduleProblem(std::vector<double> a, std::vector<double> b, double delta_ref, double m,
                  double M, const CostModel& cost_shape);

  [[nodiscard]] std::size_t size() const { return a_.size(); }
  [[nodiscard]] const std::vector<double>& a() const { return a_; }
  [[nodiscard]] const std::vector<double>& b() const { return b_; }
  [[nodiscard]] double delta_ref() const { return delta_ref_; }
  [[nodiscard]] double m() const { return m_; }
  [[nodiscard]] double M() const { return M_; }
  [[nodiscard]] double lower() const { return m_ * delta_ref_; }
  [[nodiscard]] double upper() const { return M_ * delta_ref_; }
  [[nodiscard]] const CostModel& cost() const { return cost_; }

 private:
  std::vector<double> a_;
  std::vector<double> b_;
  double delta_ref_;
  double m_;
  double M_;
  CostModel cost_;
};

/// Work-controlled allocation instance with cost h_r (r = 0 is the
/// logarithmic member). omega_M is the per-iteration lower work bound and
/// omega_m the upper one, mirroring the loose/tight inexactness ends.
struct WorkProblem {
  std::vector<double> a;
  std::vector<double> b;
  double omega_bar = 0.0;
  double omega_M = 0.0;
  double omega_m = std::numeric_limits<double>::infinity();
  double r = 1.0;

  void validate() const;
};

enum class ScheduleKind { accuracy, work };

struct Schedule {
  std::vector<double> values;
  ScheduleKind kind = ScheduleKind::accuracy;
};

/// Partition and multiplier describing a solved schedule.
///
/// For accuracy problems `lambda_star` is the (negative) slope multiplier with
/// h'(d_k) = lambda_star * a_k / b_k on the transient set. For work problems
/// it holds the positive scale of the transient allocation.
struct KktCertificate {
  std::size_t n_plus = 0;
  std::size_t n_minus = 0;
  double lambda_star = 0.0;
  std::vector<std::size_t> rho;
  std::vector<double> nu;
  /// Every index sits on a bound and the bounds alone exhaust the budget.
  bool degenerate = false;
};

struct SolvedSchedule {
  Schedule schedule;
  KktCertificate certificate;
};

}  // namespace tunable
