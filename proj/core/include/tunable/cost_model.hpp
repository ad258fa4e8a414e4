#pragma once

#include <limits>
#include <string>

namespace tunable {

enum class CostKind {
  power,        ///< h(d) = d^{-r}, r > 0
  logarithmic,  ///< h(d) = -log(d)
  log_squared,  ///< h(d) = log(d)^2
};

/// Closed interval of admissible inexactness values.
struct Interval {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();

  [[nodiscard]] bool contains(double v) const { return v >= lo && v <= hi; }
};

/// Oracle cost shape h together with its derivative and inverses.
///
/// h is strictly decreasing and convex on its domain, h' is strictly negative
/// and strictly increasing. The checked member functions reject arguments
/// outside the domain; the `raw_*` statics skip the domain check and are used
/// by the solvers when they probe candidate values outside the box.
class CostModel {
 public:
  /// Largest admissible upper end for log_squared so that h' stays < 0.
  static constexpr double kLogSquaredCap = 1.0 - 1e-12;

  static CostModel power(double r, Interval domain = {});
  static CostModel logarithmic(Interval domain = {0.0, kLogSquaredCap});
  static CostModel log_squared(Interval domain = {0.0, kLogSquaredCap});

  /// Parses "power:R", "log" or "logsq".
  static CostModel parse(const std::string& spec, Interval domain);

  [[nodiscard]] CostKind kind() const { return kind_; }
  /// Exponent for the power kind; 0 for the logarithmic kind (h_0).
  [[nodiscard]] double exponent() const { return r_; }
  [[nodiscard]] const Interval& domain() const { return domain_; }
  [[nodiscard]] CostModel with_domain(Interval domain) const;
  [[nodiscard]] std::string describe() const;

  [[nodiscard]] double value(double delta) const;
  [[nodiscard]] double derivative(double delta) const;
  /// delta such that h'(delta) = slope; slope must be negative and the
  /// result must land in the domain.
  [[nodiscard]] double derivative_inverse(double slope) const;
  /// delta such that h(delta) = cost.
  [[nodiscard]] double inverse(double cost) const;

  [[nodiscard]] double raw_value(double delta) const;
  [[nodiscard]] double raw_derivative(double delta) const;
  [[nodiscard]] double raw_derivative_inverse(double slope) const;
  [[nodiscard]] double raw_inverse(double cost) const;
  [[nodiscard]] double raw_second_derivative(double delta) const;

 private:
  CostModel(CostKind kind, double r, Interval domain);

  void check_delta(double delta) const;

  CostKind kind_;
  double r_;
  Interval domain_;
};

}  // namespace tunable
