#include "tunable/lambert_w.hpp"

#include <cmath>
#include <numbers>

#include "tunable/error.hpp"

namespace tunable {

namespace {

double initial_guess(double x) {
  constexpr double kE = std::numbers::e;
  if (x < -0.25) {
    // Series around the branch point -1/e.
    const double p = std::sqrt(std::max(0.0, 2.0 * (kE * x + 1.0)));
    return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  }
  if (x <= 3.0) {
    // Winitzki's approximation.
    const double l = std::log1p(x);
    return l * (1.0 - std::log1p(l) / (2.0 + l));
  }
  const double l1 = std::log(x);
  const double l2 = std::log(l1);
  return l1 - l2 + l2 / l1;
}

}  // namespace

double lambert_w0(double x) {
  constexpr double kMinusInvE = -1.0 / std::numbers::e;
  if (std::isnan(x) || x < kMinusInvE) {
    throw InvalidInput("lambert_w0: argument below -1/e");
  }
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return x;
  // Within rounding of the branch point the Halley step degenerates.
  if (x - kMinusInvE < 1e-300 || x == kMinusInvE) return -1.0;

  double w = initial_guess(x);
  for (int it = 0; it < 64; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    if (wp1 <= 0.0) {
      w = -1.0 + 1e-12;
      continue;
    }
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    const double step = f / denom;
    w -= step;
    if (w < -1.0) w = -1.0;
    if (std::abs(step) <= 1e-16 * (1.0 + std::abs(w))) break;
  }
  return w;
}

}  // namespace tunable
