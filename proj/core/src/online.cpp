#include "tunable/online.hpp"

#include <algorithm>
#include <cmath>

#include "tunable/error.hpp"

namespace tunable {

namespace {

void check(const KnownIteration& known, const Coefficients& query, double r) {
  detail::require(known.a > 0.0 && known.b > 0.0 && query.a > 0.0 && query.b > 0.0,
                  "online extension needs positive coefficients");
  detail::require(r >= 0.0, "online extension needs r >= 0");
}

}  // namespace

double online_extend_accuracy(const KnownIteration& known, const Coefficients& query, double r,
                              const Bounds& bounds) {
  check(known, query, r);
  const double log_ratio =
      (std::log(query.b) - std::log(query.a) + std::log(known.a) - std::log(known.b)) / (r + 1.0);
  const double v = std::exp(log_ratio) * known.value;
  return std::max(bounds.lo, std::min(bounds.hi, v));
}

double online_extend_work(const KnownIteration& known, const Coefficients& query, double r,
                          const Bounds& bounds) {
  check(known, query, r);
  const double log_ratio =
      (std::log(query.b) + r * std::log(query.a) - std::log(known.b) - r * std::log(known.a)) /
      (r + 1.0);
  const double v = std::exp(log_ratio) * known.value;
  return std::max(bounds.lo, std::min(bounds.hi, v));
}

}  // namespace tunable
