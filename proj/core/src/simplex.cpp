#include "tunable/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "tunable/error.hpp"

namespace tunable {

Eigen::VectorXd project_simplex(const Eigen::Ref<const Eigen::VectorXd>& v) {
  const Eigen::Index d = v.size();
  detail::require(d > 0, "cannot project an empty vector");
  detail::require(v.allFinite(), "cannot project a vector with non-finite entries");

  std::vector<double> u(v.data(), v.data() + d);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double tau = 0.0;
  for (Eigen::Index j = 0; j < d; ++j) {
    cumulative += u[static_cast<std::size_t>(j)];
    const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (u[static_cast<std::size_t>(j)] - candidate > 0.0) tau = candidate;
  }
  Eigen::VectorXd x = (v.array() - tau).max(0.0);
  // Renormalize away the last ulp of drift so the sum is 1 to machine precision.
  const double s = x.sum();
  if (s > 0.0) x /= s;
  return x;
}

bool in_simplex(const Eigen::Ref<const Eigen::VectorXd>& x, double tol) {
  return x.size() > 0 && x.minCoeff() >= -tol && std::abs(x.sum() - 1.0) <= tol;
}

}  // namespace tunable
