#pragma once

#include <Eigen/Core>

namespace tunable {

/// Euclidean projection onto {x >= 0, sum x = 1} (sort-based, O(d log d)).
Eigen::VectorXd project_simplex(const Eigen::Ref<const Eigen::VectorXd>& v);

/// True when x is entrywise >= -tol and sums to 1 within tol.
bool in_simplex(const Eigen::Ref<const Eigen::VectorXd>& x, double tol = 1e-12);

}  // namespace tunable
