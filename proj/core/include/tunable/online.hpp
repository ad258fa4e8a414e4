#pragma once

namespace tunable {

/// Coefficients and optimal value of an already scheduled iteration.
struct KnownIteration {
  double a = 1.0;
  double b = 1.0;
  double value = 0.0;
};

struct Coefficients {
  double a = 1.0;
  double b = 1.0;
};

struct Bounds {
  double lo = 0.0;
  double hi = 0.0;
};

/// Extends an accuracy schedule to a new iteration by preserving the optimal
/// ratio (b_q a_k / (a_q b_k))^{1/(r+1)}, clipped to `bounds`.
double online_extend_accuracy(const KnownIteration& known, const Coefficients& query, double r,
                              const Bounds& bounds);

/// Work counterpart with ratio (b_q a_q^r / (b_k a_k^r))^{1/(r+1)}.
double online_extend_work(const KnownIteration& known, const Coefficients& query, double r,
                          const Bounds& bounds);

}  // namespace tunable
