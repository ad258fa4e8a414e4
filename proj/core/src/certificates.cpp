#include "tunable/certificates.hpp"

#include <algorithm>
#include <cmath>

#include "tunable/error.hpp"

namespace tunable {

double next_certificate(double A_k, double L_next, double mu) {
  detail::require(std::isfinite(A_k) && A_k >= 0.0, "certificate A_k must be finite and >= 0");
  detail::require(std::isfinite(L_next) && L_next > 0.0, "L must be finite and positive");
  detail::require(std::isfinite(mu) && mu >= 0.0, "mu must be finite and >= 0");
  const double c = 1.0 + mu * A_k;
  const double B = 2.0 * L_next * A_k + c;
  // Discriminant B^2 - 4 L^2 A_k^2 factored as c (c + 4 L A_k) to avoid cancellation.
  const double root = std::sqrt(c * (c + 4.0 * L_next * A_k));
  return (B + root) / (2.0 * L_next);
}

void CertificateSequence::append(double L_next) {
  A.push_back(next_certificate(A.back(), L_next, mu));
  L.push_back(L_next);
}

CertificateSequence fixed_step_certificates(std::size_t N, double L, double mu) {
  detail::require(N >= 1, "need at least one certificate step");
  CertificateSequence certs;
  certs.mu = mu;
  certs.A.reserve(N + 1);
  certs.L.reserve(N);
  for (std::size_t k = 0; k < N; ++k) certs.append(L);
  return certs;
}

double max_recursion_residual(const CertificateSequence& certs) {
  double worst = 0.0;
  for (std::size_t k = 0; k < certs.steps(); ++k) {
    const double a = certs.A[k + 1] - certs.A[k];
    const double lhs = certs.L[k] * a * a;
    const double rhs = certs.A[k + 1] * (1.0 + certs.mu * certs.A[k]);
    worst = std::max(worst, std::abs(lhs - rhs) / certs.A[k + 1]);
  }
  return worst;
}

CoefficientTable impact_coefficients_fgm(const CertificateSequence& certs, std::size_t N) {
  if (N == 0) N = certs.steps();
  detail::require(certs.A.size() >= N + 1, "certificate sequence is shorter than N + 1");
  CoefficientTable c;
  c.a.assign(certs.A.begin() + 1, certs.A.begin() + 1 + static_cast<std::ptrdiff_t>(N));
  c.b.assign(N, 1.0);
  return c;
}

CoefficientTable impact_coefficients_iafb(const CertificateSequence& certs,
                                          std::span<const double> lambdas, double mu) {
  detail::require(certs.A.size() >= lambdas.size() + 1,
                  "certificate sequence is shorter than the stepsize sequence");
  CoefficientTable c;
  c.a.reserve(lambdas.size());
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    const double lam = lambdas[k];
    detail::require(lam > 0.0, "stepsizes must be positive");
    const double f = 1.0 + mu * lam;
    c.a.push_back(certs.A[k + 1] * f * f / lam);
  }
  c.b.assign(lambdas.size(), 1.0);
  return c;
}

CoefficientTable impact_coefficients_ipl(std::span<const double> stepsizes) {
  CoefficientTable c;
  for (double t : stepsizes) {
    detail::require(t > 0.0, "stepsizes must be positive");
    c.a.push_back(1.0 / t);
    c.b.push_back(std::cbrt(t * t));
  }
  return c;
}

}  // namespace tunable
