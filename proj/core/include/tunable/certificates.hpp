#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tunable/csv_io.hpp"

namespace tunable {

/// FGM certificates A_0 = 0 < A_1 < ... with the inverse stepsizes that produced them.
/// L[k] is the value used to go from A[k] to A[k+1], so L.size() == A.size() - 1.
struct CertificateSequence {
  std::vector<double> A{0.0};
  std::vector<double> L;
  double mu = 0.0;

  [[nodiscard]] std::size_t steps() const { return L.size(); }
  void append(double L_next);
};

/// Larger root of L A^2 - (2 L A_k + 1 + mu A_k) A + L A_k^2 = 0.
double next_certificate(double A_k, double L_next, double mu);

CertificateSequence fixed_step_certificates(std::size_t N, double L, double mu);

/// |L_{k+1}(A_{k+1}-A_k)^2 - A_{k+1}(1+mu A_k)| / A_{k+1}, maximized over k.
double max_recursion_residual(const CertificateSequence& certs);

/// a_k = A_{k+1}, b_k = 1 for the first N steps (all steps when N == 0).
CoefficientTable impact_coefficients_fgm(const CertificateSequence& certs, std::size_t N = 0);

/// a_k = A_{k+1} (1 + mu lambda_k)^2 / lambda_k, b_k = 1.
CoefficientTable impact_coefficients_iafb(const CertificateSequence& certs,
                                          std::span<const double> lambdas, double mu);

/// a_k = 1 / t_k, b_k = t_k^{2/3}.
CoefficientTable impact_coefficients_ipl(std::span<const double> stepsizes);

}  // namespace tunable
