#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "quadratic.hpp"
#include "tunable/certificates.hpp"
#include "tunable/error.hpp"
#include "tunable/fgm.hpp"
#include "tunable/simplex.hpp"

namespace tunable {
namespace {

constexpr double kGolden2 = 2.6180339887498948;

// Recursion residual relative to the size of its terms; with mu > 0 these grow like mu A^2.
double term_relative_residual(const CertificateSequence& c) {
  double worst = 0.0;
  for (std::size_t k = 0; k < c.steps(); ++k) {
    const double a = c.A[k + 1] - c.A[k];
    const double rhs = c.A[k + 1] * (1.0 + c.mu * c.A[k]);
    worst = std::max(worst, std::abs(c.L[k] * a * a - rhs) / rhs);
  }
  return worst;
}

TEST(Certificates, FirstSteps) {
  EXPECT_DOUBLE_EQ(next_certificate(0.0, 1.0, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(next_certificate(0.0, 4.0, 0.3), 0.25);
  EXPECT_NEAR(next_certificate(1.0, 1.0, 0.0), kGolden2, 1e-15);
  const auto c = fixed_step_certificates(2, 1.0, 0.0);
  ASSERT_EQ(c.A.size(), 3u);
  EXPECT_EQ(c.A[0], 0.0);
  EXPECT_NEAR(c.A[2], kGolden2, 1e-15);
  EXPECT_EQ(fixed_step_certificates(1, 4.0, 0.0).A.back(), 0.25);
  EXPECT_THROW((void)next_certificate(-1.0, 1.0, 0.0), InvalidInput);
  EXPECT_THROW((void)fixed_step_certificates(0, 1.0, 0.0), InvalidInput);
}

TEST(Certificates, QuadraticGrowthWithoutStrongConvexity) {
  for (double L : {1.0, 7.5}) {
    const auto c = fixed_step_certificates(10000, L, 0.0);
    EXPECT_LE(max_recursion_residual(c), 1e-9);
    double prev_ratio = 0.0;
    for (std::size_t k = 1; k < c.A.size(); ++k) {
      const double kk = static_cast<double>(k);
      EXPECT_GE(c.A[k], kk * kk / (4.0 * L));
      EXPECT_GT(c.A[k], c.A[k - 1]);
      const double ratio = c.A[k] / (kk * kk);
      if (k > 2) {
        EXPECT_LE(ratio, prev_ratio * (1.0 + 1e-12));
      }
      EXPECT_LE(ratio, 1.0 / L);
      prev_ratio = ratio;
    }
  }
}

TEST(Certificates, GeometricGrowthWithStrongConvexity) {
  const double L = 10.0;
  const double mu = 0.1;
  const auto c = fixed_step_certificates(300, L, mu);
  EXPECT_LE(term_relative_residual(c), 1e-12);
  const std::size_t n = c.A.size();
  const double last = c.A[n - 1] / c.A[n - 2];
  EXPECT_GT(last, 1.0);
  for (std::size_t k = n - 50; k < n; ++k) EXPECT_NEAR(c.A[k] / c.A[k - 1], last, 1e-6);
  // For large A the recursion reduces to (rho - 1) / sqrt(rho) = sqrt(mu / L).
  const double q = std::sqrt(mu / L);
  const double s = 0.5 * (q + std::sqrt(q * q + 4.0));
  EXPECT_NEAR(last, s * s, 1e-6);
}

TEST(Certificates, AppendKeepsStepsInSync) {
  CertificateSequence c;
  c.mu = 0.2;
  c.append(2.0);
  c.append(3.0);
  EXPECT_EQ(c.steps(), 2u);
  EXPECT_EQ(c.A.size(), 3u);
  EXPECT_LE(max_recursion_residual(c), 1e-12);
}

TEST(ImpactCoefficients, Families) {
  const auto c = fixed_step_certificates(2, 1.0, 0.0);
  auto t = impact_coefficients_fgm(c);
  EXPECT_EQ(t.a, (std::vector<double>{1.0, c.A[2]}));
  EXPECT_EQ(t.b, (std::vector<double>{1.0, 1.0}));
  EXPECT_EQ(impact_coefficients_fgm(c, 1).a, std::vector<double>{1.0});

  const std::vector<double> ones{1.0, 1.0};
  EXPECT_EQ(impact_coefficients_iafb(c, ones, 0.0).a, t.a);
  const std::vector<double> one{1.0};
  EXPECT_DOUBLE_EQ(impact_coefficients_iafb(c, one, 1.0).a[0], 4.0);
  const std::vector<double> twos{2.0, 2.0};
  EXPECT_DOUBLE_EQ(impact_coefficients_iafb(c, twos, 0.0).a[1], c.A[2] / 2.0);

  const std::vector<double> steps{1.0, 8.0};
  t = impact_coefficients_ipl(steps);
  EXPECT_DOUBLE_EQ(t.a[0], 1.0);
  EXPECT_DOUBLE_EQ(t.b[0], 1.0);
  EXPECT_DOUBLE_EQ(t.a[1], 0.125);
  EXPECT_NEAR(t.b[1], 4.0, 1e-15);
}

TEST(Simplex, ProjectionProperties) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    Eigen::VectorXd v(1 + i % 30);
    for (auto& x : v) x = g(rng);
    const Eigen::VectorXd p = project_simplex(v);
    EXPECT_TRUE(in_simplex(p));
    // Optimality: <v - p, q - p> <= 0 for every vertex q.
    for (Eigen::Index j = 0; j < v.size(); ++j) {
      Eigen::VectorXd q = Eigen::VectorXd::Zero(v.size());
      q[j] = 1.0;
      EXPECT_LE((v - p).dot(q - p), 1e-10);
    }
    EXPECT_LE((project_simplex(p) - p).norm(), 1e-14);
  }
  Eigen::VectorXd bad(2);
  bad << 1.0, std::nan("");
  EXPECT_THROW((void)project_simplex(bad), InvalidInput);
}

FgmResult run_quadratic(const testing::SimplexQuadratic& q, std::size_t N, const Eigen::VectorXd& x0,
                        FgmConfig config) {
  config.R2 = (x0 - q.minimizer()).squaredNorm();
  return fgm_run(
      config, [&](const Eigen::VectorXd& y, double) { return q.reply(y); },
      [](std::size_t, double) { return 0.0; }, N, x0);
}

TEST(Fgm, NoiseFreeBoundHolds) {
  for (double mu : {0.0, 0.5}) {
    const auto q = testing::default_quadratic(mu);
    const double fstar = q.value(q.minimizer());
    const Eigen::Vector2d x0(0.2, 0.8);
    FgmConfig config;
    config.L_init = q.smoothness();
    config.mu = mu;
    for (std::size_t N = 1; N <= 100; ++N) {
      const auto r = run_quadratic(q, N, x0, config);
      EXPECT_TRUE(in_simplex(r.x));
      const double gap = q.value(r.x) - fstar;
      EXPECT_LE(gap, r.trajectory.back().bound + 1e-15) << "N=" << N;
    }
  }
}

TEST(Fgm, AdaptiveStaysBelowCapAndConverges) {
  const auto q = testing::default_quadratic(0.1);
  const double fstar = q.value(q.minimizer());
  FgmConfig config;
  config.mode = StepMode::adaptive;
  config.mu = 0.1;
  config.L_cap = 10.0 * q.smoothness();
  config.L_init = config.L_cap;
  const Eigen::Vector2d x0(0.9, 0.1);
  const auto r = run_quadratic(q, 200, x0, config);
  for (const auto& row : r.trajectory) EXPECT_LE(row.L, config.L_cap);
  EXPECT_LT(q.value(r.x) - fstar, 1e-10);
  EXPECT_LE(q.value(r.x) - fstar, r.trajectory.back().bound);
  EXPECT_LE(term_relative_residual(r.certificates), 1e-12);
  EXPECT_GT(r.total_work, 200.0);
}

TEST(Fgm, ErrorAccumulation) {
  const std::size_t N = 10000;
  const double delta_ref = 1e-3;
  const auto certs = fixed_step_certificates(N, 1.0, 0.0);
  BoundTracker constant{2.0, 0.0};
  BoundTracker decaying{2.0, 0.0};
  for (std::size_t k = 0; k < N; ++k) {
    const double kk = static_cast<double>(k + 1);
    constant.add(certs.A[k + 1], delta_ref);
    decaying.add(certs.A[k + 1], delta_ref / (kk * kk * kk));
    EXPECT_GE(bound_value(constant, certs.A[k + 1]), 2.0 * delta_ref);
  }
  EXPECT_LE(bound_value(decaying, certs.A[N]), 1e-2 * delta_ref);
}

TEST(Fgm, LineSearchTest) {
  Eigen::Vector2d g(1.0, 0.0);
  Eigen::Vector2d y(0.5, 0.5);
  Eigen::Vector2d x(0.4, 0.6);
  // Model value at x: 1 - 0.1 + L/2 * 0.02.
  EXPECT_TRUE(line_search_validate(1.0, g, 0.91, x, y, 1.0, 0.0));
  EXPECT_FALSE(line_search_validate(1.0, g, 0.92, x, y, 1.0, 0.0));
  EXPECT_TRUE(line_search_validate(1.0, g, 0.92, x, y, 1.0, 0.01));
}

TEST(Fgm, RejectsBadConfigAndStart) {
  const auto q = testing::default_quadratic();
  FgmConfig config;
  config.L_init = -1.0;
  EXPECT_THROW((void)run_quadratic(q, 5, Eigen::Vector2d(0.5, 0.5), config), InvalidInput);
  config.L_init = 1.0;
  EXPECT_THROW((void)run_quadratic(q, 5, Eigen::Vector2d(0.7, 0.7), config), InvalidInput);
}

TEST(Fgm, NonFiniteIterateCarriesTrajectory) {
  FgmConfig config;
  config.L_init = 1.0;
  const auto oracle = [](const Eigen::VectorXd& y, double) {
    OracleReply r;
    r.gradient = Eigen::VectorXd::Constant(y.size(), std::nan(""));
    return r;
  };
  try {
    (void)fgm_run(config, oracle, [](std::size_t, double) { return 0.0; }, 3,
                  Eigen::Vector2d(0.5, 0.5));
    FAIL() << "expected FgmError";
  } catch (const FgmError& e) {
    EXPECT_TRUE(e.trajectory().empty());
  }
}

}  // namespace
}  // namespace tunable
