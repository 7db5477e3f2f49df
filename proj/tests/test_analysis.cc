#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "darkpool/analysis.h"
#include "darkpool/datagen.h"
#include "darkpool/lagrangian.h"
#include "darkpool/rng.h"

using namespace darkpool;

namespace {

std::vector<MeanExecutionCurve> curves_of(const std::vector<ExponentialPool>& pools) {
  std::vector<MeanExecutionCurve> out;
  for (const auto& p : pools) out.push_back(MeanExecutionCurve::exponential(p));
  return out;
}

// Sigma = int_0^inf exp(Mt) C exp(M^T t) dt by composite Simpson on [0, T].
Eigen::MatrixXd lyapunov_by_quadrature(const Eigen::MatrixXd& m, const Eigen::MatrixXd& c,
                                       double horizon, int intervals) {
  const double h = horizon / intervals;
  const Eigen::MatrixXd step = (m * h).exp();
  Eigen::MatrixXd e = Eigen::MatrixXd::Identity(m.rows(), m.cols());
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(m.rows(), m.cols());
  for (int k = 0; k <= intervals; ++k) {
    const double w = (k == 0 || k == intervals) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    sum += w * e * c * e.transpose();
    e = step * e;
  }
  return sum * h / 3.0;
}

}  // namespace

TEST(ConditionC, ExactCurves) {
  const std::vector<double> lambda{1.0, 1.0, 1.0}, equal{0.3, 0.3, 0.3};
  EXPECT_EQ(check_condition_c(curves_of(exponential_pools(1.0, lambda, equal))).verdict,
            ConditionVerdict::kStrict);

  const std::vector<double> small{0.1, 0.1}, skewed{1.0, 100.0};
  const ConditionReport fail = check_condition_c(curves_of(exponential_pools(1.0, small, skewed)));
  EXPECT_EQ(fail.verdict, ConditionVerdict::kFails);
  EXPECT_EQ(fail.argmin, 0u);
  EXPECT_EQ(fail.argmax, 1u);
  EXPECT_NEAR(fail.gap, 1.0 - 100.0 * std::exp(-0.1), 1e-12);
}

TEST(ConditionC, MonteCarloStrict) {
  const double base = 0.03;
  const std::vector<double> rho{base * std::exp(0.2), base};
  const auto samples = gen_constant_exponential(1.0, {1.0, 1.0}, 31, 100000);
  const ConditionReport rep = check_condition_c(pools_from_rebates(rho), samples);
  EXPECT_EQ(rep.verdict, ConditionVerdict::kStrict);
  // phi_i'(0) = rho_i exactly since D > 0 almost surely.
  EXPECT_DOUBLE_EQ(rep.min_slope_at_zero.value, base);
  EXPECT_NEAR(rep.max_slope_at_edge.value, rho[0] * std::exp(-1.0),
              4.0 * rep.max_slope_at_edge.std_error);
  EXPECT_GT(rep.pooled_std_error, 0.0);
  EXPECT_EQ(to_string(rep.verdict), "C_strict");
}

TEST(ClosedForm, TwoPools) {
  const std::vector<double> lambda{1.0, 1.0}, rho{std::exp(0.2), 1.0};
  const Allocation r = closed_form_optimum(1.0, lambda, rho);
  EXPECT_NEAR(r[0], 0.6, 1e-14);
  EXPECT_NEAR(r[1], 0.4, 1e-14);
}

TEST(ClosedForm, IdenticalPoolsAreUniform) {
  const std::vector<double> lambda(4, 2.5), rho(4, 0.7);
  const Allocation r = closed_form_optimum(3.0, lambda, rho);
  for (double w : r.weights()) EXPECT_NEAR(w, 0.25, 1e-14);
}

TEST(ClosedForm, FirstOrderConditions) {
  const std::vector<double> lambda{1.0, 2.0, 4.0}, rho{1.0, 1.1, 0.9};
  const double v = 1.5;
  const Allocation r = closed_form_optimum(v, lambda, rho);
  const auto pools = exponential_pools(v, lambda, rho);
  for (std::size_t i = 1; i < 3; ++i) EXPECT_NEAR(pools[i].dphi(r[i]), pools[0].dphi(r[0]), 1e-10);
  // Lambda (1, 2, 4), unit rebates and v = 1 give r proportional to 1 / lambda.
  const Allocation q = closed_form_optimum(1.0, lambda, std::vector<double>{1.0, 1.0, 1.0});
  EXPECT_NEAR(q[0], 4.0 / 7.0, 1e-14);
  EXPECT_NEAR(q[1], 2.0 / 7.0, 1e-14);
  EXPECT_NEAR(q[2], 1.0 / 7.0, 1e-14);
}

TEST(ClosedForm, ThrowsWithoutInteriorOptimum) {
  const std::vector<double> lambda{1.0, 1.0}, rho{100.0, 1.0};
  EXPECT_THROW(closed_form_optimum(1.0, lambda, rho), std::domain_error);
}

TEST(MeanField, SignsAwayFromOptimum) {
  const std::vector<double> rho{std::exp(0.2), 1.0};
  const auto samples = gen_constant_exponential(1.0, {1.0, 1.0}, 32, 100000);
  const VectorEstimate h = mean_field(Allocation({0.9, 0.1}), samples, pools_from_rebates(rho));
  EXPECT_LT(h.value[0] + 3.0 * h.std_error[0], 0.0);
  EXPECT_GT(h.value[1] - 3.0 * h.std_error[1], 0.0);
  // Closed form: h_1 = (a_1 - a_2) / 2 with a_i = rho_i exp(-r_i).
  const double a1 = rho[0] * std::exp(-0.9), a2 = std::exp(-0.1);
  EXPECT_NEAR(h.value[0], 0.5 * (a1 - a2), 4.0 * h.std_error[0]);
}

TEST(MatrixA, UnitVector) {
  const SpectralReport rep = matrix_a(std::vector<double>{1.0, 1.0, 1.0});
  EXPECT_EQ(rep.kernel_dimension, 1u);
  EXPECT_NEAR(rep.min_nonzero_real, 3.0, 1e-12);
  EXPECT_TRUE(rep.bound_holds);
  EXPECT_TRUE(rep.eigenvectors_in_hyperplane);
  std::vector<double> re;
  for (auto ev : rep.eigenvalues) re.push_back(ev.real());
  std::sort(re.begin(), re.end());
  EXPECT_NEAR(re[0], 0.0, 1e-12);
  EXPECT_NEAR(re[1], 3.0, 1e-12);
  EXPECT_NEAR(re[2], 3.0, 1e-12);
}

TEST(MatrixA, TwoPoolTrace) {
  const SpectralReport rep = matrix_a(std::vector<double>{0.3, 1.7});
  EXPECT_NEAR(rep.min_nonzero_real, 2.0, 1e-12);
  EXPECT_NEAR(rep.matrix.trace(), 2.0, 1e-12);
}

TEST(MatrixA, RandomVectors) {
  Rng rng(33);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 7);
    std::vector<double> a(n);
    for (auto& x : a) x = 0.05 + 3.0 * rng.uniform();
    const SpectralReport rep = matrix_a(a);
    EXPECT_EQ(rep.kernel_dimension, 1u);
    EXPECT_TRUE(rep.bound_holds);
    EXPECT_TRUE(rep.eigenvectors_in_hyperplane);
    const Eigen::VectorXd null = rep.matrix * rep.kernel_vector;
    EXPECT_LT(null.norm(), 1e-10);
    for (std::size_t i = 1; i < n; ++i) {
      EXPECT_NEAR(rep.kernel_vector(i) * a[i], rep.kernel_vector(0) * a[0], 1e-10);
    }
    // Independent oracle: the nonzero spectrum is real and lies above N min a.
    Eigen::EigenSolver<Eigen::MatrixXd> es(rep.matrix);
    double min_a = a[0];
    for (double x : a) min_a = std::min(min_a, x);
    int zeros = 0;
    for (auto ev : es.eigenvalues()) {
      EXPECT_LT(std::abs(ev.imag()), 1e-8);
      if (std::abs(ev.real()) < 1e-9) {
        ++zeros;
      } else {
        EXPECT_GE(ev.real(), n * min_a - 1e-9);
      }
    }
    EXPECT_EQ(zeros, 1);
  }
}

TEST(Hyperplane, BasisIsOrthonormal) {
  for (std::size_t n = 2; n <= 6; ++n) {
    const Eigen::MatrixXd q = hyperplane_basis(n);
    ASSERT_EQ(q.rows(), static_cast<Eigen::Index>(n));
    ASSERT_EQ(q.cols(), static_cast<Eigen::Index>(n - 1));
    EXPECT_TRUE((q.transpose() * q).isApprox(Eigen::MatrixXd::Identity(n - 1, n - 1), 1e-14));
    EXPECT_LT((Eigen::RowVectorXd::Ones(n) * q).norm(), 1e-14);
  }
  const Eigen::MatrixXd q2 = hyperplane_basis(2);
  EXPECT_NEAR(q2(0, 0), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(q2(1, 0), -1.0 / std::sqrt(2.0), 1e-15);
}

TEST(Lyapunov, ScalarCase) {
  Eigen::MatrixXd m(1, 1), q(1, 1);
  m << -0.5;
  q << 2.0;
  EXPECT_NEAR(solve_continuous_lyapunov(m, q)(0, 0), 2.0, 1e-14);
}

TEST(Clt, ZeroNoiseGivesZeroCovariance) {
  const std::vector<double> a{1.0, 2.0, 3.0};
  const CltAnalysis clt = analyze_clt(a, Eigen::MatrixXd::Zero(2, 2), 10.0);
  EXPECT_LT(clt.Sigma_inf.norm(), 1e-14);
}

TEST(Clt, AgreesWithQuadrature) {
  const std::vector<double> a{0.8, 1.5, 2.6};
  Eigen::MatrixXd c(2, 2);
  c << 0.7, 0.2, 0.2, 0.4;
  const double step = 2.0;
  const CltAnalysis clt = analyze_clt(a, c, step);
  EXPECT_LT(clt.residual, 1e-10);
  const Eigen::MatrixXd m = -clt.A_inf + Eigen::MatrixXd::Identity(2, 2) / (2.0 * step);
  const Eigen::MatrixXd oracle = lyapunov_by_quadrature(m, c, 80.0, 16000);
  EXPECT_LT((clt.Sigma_inf - oracle).norm(), 1e-8 * std::max(1.0, oracle.norm()));
  EXPECT_TRUE(clt.Sigma_inf.isApprox(clt.Sigma_inf.transpose()));
}

TEST(Clt, ScalarTwoPoolFormula) {
  // N = 2: A_inf = (a_1 + a_2) / 2 and Sigma = c C / (2 c A_inf - 1).
  const std::vector<double> a{0.5, 1.5};
  Eigen::MatrixXd c(1, 1);
  c << 0.3;
  const CltAnalysis clt = analyze_clt(a, c, 3.0);
  EXPECT_NEAR(clt.A_inf(0, 0), 1.0, 1e-14);
  EXPECT_NEAR(clt.Sigma_inf(0, 0), 3.0 * 0.3 / (2.0 * 3.0 * 1.0 - 1.0), 1e-14);
  EXPECT_NEAR(clt.c_min, 0.5, 1e-14);
}

TEST(Clt, RejectsSmallStepConstant) {
  const std::vector<double> a{0.5, 1.5};
  try {
    analyze_clt(a, Eigen::MatrixXd::Identity(1, 1), 0.4);
    FAIL() << "expected domain_error";
  } catch (const std::domain_error& e) {
    EXPECT_NE(std::string(e.what()).find("c_min"), std::string::npos);
  }
}

TEST(NoiseCovariance, PsdAndZeroCase) {
  const auto samples = gen_constant_exponential(1.0, {1.0, 2.0, 4.0}, 34, 20000);
  const auto pools = pools_from_rebates(std::vector<double>{1.0, 1.0, 1.0});
  const Eigen::MatrixXd c = noise_covariance_mc(Allocation({0.5, 0.3, 0.2}), samples, pools);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c);
  EXPECT_GT(es.eigenvalues().minCoeff(), -1e-12);

  const std::vector<MarketSample> full(100, MarketSample{1.0, {5.0, 5.0, 5.0}});
  EXPECT_LT(noise_covariance_mc(Allocation({0.5, 0.3, 0.2}), full, pools).norm(), 1e-15);
}

TEST(Curvature, FiniteDifferenceMatchesClosedForm) {
  const std::vector<double> lambda{1.0, 2.0}, rho{1.0, 1.0};
  const auto samples = gen_constant_exponential(1.0, lambda, 35, 400000);
  const Allocation r({0.6, 0.4});
  const auto exact = curvature_closed_form(exponential_pools(1.0, lambda, rho), r);
  const CurvatureEstimate fd = curvature_finite_difference(pools_from_rebates(rho), samples, r, 0.05);
  for (std::size_t i = 0; i < 2; ++i) {
    // Bias of the central difference is O(h^2) relative.
    EXPECT_NEAR(fd.a[i], exact[i], 4.0 * fd.std_error[i] + 0.01 * exact[i]);
  }
}

TEST(Averaging, IidRateNearHalf) {
  const double lambda = 1.0;
  const auto stream = gen_constant_exponential(1.0, {lambda}, 36, 200000);
  const std::vector<double> grid{0.5, 1.0, 2.0};
  const RateReport rep = averaging_diagnostic(stream, grid, 0, 0.5,
                                              [&](double u) { return std::exp(-lambda * u); });
  EXPECT_FALSE(rep.degenerate);
  EXPECT_TRUE(rep.compatible) << rep.mean_rate;
}

TEST(Averaging, ConstantStreamIsDegenerate) {
  const std::vector<MarketSample> stream(2000, MarketSample{1.0, {3.0}});
  const std::vector<double> grid{0.5, 1.0};
  const RateReport rep = averaging_diagnostic(stream, grid, 0, 0.5);
  EXPECT_TRUE(rep.degenerate);
  EXPECT_FALSE(rep.compatible);
  EXPECT_THROW(averaging_diagnostic(std::vector<MarketSample>(999, MarketSample{1.0, {3.0}}), grid, 0, 0.5),
               std::invalid_argument);
}
