#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "darkpool/reinforcement.h"
#include "darkpool/rng.h"

using namespace darkpool;

namespace {

std::vector<MeanExecutionCurve> exponential_curves(const std::vector<double>& lambda,
                                                   const std::vector<double>& rho) {
  std::vector<MeanExecutionCurve> out;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    out.push_back(MeanExecutionCurve::exponential({rho[i], lambda[i], 1.0}));
  }
  return out;
}

// h(x) = x - phi(x / sum x), used by the finite-difference oracle.
std::vector<double> field(const std::vector<double>& x, const std::vector<MeanExecutionCurve>& c) {
  return reinforcement_mean_field(x, c);
}

}  // namespace

TEST(ReinforceStep, HandExample) {
  const auto pools = pools_from_rebates(std::vector<double>{1.0, 1.0});
  ReinforcementState s = ReinforcementState::initial(2);
  s.cumulative = {1.0, 1.0};
  s.n = 2;
  const ReinforcementState next = reinforce_step(s, {2.0, {1.0, 0.0}}, pools);
  EXPECT_DOUBLE_EQ(next.cumulative[0], 2.0);
  EXPECT_DOUBLE_EQ(next.cumulative[1], 1.0);
  EXPECT_NEAR(next.allocation()[0], 2.0 / 3.0, 1e-15);
  EXPECT_EQ(next.n, 3u);
  EXPECT_DOUBLE_EQ(next.index_average()[0], 2.0 / 3.0);

  const ReinforcementState same = reinforce_step(s, {2.0, {0.0, 0.0}}, pools);
  EXPECT_EQ(same.cumulative, s.cumulative);
  EXPECT_EQ(same.allocation(), s.allocation());
}

TEST(ReinforceStep, UniformBeforeFirstExecution) {
  const ReinforcementState s = ReinforcementState::initial(4);
  EXPECT_EQ(s.allocation(), Allocation::uniform(4));
  const auto pools = pools_from_rebates(std::vector<double>{1.0, 1.0, 1.0, 1.0});
  const ReinforcementState t = reinforce_step(s, {4.0, {1.0, 1.0, 1.0, 1.0}}, pools);
  EXPECT_EQ(t.allocation(), Allocation::uniform(4));
}

TEST(ReinforceStep, ResetKeepsAllocation) {
  ReinforcementState s = ReinforcementState::initial(2);
  s.cumulative = {3.0, 1.0};
  const ReinforcementState r = reset_profits(s);
  EXPECT_EQ(r.n, 0u);
  EXPECT_DOUBLE_EQ(r.total(), 0.0);
  EXPECT_EQ(r.allocation(), s.allocation());
}

TEST(PsiInverse, Examples) {
  const auto c = MeanExecutionCurve::exponential({1.0, 1.0, 1.0});
  EXPECT_DOUBLE_EQ(psi_inverse(c, c.dphi0()), 0.0);
  EXPECT_NEAR(psi_inverse(c, 1.0 - std::exp(-1.0)), 1.0, 1e-10);
  EXPECT_THROW(psi_inverse(c, 1.5), std::domain_error);
  EXPECT_THROW(psi_inverse(c, 1e-9), std::domain_error);
}

TEST(Equilibrium, IdenticalPoolsUniform) {
  const auto curves = exponential_curves({2.0, 2.0, 2.0}, {0.5, 0.5, 0.5});
  const EquilibriumResult eq = solve_equilibrium(curves);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(eq.r[i], 1.0 / 3.0);
    EXPECT_NEAR(eq.x[i], curves[i].phi(1.0 / 3.0), 1e-12);
  }
  EXPECT_TRUE(eq.interior_guaranteed);
}

TEST(Equilibrium, ExponentialFixture) {
  const auto curves = exponential_curves({1.0, 2.0}, {1.0, 1.0});
  const EquilibriumResult eq = solve_equilibrium(curves);
  EXPECT_LT(eq.sum_residual, 1e-10);
  EXPECT_LT(eq.level_residual, 1e-8);
  EXPECT_LT(eq.fixed_point_residual, 1e-8);
  EXPECT_GT(eq.theta, 0.0);
  EXPECT_LT(eq.theta, 1.0);
  // Oracle: Theta evaluated by independent forward bisection on each psi_i.
  double total = 0.0;
  for (const auto& c : curves) {
    double lo = 0.0, hi = 100.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (c.psi(mid) > eq.theta ? lo : hi) = mid;
    }
    total += lo;
  }
  EXPECT_NEAR(total, 1.0, 1e-8);
}

TEST(Equilibrium, EnumerationCoversSubsets) {
  const auto curves = exponential_curves({1.0, 2.0, 3.0}, {1.0, 1.0, 1.0});
  const auto all = enumerate_equilibria(curves);
  EXPECT_EQ(all.size(), 7u);
  for (const auto& eq : all) {
    double sum = 0.0;
    for (double w : eq.r.weights()) sum += w;
    EXPECT_NEAR(sum, 1.0, 1e-12);
    for (std::size_t i = 0; i < 3; ++i) {
      const bool in = std::find(eq.support.begin(), eq.support.end(), i) != eq.support.end();
      if (!in) EXPECT_EQ(eq.r[i], 0.0);
    }
  }
}

TEST(Jacobian, ZeroPhiGivesIdentity) {
  const MeanExecutionCurve zero{[](double) { return 0.0; }, [](double) { return 0.0; }};
  const std::vector<MeanExecutionCurve> curves(3, zero);
  const Eigen::MatrixXd j = mean_field_jacobian(std::vector<double>{1.0, 2.0, 3.0}, curves);
  EXPECT_TRUE(j.isApprox(Eigen::MatrixXd::Identity(3, 3)));
  EXPECT_THROW(mean_field_jacobian(std::vector<double>{0.0, 0.0, 0.0}, curves), std::domain_error);
}

TEST(Jacobian, MatchesFiniteDifferences) {
  const auto curves = exponential_curves({1.0, 2.0, 4.0}, {0.6, 1.0, 1.7});
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> x{0.1 + rng.uniform(), 0.1 + rng.uniform(), 0.1 + rng.uniform()};
    const Eigen::MatrixXd j = mean_field_jacobian(x, curves);
    const double h = 1e-6;
    for (int col = 0; col < 3; ++col) {
      auto xp = x, xm = x;
      xp[col] += h;
      xm[col] -= h;
      const auto fp = field(xp, curves), fm = field(xm, curves);
      for (int row = 0; row < 3; ++row) {
        EXPECT_NEAR(j(row, col), (fp[row] - fm[row]) / (2 * h), 1e-6);
        if (row != col) EXPECT_GT(j(row, col), 0.0);
      }
    }
  }
}

TEST(Attractiveness, ConstantPhi) {
  const MeanExecutionCurve flat{[](double) { return 0.5; }, [](double) { return 0.0; }};
  EquilibriumResult eq;
  eq.x = {0.5, 0.5};
  eq.r = Allocation::uniform(2);
  const AttractivenessReport rep = attractiveness_check(eq, std::vector<MeanExecutionCurve>(2, flat));
  EXPECT_DOUBLE_EQ(rep.lhs, 0.0);
  EXPECT_DOUBLE_EQ(rep.rhs, 1.0);
  EXPECT_TRUE(rep.attractive);
}

TEST(Attractiveness, SymmetricFixtureCrossCheck) {
  const auto curves = exponential_curves({2.0, 2.0, 2.0}, {1.0, 1.0, 1.0});
  const EquilibriumResult eq = solve_equilibrium(curves);
  const AttractivenessReport rep = attractiveness_check(eq, curves);
  EXPECT_GT(rep.rhs, 0.0);
  if (rep.attractive) EXPECT_TRUE(rep.eigenvalues_positive);
  double x_bar = 0.0;
  for (double v : eq.x) x_bar += v;
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_GT(1.0 - curves[i].dphi(eq.x[i] / x_bar) / x_bar, 0.0);
  }
}
