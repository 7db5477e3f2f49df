#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "darkpool/bench.h"
#include "darkpool/datagen.h"

using namespace darkpool;

TEST(Oracle, GreedyFill) {
  const std::vector<double> rho{0.05, 0.03, 0.01};
  EXPECT_NEAR(oracle_cr({10.0, {2.0, 3.0, 10.0}}, rho), 0.24, 1e-15);
  EXPECT_NEAR(oracle_cr({1.0, {2.0, 3.0, 10.0}}, rho), 0.05, 1e-15);
  EXPECT_NEAR(oracle_cr({4.0, {0.0, 3.0, 0.5}}, rho), 0.095, 1e-15);
  const std::vector<double> unsorted{0.01, 0.05};
  EXPECT_THROW(oracle_cr({1.0, {1.0, 1.0}}, unsorted), std::invalid_argument);
}

TEST(Oracle, SortsPoolModels) {
  const std::vector<double> rho{0.01, 0.05, 0.03};
  const auto pools = pools_from_rebates(rho);
  // Same as filling (0.05, 0.03, 0.01) with D permuted accordingly.
  EXPECT_NEAR(oracle_cr({10.0, {10.0, 2.0, 3.0}}, pools), 0.24, 1e-15);
}

TEST(AlgoCr, Examples) {
  const auto pools = pools_from_rebates(std::vector<double>{0.05, 0.03});
  EXPECT_NEAR(algo_cr({10.0, {2.0, 10.0}}, Allocation({0.5, 0.5}), pools), 0.05 * 2 + 0.03 * 5, 1e-15);
  EXPECT_NEAR(algo_cr({10.0, {2.0, 10.0}}, Allocation({0.0, 1.0}), pools), 0.3, 1e-15);
  EXPECT_THROW(algo_cr({10.0, {2.0, 10.0}}, Allocation({1.2, -0.2}), pools), std::invalid_argument);
}

TEST(MovingMean, Examples) {
  const std::vector<double> x{1, 2, 3, 4, 5, 6};
  const auto m = moving_mean(x, 2, 2);
  ASSERT_EQ(m.size(), 6u);
  EXPECT_DOUBLE_EQ(m[0], 1.0);
  EXPECT_DOUBLE_EQ(m[1], 1.5);
  EXPECT_DOUBLE_EQ(m[2], 2.5);
  EXPECT_DOUBLE_EQ(m[5], 5.5);
  const auto cum = moving_mean(x, 10, 3);
  EXPECT_DOUBLE_EQ(cum[5], 3.5);
  EXPECT_THROW(moving_mean(std::vector<double>{}, 1, 1), std::invalid_argument);
  EXPECT_THROW(moving_mean(x, 1, 0), std::invalid_argument);
}

TEST(Record, ZeroOracle) {
  const BenchmarkRecord r = make_record(3, 10.0, 0.0, 0.0, 0.0);
  EXPECT_TRUE(r.oracle_zero);
  EXPECT_DOUBLE_EQ(r.perf_opti, 1.0);
  EXPECT_DOUBLE_EQ(r.perf_reinf, 1.0);
  const BenchmarkRecord s = make_record(3, 10.0, 0.2, 0.1, 0.15);
  EXPECT_DOUBLE_EQ(s.perf_opti, 0.5);
  EXPECT_DOUBLE_EQ(s.rel_reinf, 0.015);
}

TEST(Comparison, ScaleInvariance) {
  // Multiplying V and D by k scales every CR by k and leaves performances fixed.
  LognormalConfig cfg{{9.0, 1.0}, {{1.0, 1.0}, {2.0, 1.0}, {3.0, 1.0}}, 51};
  const auto base = gen_lognormal(cfg, 2000);
  auto scaled = base;
  for (auto& s : scaled) {
    s.volume *= 4.0;
    for (auto& d : s.deliverable) d *= 4.0;
  }
  const auto pools = pools_from_rebates(std::vector<double>{0.01, 0.03, 0.05});
  ComparisonOptions opt;
  opt.schedule = {1.0, 1.0, StepMode::kPredictable};
  const auto a = run_comparison(base, pools, opt);
  const auto b = run_comparison(scaled, pools, opt);
  for (std::size_t k = 0; k < base.size(); k += 97) {
    EXPECT_NEAR(b.records[k].cr_oracle, 4.0 * a.records[k].cr_oracle, 1e-12 * b.records[k].cr_oracle);
    EXPECT_NEAR(b.records[k].perf_opti, a.records[k].perf_opti, 1e-9);
    EXPECT_NEAR(b.records[k].perf_reinf, a.records[k].perf_reinf, 1e-12);
  }
}

TEST(Comparison, PerformanceIsBounded) {
  LognormalConfig cfg{{9.0, 1.0}, {{1.0, 1.0}, {2.0, 1.0}, {3.0, 1.0}}, 52};
  const auto stream = gen_lognormal(cfg, 3000);
  const auto pools = pools_from_rebates(std::vector<double>{0.01, 0.03, 0.05});
  ComparisonOptions opt;
  opt.reset_points = {1000, 2000};
  const auto res = run_comparison(stream, pools, opt);
  ASSERT_EQ(res.records.size(), stream.size());
  for (const auto& r : res.records) {
    EXPECT_LE(r.cr_opti, r.cr_oracle + 1e-12);
    EXPECT_LE(r.cr_reinf, r.cr_oracle + 1e-12);
    EXPECT_GE(r.perf_opti, 0.0);
  }
  EXPECT_TRUE(res.final_opti.in_simplex());
  const auto avg = average_performance(res.records, 1500, 3000);
  EXPECT_GT(avg.opti, 0.0);
  EXPECT_LE(avg.opti, 1.0);
}

TEST(BenchmarkCsv, Header) {
  std::ostringstream out;
  write_benchmark_csv(out, {make_record(1, 2.0, 0.5, 0.25, 0.5)});
  EXPECT_EQ(out.str(),
            "n,cr_oracle,cr_opti,cr_reinf,rel_opti,rel_reinf,perf_opti,perf_reinf\n"
            "1,0.5,0.25,0.5,0.125,0.25,0.5,1\n");
}
