#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "darkpool/core.h"
#include "darkpool/execution_model.h"

namespace darkpool {

/// Insider benchmark: fills pools greedily in the given order. `rebates` must
/// be non-increasing (ties keep index order); throws std::invalid_argument
/// otherwise.
double oracle_cr(const MarketSample& sample, std::span<const double> rebates);

/// Same greedy fill after sorting pools by descending rebate ceiling, ties
/// broken by index. For a rebate curve the ceiling makes this an upper bound.
double oracle_cr(const MarketSample& sample, std::span<const PoolModel> pools);

/// sum_i rho_i(r_i V) min(r_i V, D_i). Throws when r leaves the simplex.
double algo_cr(const MarketSample& sample, const Allocation& r,
               std::span<const PoolModel> pools);

/// Cumulative mean over the first `warmup` points, trailing mean over
/// `window` points afterwards.
std::vector<double> moving_mean(std::span<const double> series, std::size_t warmup,
                                std::size_t window);

struct BenchmarkRecord {
  std::size_t n = 0;
  double volume = 0.0;
  double cr_oracle = 0.0;
  double cr_opti = 0.0;
  double cr_reinf = 0.0;
  double rel_opti = 0.0;    // cr / V
  double rel_reinf = 0.0;
  double perf_opti = 0.0;   // cr / cr_oracle, 1 when cr_oracle = 0
  double perf_reinf = 0.0;
  bool oracle_zero = false;
};

BenchmarkRecord make_record(std::size_t n, double volume, double cr_oracle,
                            double cr_opti, double cr_reinf);

/// Applies moving_mean to every numeric column; n and the flag are kept.
std::vector<BenchmarkRecord> smooth(const std::vector<BenchmarkRecord>& records,
                                    std::size_t warmup, std::size_t window);

/// `n,cr_oracle,cr_opti,cr_reinf,rel_opti,rel_reinf,perf_opti,perf_reinf`.
void write_benchmark_csv(std::ostream& out, const std::vector<BenchmarkRecord>& records);

struct ComparisonOptions {
  StepSchedule schedule;
  bool projection = false;
  /// Indices k where both algorithms restart before stream[k].
  std::vector<std::size_t> reset_points;
  /// Initial allocation of both procedures; uniform when empty.
  Allocation initial;
};

struct ComparisonResult {
  std::vector<BenchmarkRecord> records;
  Allocation final_opti;     // dispatched (projected) Lagrangian allocation
  Allocation final_reinf;
  std::vector<double> final_opti_state;  // raw hyperplane state
};

/// Runs the Lagrangian and the reinforcement procedure on the same stream.
/// Sample n is dispatched with the allocations obtained from samples
/// 1..n-1 and scored against the oracle.
ComparisonResult run_comparison(std::span<const MarketSample> stream,
                                std::span<const PoolModel> pools,
                                const ComparisonOptions& options);

/// Mean of perf_opti / perf_reinf over records [from, to).
struct PerformanceAverages {
  double opti = 0.0;
  double reinf = 0.0;
};

PerformanceAverages average_performance(const std::vector<BenchmarkRecord>& records,
                                        std::size_t from, std::size_t to);

}  // namespace darkpool
