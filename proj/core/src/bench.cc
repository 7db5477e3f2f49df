#include "darkpool/bench.h"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "darkpool/lagrangian.h"
#include "darkpool/reinforcement.h"

namespace darkpool {

namespace {

double greedy_fill(const MarketSample& sample, std::span<const std::size_t> order,
                   const std::vector<double>& rebate) {
  double left = sample.volume;
  double cr = 0.0;
  for (std::size_t i : order) {
    if (left <= 0.0) break;
    const double take = std::min(left, sample.deliverable[i]);
    cr += rebate[i] * take;
    left -= take;
  }
  return cr;
}

}  // namespace

double oracle_cr(const MarketSample& sample, std::span<const double> rebates) {
  if (rebates.size() != sample.pools()) throw std::invalid_argument("oracle_cr: pool count mismatch");
  for (std::size_t i = 1; i < rebates.size(); ++i) {
    if (rebates[i] > rebates[i - 1]) {
      throw std::invalid_argument("oracle_cr: rebates must be sorted in decreasing order");
    }
  }
  std::vector<std::size_t> order(rebates.size());
  std::iota(order.begin(), order.end(), 0);
  return greedy_fill(sample, order, std::vector<double>(rebates.begin(), rebates.end()));
}

double oracle_cr(const MarketSample& sample, std::span<const PoolModel> pools) {
  if (pools.size() != sample.pools()) throw std::invalid_argument("oracle_cr: pool count mismatch");
  std::vector<double> ceiling(pools.size());
  for (std::size_t i = 0; i < pools.size(); ++i) ceiling[i] = pools[i].rebate_ceiling();
  std::vector<std::size_t> order(pools.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return ceiling[a] > ceiling[b]; });
  return greedy_fill(sample, order, ceiling);
}

double algo_cr(const MarketSample& sample, const Allocation& r,
               std::span<const PoolModel> pools) {
  if (r.size() != sample.pools() || pools.size() != sample.pools()) {
    throw std::invalid_argument("algo_cr: pool count mismatch");
  }
  if (!r.in_simplex()) throw std::invalid_argument("algo_cr: allocation outside the simplex (project first)");
  double cr = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const OrderFeedback fb = respond(pools[i], sample.volume, r[i] * sample.volume,
                                     sample.deliverable[i]);
    cr += realized_rebate(pools[i], fb);
  }
  return cr;
}

std::vector<double> moving_mean(std::span<const double> series, std::size_t warmup,
                                std::size_t window) {
  if (series.empty()) throw std::invalid_argument("moving_mean: empty series");
  if (window == 0) throw std::invalid_argument("moving_mean: window must be >= 1");
  std::vector<double> out(series.size());
  // Prefix sums keep the trailing window exact enough and O(1) per point.
  std::vector<long double> prefix(series.size() + 1, 0.0L);
  for (std::size_t k = 0; k < series.size(); ++k) prefix[k + 1] = prefix[k] + series[k];
  for (std::size_t k = 0; k < series.size(); ++k) {
    const std::size_t n = k + 1;
    if (n <= warmup || n <= window) {
      const std::size_t len = n <= warmup ? n : std::min(n, window);
      out[k] = static_cast<double>((prefix[n] - prefix[n - len]) / static_cast<long double>(len));
    } else {
      out[k] = static_cast<double>((prefix[n] - prefix[n - window]) / static_cast<long double>(window));
    }
  }
  return out;
}

BenchmarkRecord make_record(std::size_t n, double volume, double cr_oracle,
                            double cr_opti, double cr_reinf) {
  BenchmarkRecord r;
  r.n = n;
  r.volume = volume;
  r.cr_oracle = cr_oracle;
  r.cr_opti = cr_opti;
  r.cr_reinf = cr_reinf;
  r.rel_opti = cr_opti / volume;
  r.rel_reinf = cr_reinf / volume;
  r.oracle_zero = !(cr_oracle > 0.0);
  r.perf_opti = r.oracle_zero ? 1.0 : cr_opti / cr_oracle;
  r.perf_reinf = r.oracle_zero ? 1.0 : cr_reinf / cr_oracle;
  return r;
}

std::vector<BenchmarkRecord> smooth(const std::vector<BenchmarkRecord>& records,
                                    std::size_t warmup, std::size_t window) {
  if (records.empty()) return {};
  std::vector<BenchmarkRecord> out = records;
  const auto apply = [&](double BenchmarkRecord::*field) {
    std::vector<double> col(records.size());
    for (std::size_t k = 0; k < records.size(); ++k) col[k] = records[k].*field;
    const std::vector<double> sm = moving_mean(col, warmup, window);
    for (std::size_t k = 0; k < records.size(); ++k) out[k].*field = sm[k];
  };
  for (auto field : {&BenchmarkRecord::volume, &BenchmarkRecord::cr_oracle,
                     &BenchmarkRecord::cr_opti, &BenchmarkRecord::cr_reinf,
                     &BenchmarkRecord::rel_opti, &BenchmarkRecord::rel_reinf,
                     &BenchmarkRecord::perf_opti, &BenchmarkRecord::perf_reinf}) {
    apply(field);
  }
  return out;
}

void write_benchmark_csv(std::ostream& out, const std::vector<BenchmarkRecord>& records) {
  out << "n,cr_oracle,cr_opti,cr_reinf,rel_opti,rel_reinf,perf_opti,perf_reinf\n";
  char buf[256];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.n,
                  r.cr_oracle, r.cr_opti, r.cr_reinf, r.rel_opti, r.rel_reinf, r.perf_opti,
                  r.perf_reinf);
    out << buf;
  }
}

ComparisonResult run_comparison(std::span<const MarketSample> stream,
                                std::span<const PoolModel> pools,
                                const ComparisonOptions& options) {
  if (stream.empty()) throw std::invalid_argument("run_comparison: empty stream");
  const std::size_t n_pools = pools.size();
  const Allocation start =
      options.initial.size() == 0 ? Allocation::uniform(n_pools) : options.initial;
  if (start.size() != n_pools) throw std::invalid_argument("run_comparison: initial allocation size");

  LagrangianAllocator opti(start, options.schedule,
                           std::vector<PoolModel>(pools.begin(), pools.end()), options.projection);
  ReinforcementState reinf = ReinforcementState::initial(start);

  std::vector<std::size_t> resets = options.reset_points;
  std::sort(resets.begin(), resets.end());
  auto next_reset = resets.begin();

  ComparisonResult out;
  out.records.reserve(stream.size());
  for (std::size_t k = 0; k < stream.size(); ++k) {
    while (next_reset != resets.end() && *next_reset < k) ++next_reset;
    if (next_reset != resets.end() && *next_reset == k && k > 0) {
      opti.reset_schedule();
      reinf = reset_profits(reinf);
    }
    const MarketSample& s = stream[k];
    if (s.pools() != n_pools) throw std::invalid_argument("run_comparison: sample pool count");
    const double cr_opti = algo_cr(s, opti.dispatch(), pools);
    const double cr_reinf = algo_cr(s, reinf.allocation(), pools);
    out.records.push_back(make_record(k + 1, s.volume, oracle_cr(s, pools), cr_opti, cr_reinf));
    opti.update(s);
    reinf = reinforce_step(reinf, s, pools);
  }
  out.final_opti = opti.dispatch();
  out.final_reinf = reinf.allocation();
  out.final_opti_state = opti.state();
  return out;
}

PerformanceAverages average_performance(const std::vector<BenchmarkRecord>& records,
                                        std::size_t from, std::size_t to) {
  to = std::min(to, records.size());
  if (from >= to) throw std::invalid_argument("average_performance: empty range");
  PerformanceAverages out;
  for (std::size_t k = from; k < to; ++k) {
    out.opti += records[k].perf_opti;
    out.reinf += records[k].perf_reinf;
  }
  out.opti /= static_cast<double>(to - from);
  out.reinf /= static_cast<double>(to - from);
  return out;
}

}  // namespace darkpool
