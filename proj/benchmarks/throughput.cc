#include <benchmark/benchmark.h>

#include <vector>

#include "darkpool/bench.h"
#include "darkpool/datagen.h"
#include "darkpool/lagrangian.h"
#include "darkpool/reinforcement.h"

namespace {

std::vector<darkpool::MarketSample> lognormal_stream(std::size_t n) {
  darkpool::LognormalConfig cfg;
  cfg.volume = {9.0, 1.0};
  cfg.deliverable = {{1.0, 1.0}, {2.0, 1.0}, {3.0, 1.0}};
  cfg.seed = 1;
  return darkpool::gen_lognormal(cfg, n);
}

const std::vector<double> kRebates = {0.01, 0.03, 0.05};

void BM_LagrangianUpdate(benchmark::State& state) {
  const auto stream = lognormal_stream(4096);
  const auto pools = darkpool::pools_from_rebates(kRebates);
  darkpool::LagrangianAllocator alloc(darkpool::Allocation::uniform(3), {}, pools);
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(alloc.update(stream[k++ & 4095]));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_LagrangianUpdate);

void BM_ReinforcementStep(benchmark::State& state) {
  const auto stream = lognormal_stream(4096);
  const auto pools = darkpool::pools_from_rebates(kRebates);
  auto s = darkpool::ReinforcementState::initial(3);
  std::size_t k = 0;
  for (auto _ : state) {
    s = darkpool::reinforce_step(s, stream[k++ & 4095], pools);
    benchmark::DoNotOptimize(s.cumulative.data());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ReinforcementStep);

void BM_Oracle(benchmark::State& state) {
  const auto stream = lognormal_stream(4096);
  const auto pools = darkpool::pools_from_rebates(kRebates);
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(darkpool::oracle_cr(stream[k++ & 4095], pools));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Oracle);

void BM_OuGenerate(benchmark::State& state) {
  darkpool::OuGeneratorConfig cfg;
  cfg.m = Eigen::VectorXd::Ones(4);
  cfg.A = Eigen::MatrixXd::Identity(4, 4) * 0.5;
  cfg.B = Eigen::MatrixXd::Identity(4, 4) * 0.3;
  darkpool::OuGenerator gen(cfg);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gen.next());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_OuGenerate);

void BM_Comparison(benchmark::State& state) {
  const auto stream = lognormal_stream(static_cast<std::size_t>(state.range(0)));
  const auto pools = darkpool::pools_from_rebates(kRebates);
  for (auto _ : state) {
    auto r = darkpool::run_comparison(stream, pools, {});
    benchmark::DoNotOptimize(r.records.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Comparison)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
