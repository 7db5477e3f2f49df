#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "darkpool/core.h"
#include "darkpool/execution_model.h"

namespace darkpool {

/// Everything the investor observes after dispatching r V: the requested
/// volume and one feedback record per pool. This is the only input of the
/// Lagrangian update; raw deliverable quantities never reach it.
struct Observation {
  double volume = 0.0;
  std::vector<OrderFeedback> feedback;
};

/// Sends clamp(r_i, 0, 1) V to pool i. The events {D_i > 0} and {V <= D_i}
/// used by the out-of-simplex remainder are recorded as well.
Observation observe(const Allocation& r, const MarketSample& sample,
                    std::span<const PoolModel> pools);

struct LagrangianStepReport {
  /// Update direction; sums to zero.
  std::vector<double> direction;
  /// Mean-reverting remainder R_i (before the factor V); zero on the simplex.
  std::vector<double> remainder;
  std::vector<double> executed;
  std::vector<bool> filled;
};

/// H(r, V, D) with the remainder terms that pull r back towards the simplex.
LagrangianStepReport innovation_from(const Allocation& r,
                                     const Observation& observation,
                                     std::span<const PoolModel> pools);

LagrangianStepReport innovation(const Allocation& r, const MarketSample& sample,
                                std::span<const PoolModel> pools);

struct LagrangianState {
  Allocation r;
  std::size_t n = 0;
  StepSchedule schedule;
  bool projection = false;
  /// V^1 + ... + V^n since the last schedule reset (predictable step).
  double volume_sum = 0.0;

  static LagrangianState initial(Allocation r, StepSchedule schedule,
                                 bool projection = false);
};

struct LagrangianStep {
  LagrangianState state;
  LagrangianStepReport report;
};

/// r <- r + gamma_{n+1} H(r, sample); optional projection onto the simplex.
LagrangianStep step(const LagrangianState& state, const MarketSample& sample,
                    std::span<const PoolModel> pools);

/// Restarts the step counter and volume accumulator; the allocation is kept.
LagrangianState reset_schedule(const LagrangianState& state);

struct LagrangianRunOptions {
  bool projection = false;
  /// A reset point k restarts the schedule before the (k+1)-th sample, i.e.
  /// before stream[k]; k = 0 is a no-op.
  std::vector<std::size_t> reset_points;
  bool record_reports = false;
};

struct LagrangianTrajectory {
  /// allocations[0] is the initial allocation, allocations[k] the state after
  /// consuming stream[k - 1].
  std::vector<Allocation> allocations;
  std::vector<LagrangianStepReport> reports;
  /// Step actually used for stream[k].
  std::vector<double> steps;
};

LagrangianTrajectory run_lagrangian(const Allocation& initial,
                                    std::span<const MarketSample> stream,
                                    std::span<const PoolModel> pools,
                                    const StepSchedule& schedule,
                                    const LagrangianRunOptions& options = {});

/// Allocation-only fast path for long simulations: same arithmetic as
/// step(), no intermediate copies.
class LagrangianAllocator {
 public:
  LagrangianAllocator(Allocation initial, StepSchedule schedule,
                      std::vector<PoolModel> pools, bool projection = false);

  /// Allocation to dispatch for the next order (projected onto the simplex
  /// when the raw state has left it).
  Allocation dispatch() const;
  const std::vector<double>& state() const { return r_; }
  std::size_t steps_taken() const { return n_; }

  /// Consumes one sample and returns the step that was used.
  double update(const MarketSample& sample);
  void reset_schedule();

 private:
  std::vector<double> r_;
  std::vector<double> gain_;
  StepSchedule schedule_;
  std::vector<PoolModel> pools_;
  bool projection_;
  std::size_t n_ = 0;
  double volume_sum_ = 0.0;
};

}  // namespace darkpool
