#include "darkpool/lagrangian.h"

#include <algorithm>
#include <stdexcept>

namespace darkpool {

namespace {

void check_sizes(std::size_t n_alloc, std::size_t n_sample, std::size_t n_pools) {
  if (n_alloc != n_sample || n_alloc != n_pools) {
    throw std::invalid_argument(
        "lagrangian: allocation, sample and pool counts differ");
  }
}

// In-simplex gain a_i (or zero outside [0, 1]).
double inside_gain(double r_i, const PoolModel& pool, const OrderFeedback& fb) {
  if (r_i < 0.0 || r_i > 1.0) return 0.0;
  return marginal_gain(pool, fb);
}

// Unnormalized remainder rho_i ((1 - r_i) 1{D_i > 0, r_i < 0} +
// (1 / r_i) 1{V <= D_i, r_i > 1}).
double edge_gain(double r_i, const PoolModel& pool, const OrderFeedback& fb) {
  if (r_i < 0.0) return fb.has_liquidity ? pool.nominal_rebate() * (1.0 - r_i) : 0.0;
  if (r_i > 1.0) return fb.covers_volume ? pool.nominal_rebate() / r_i : 0.0;
  return 0.0;
}

double mean_of(const std::vector<double>& v) {
  double total = 0.0;
  for (double x : v) total += x;
  return total / static_cast<double>(v.size());
}

}  // namespace

Observation observe(const Allocation& r, const MarketSample& sample,
                    std::span<const PoolModel> pools) {
  check_sizes(r.size(), sample.pools(), pools.size());
  Observation obs;
  obs.volume = sample.volume;
  obs.feedback.reserve(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double sent = std::clamp(r[i], 0.0, 1.0) * sample.volume;
    obs.feedback.push_back(
        respond(pools[i], sample.volume, sent, sample.deliverable[i]));
  }
  return obs;
}

LagrangianStepReport innovation_from(const Allocation& r,
                                     const Observation& observation,
                                     std::span<const PoolModel> pools) {
  check_sizes(r.size(), observation.feedback.size(), pools.size());
  const std::size_t n = r.size();
  std::vector<double> inside(n), edge(n), total(n);
  LagrangianStepReport report;
  report.executed.resize(n);
  report.filled.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const OrderFeedback& fb = observation.feedback[i];
    inside[i] = inside_gain(r[i], pools[i], fb);
    edge[i] = edge_gain(r[i], pools[i], fb);
    total[i] = inside[i] + edge[i];
    report.executed[i] = fb.executed;
    report.filled[i] = fb.filled;
  }
  const double mean_total = mean_of(total);
  const double mean_edge = mean_of(edge);
  report.direction.resize(n);
  report.remainder.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    report.direction[i] = observation.volume * (total[i] - mean_total);
    report.remainder[i] = edge[i] - mean_edge;
  }
  return report;
}

LagrangianStepReport innovation(const Allocation& r, const MarketSample& sample,
                                std::span<const PoolModel> pools) {
  return innovation_from(r, observe(r, sample, pools), pools);
}

LagrangianState LagrangianState::initial(Allocation r, StepSchedule schedule,
                                         bool projection) {
  validate(schedule);
  LagrangianState state;
  state.r = std::move(r);
  state.schedule = schedule;
  state.projection = projection;
  return state;
}

LagrangianStep step(const LagrangianState& state, const MarketSample& sample,
                    std::span<const PoolModel> pools) {
  LagrangianStep out{state, innovation(state.r, sample, pools)};
  const double g = gamma_from_volume_sum(state.schedule, state.n + 1, state.volume_sum);
  std::vector<double> next = state.r.vector();
  for (std::size_t i = 0; i < next.size(); ++i) next[i] += g * out.report.direction[i];
  out.state.r = Allocation::renormalized(std::move(next));
  if (state.projection && !out.state.r.in_simplex()) {
    out.state.r = simplex_project(out.state.r);
  }
  out.state.n = state.n + 1;
  out.state.volume_sum = state.volume_sum + sample.volume;
  return out;
}

LagrangianState reset_schedule(const LagrangianState& state) {
  LagrangianState out = state;
  out.n = 0;
  out.volume_sum = 0.0;
  return out;
}

LagrangianTrajectory run_lagrangian(const Allocation& initial,
                                    std::span<const MarketSample> stream,
                                    std::span<const PoolModel> pools,
                                    const StepSchedule& schedule,
                                    const LagrangianRunOptions& options) {
  if (stream.empty()) throw std::invalid_argument("run_lagrangian: empty stream");
  std::vector<std::size_t> resets = options.reset_points;
  std::sort(resets.begin(), resets.end());
  auto next_reset = resets.begin();

  LagrangianTrajectory out;
  out.allocations.reserve(stream.size() + 1);
  out.steps.reserve(stream.size());
  if (options.record_reports) out.reports.reserve(stream.size());

  LagrangianState state = LagrangianState::initial(initial, schedule, options.projection);
  out.allocations.push_back(state.r);
  for (std::size_t k = 0; k < stream.size(); ++k) {
    while (next_reset != resets.end() && *next_reset <= k) {
      if (*next_reset == k && k > 0) state = reset_schedule(state);
      ++next_reset;
    }
    out.steps.push_back(
        gamma_from_volume_sum(state.schedule, state.n + 1, state.volume_sum));
    LagrangianStep s = step(state, stream[k], pools);
    state = std::move(s.state);
    out.allocations.push_back(state.r);
    if (options.record_reports) out.reports.push_back(std::move(s.report));
  }
  return out;
}

// LagrangianAllocator -------------------------------------------------------

LagrangianAllocator::LagrangianAllocator(Allocation initial, StepSchedule schedule,
                                         std::vector<PoolModel> pools, bool projection)
    : r_(initial.vector()),
      gain_(r_.size()),
      schedule_(schedule),
      pools_(std::move(pools)),
      projection_(projection) {
  validate(schedule_);
  if (pools_.size() != r_.size()) {
    throw std::invalid_argument("LagrangianAllocator: pool count mismatch");
  }
}

Allocation LagrangianAllocator::dispatch() const {
  Allocation current = Allocation::renormalized(r_);
  return current.in_simplex() ? current : simplex_project(current);
}

double LagrangianAllocator::update(const MarketSample& sample) {
  if (sample.pools() != r_.size()) {
    throw std::invalid_argument("LagrangianAllocator: sample has wrong pool count");
  }
  const std::size_t n = r_.size();
  const double volume = sample.volume;
  double mean_gain = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sent = std::clamp(r_[i], 0.0, 1.0) * volume;
    const OrderFeedback fb = respond(pools_[i], volume, sent, sample.deliverable[i]);
    gain_[i] = inside_gain(r_[i], pools_[i], fb) + edge_gain(r_[i], pools_[i], fb);
    mean_gain += gain_[i];
  }
  mean_gain /= static_cast<double>(n);
  const double g = gamma_from_volume_sum(schedule_, n_ + 1, volume_sum_);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    r_[i] += g * (volume * (gain_[i] - mean_gain));
    total += r_[i];
  }
  const double shift = (1.0 - total) / static_cast<double>(n);
  for (double& w : r_) w += shift;
  if (projection_) {
    bool inside = std::all_of(r_.begin(), r_.end(),
                              [](double w) { return w >= 0.0 && w <= 1.0; });
    if (!inside) r_ = simplex_project(Allocation::renormalized(r_)).vector();
  }
  ++n_;
  volume_sum_ += volume;
  return g;
}

void LagrangianAllocator::reset_schedule() {
  n_ = 0;
  volume_sum_ = 0.0;
}

}  // namespace darkpool
