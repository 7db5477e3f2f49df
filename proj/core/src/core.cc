#include "darkpool/core.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace darkpool {

namespace {

double sum_of(std::span<const double> values) {
  return std::accumulate(values.begin(), values.end(), 0.0);
}

}  // namespace

Allocation::Allocation(std::vector<double> weights)
    : weights_(std::move(weights)) {
  if (weights_.empty()) {
    throw std::invalid_argument("Allocation: at least one pool is required");
  }
  for (double w : weights_) {
    if (!std::isfinite(w)) {
      throw std::invalid_argument("Allocation: non-finite weight");
    }
  }
  const double total = sum_of(weights_);
  // Far from the simplex the sum itself carries rounding of order eps * sum |w|.
  double magnitude = 1.0;
  for (double w : weights_) magnitude += std::abs(w);
  if (std::abs(total - 1.0) > kHyperplaneTolerance * magnitude) {
    throw std::invalid_argument("Allocation: weights must sum to 1, got " +
                                std::to_string(total));
  }
}

Allocation Allocation::uniform(std::size_t n) {
  if (n == 0) {
    throw std::invalid_argument("Allocation::uniform: n must be positive");
  }
  return Allocation(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Allocation Allocation::renormalized(std::vector<double> weights) {
  if (weights.empty()) {
    throw std::invalid_argument("Allocation: at least one pool is required");
  }
  const double shift =
      (1.0 - sum_of(weights)) / static_cast<double>(weights.size());
  for (double& w : weights) w += shift;
  return Allocation(std::move(weights));
}

bool Allocation::in_simplex() const {
  return std::all_of(weights_.begin(), weights_.end(),
                     [](double w) { return w >= 0.0 && w <= 1.0; });
}

void validate(const MarketSample& sample) {
  if (!(sample.volume > 0.0) || !std::isfinite(sample.volume)) {
    throw std::invalid_argument("MarketSample: volume must be positive");
  }
  for (double d : sample.deliverable) {
    if (!(d >= 0.0) || !std::isfinite(d)) {
      throw std::invalid_argument(
          "MarketSample: deliverable quantities must be non-negative");
    }
  }
}

void validate(const PoolSpec& pool) {
  if (!(pool.rebate > 0.0) || !std::isfinite(pool.rebate)) {
    throw std::invalid_argument("PoolSpec: rebate must be positive");
  }
}

Allocation simplex_project(const Allocation& r) {
  // Points already on the simplex pass through bit for bit.
  if (r.in_simplex()) return r;
  std::vector<double> clipped(r.size());
  std::transform(r.weights().begin(), r.weights().end(), clipped.begin(),
                 [](double w) { return std::clamp(w, 0.0, 1.0); });
  const double total = sum_of(clipped);
  if (!(total > 0.0)) {
    throw std::domain_error("simplex_project: every weight clips to zero");
  }
  if (total == 1.0) return Allocation(std::move(clipped));
  for (double& w : clipped) w /= total;
  return Allocation(std::move(clipped));
}

void validate(const StepSchedule& schedule) {
  if (!(schedule.c > 0.0) || !std::isfinite(schedule.c)) {
    throw std::invalid_argument("StepSchedule: c must be positive");
  }
  if (!(schedule.beta > 0.0 && schedule.beta <= 1.0)) {
    throw std::invalid_argument("StepSchedule: beta must lie in (0, 1]");
  }
}

double raw_gamma(const StepSchedule& schedule, std::size_t n) {
  if (n == 0) throw std::invalid_argument("gamma: step index starts at 1");
  const double dn = static_cast<double>(n);
  if (schedule.beta == 1.0) return schedule.c / dn;
  return schedule.c / std::pow(dn, schedule.beta);
}

double gamma_from_volume_sum(const StepSchedule& schedule, std::size_t n,
                             double volume_sum) {
  const double base = raw_gamma(schedule, n);
  if (schedule.mode == StepMode::kRaw || n == 1) return base;
  if (!(volume_sum > 0.0)) {
    throw std::domain_error(
        "gamma: predictable step needs a positive cumulated volume");
  }
  return base * static_cast<double>(n - 1) / volume_sum;
}

double gamma(const StepSchedule& schedule, std::size_t n,
             std::span<const double> past_volumes) {
  if (schedule.mode == StepMode::kRaw || n <= 1) {
    return raw_gamma(schedule, n);
  }
  if (past_volumes.size() < n - 1) {
    throw std::invalid_argument("gamma: fewer than n - 1 past volumes");
  }
  return gamma_from_volume_sum(schedule, n, sum_of(past_volumes.first(n - 1)));
}

ScheduleReport validate_schedule(const StepSchedule& schedule,
                                 const InputRegime& regime) {
  ScheduleReport report;
  const double beta = schedule.beta;
  report.sum_diverges = beta > 0.0 && beta <= 1.0;
  if (!regime.ergodic) {
    report.square_summable = 2.0 * beta > 1.0;
    report.valid = report.sum_diverges && report.square_summable;
    return report;
  }
  const double alpha = regime.alpha;
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    report.note = "averaging rate alpha must lie in (0, 1]";
    return report;
  }
  report.square_summable = 2.0 * beta > 1.0;
  // c n^{-beta} = o(n^{alpha - 1})  <=>  beta > 1 - alpha.
  report.rate_dominated = beta > 1.0 - alpha;
  // For beta <= 1 the squared step dominates the increment |gamma_n -
  // gamma_{n+1}| ~ n^{-beta-1}, so the series behaves like
  // sum n^{1 - alpha - 2 beta}.
  report.weighted_increments_summable = 2.0 * beta + alpha > 2.0;
  report.valid = report.sum_diverges && report.rate_dominated;
  if (report.valid && !report.weighted_increments_summable) {
    report.note =
        "beta in (1 - alpha, 1 - alpha/2]: the weighted increment series "
        "diverges for the pure power form";
  }
  return report;
}

}  // namespace darkpool
