#include "darkpool/execution_model.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "moments.h"

namespace darkpool {

namespace {

void require_draws(std::span<const PoolDraw> draws, const char* who) {
  if (draws.empty()) {
    throw std::invalid_argument(std::string(who) + ": empty sample set");
  }
}

template <typename F>
Estimate estimate_mean(std::span<const PoolDraw> draws, F&& per_draw) {
  RunningMoments moments;
  for (const PoolDraw& d : draws) moments.add(per_draw(d));
  return {moments.mean(), moments.std_error(), moments.count()};
}

}  // namespace

std::vector<PoolDraw> pool_draws(std::span<const MarketSample> samples,
                                 std::size_t pool) {
  std::vector<PoolDraw> out;
  out.reserve(samples.size());
  for (const MarketSample& s : samples) {
    if (pool >= s.pools()) {
      throw std::out_of_range("pool_draws: pool index out of range");
    }
    out.push_back({s.volume, s.deliverable[pool]});
  }
  return out;
}

// RebateCurve ---------------------------------------------------------------

RebateCurve RebateCurve::constant(double rho) {
  if (!(rho >= 0.0)) throw std::invalid_argument("RebateCurve: negative rebate");
  return RebateCurve(Constant{rho});
}

RebateCurve RebateCurve::power_of_g(double lambda, double theta, double scale) {
  if (!(lambda > 0.0)) throw std::invalid_argument("RebateCurve: lambda must be positive");
  if (!(theta > 0.0 && theta <= lambda)) {
    throw std::invalid_argument("RebateCurve: theta must lie in (0, lambda]");
  }
  if (!(scale > 0.0)) throw std::invalid_argument("RebateCurve: scale must be positive");
  return RebateCurve(PowerOfG{lambda, theta, scale});
}

RebateCurve RebateCurve::stepwise(std::vector<double> breakpoints,
                                  std::vector<double> values) {
  if (breakpoints.empty() || breakpoints.size() != values.size()) {
    throw std::invalid_argument("RebateCurve: breakpoints and values must match");
  }
  if (breakpoints.front() != 0.0) {
    throw std::invalid_argument("RebateCurve: first breakpoint must be 0");
  }
  for (std::size_t k = 1; k < breakpoints.size(); ++k) {
    if (!(breakpoints[k] > breakpoints[k - 1])) {
      throw std::invalid_argument("RebateCurve: breakpoints must increase");
    }
    if (values[k] < values[k - 1]) {
      throw std::invalid_argument("RebateCurve: stepwise values must not decrease");
    }
  }
  if (values.front() < 0.0) throw std::invalid_argument("RebateCurve: negative rebate");
  return RebateCurve(Stepwise{std::move(breakpoints), std::move(values)});
}

double RebateCurve::value(double q) const {
  return std::visit(
      [q](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return f.rho;
        } else if constexpr (std::is_same_v<T, PowerOfG>) {
          return f.scale * std::pow(exponential_g(std::max(q, 0.0), f.lambda), f.theta);
        } else {
          auto it = std::upper_bound(f.breakpoints.begin(), f.breakpoints.end(), q);
          if (it == f.breakpoints.begin()) return f.values.front();
          return f.values[static_cast<std::size_t>(it - f.breakpoints.begin()) - 1];
        }
      },
      form_);
}

double RebateCurve::right_slope(double q) const {
  return std::visit(
      [q](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PowerOfG>) {
          const double u = std::max(q, 0.0);
          const double g = exponential_g(u, f.lambda);
          const double dg = std::exp(-f.lambda * u);
          if (f.theta == 1.0) return f.scale * dg;
          if (g == 0.0) return std::numeric_limits<double>::infinity();
          return f.scale * f.theta * std::pow(g, f.theta - 1.0) * dg;
        } else {
          return 0.0;
        }
      },
      form_);
}

double RebateCurve::ceiling() const {
  return std::visit(
      [](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return f.rho;
        } else if constexpr (std::is_same_v<T, PowerOfG>) {
          return f.scale * std::pow(1.0 / f.lambda, f.theta);
        } else {
          return f.values.back();
        }
      },
      form_);
}

// PoolModel -----------------------------------------------------------------

double PoolModel::rebate_at(double quantity) const {
  return rebate_curve ? rebate_curve->value(quantity) : spec.rebate;
}

double PoolModel::rebate_slope_at(double quantity) const {
  return rebate_curve ? rebate_curve->right_slope(quantity) : 0.0;
}

double PoolModel::rebate_ceiling() const {
  return rebate_curve ? rebate_curve->ceiling() : spec.rebate;
}

double PoolModel::delivered(double sent, double deliverable) const {
  return delivery ? delivery->delivered(sent, deliverable) : deliverable;
}

std::vector<PoolModel> pools_from_rebates(std::span<const double> rebates) {
  std::vector<PoolModel> pools;
  pools.reserve(rebates.size());
  for (double rho : rebates) {
    PoolSpec spec{rho};
    validate(spec);
    pools.emplace_back(spec);
  }
  return pools;
}

OrderFeedback respond(const PoolModel& pool, double volume, double sent,
                      double deliverable) {
  OrderFeedback fb;
  fb.sent = sent;
  const double available = pool.delivered(sent, deliverable);
  fb.executed = std::min(sent, available);
  fb.filled = sent <= available;
  fb.has_liquidity = deliverable > 0.0;
  fb.covers_volume = volume <= deliverable;
  return fb;
}

double realized_rebate(const PoolModel& pool, const OrderFeedback& feedback) {
  return pool.rebate_at(feedback.sent) * feedback.executed;
}

double marginal_gain(const PoolModel& pool, const OrderFeedback& feedback) {
  double gain = feedback.filled ? pool.rebate_at(feedback.sent) : 0.0;
  if (pool.rebate_curve && feedback.executed != 0.0) {
    gain += pool.rebate_slope_at(feedback.sent) * feedback.executed;
  }
  return gain;
}

// Monte Carlo estimators ----------------------------------------------------

Estimate phi_mc(const PoolSpec& pool, std::span<const PoolDraw> draws, double r) {
  require_draws(draws, "phi_mc");
  const double rho = pool.rebate;
  return estimate_mean(draws, [rho, r](const PoolDraw& d) {
    return rho * std::min(r * d.volume, d.deliverable);
  });
}

Estimate phi_prime_mc(const PoolSpec& pool, std::span<const PoolDraw> draws,
                      double r, Side side) {
  require_draws(draws, "phi_prime_mc");
  const double rho = pool.rebate;
  if (side == Side::kLeft && r > 0.0) {
    return estimate_mean(draws, [rho, r](const PoolDraw& d) {
      return r * d.volume <= d.deliverable ? rho * d.volume : 0.0;
    });
  }
  return estimate_mean(draws, [rho, r](const PoolDraw& d) {
    return r * d.volume < d.deliverable ? rho * d.volume : 0.0;
  });
}

double phi_extended(double phi1, double dphi0, double dphi1,
                    const std::function<double(double)>& base, double r) {
  if (r < 0.0) return (r - 0.5 * r * r) * dphi0;
  if (r > 1.0) return phi1 + dphi1 * std::log(r);
  if (r == 1.0) return phi1;
  return base(r);
}

double phi_prime_extended(double dphi0, double dphi1,
                          const std::function<double(double)>& base_derivative,
                          double r) {
  if (r < 0.0) return (1.0 - r) * dphi0;
  if (r > 1.0) return dphi1 / r;
  return base_derivative(r);
}

double psi(const std::function<double(double)>& phi, double u, double dphi0) {
  if (u < 0.0) throw std::invalid_argument("psi: u must be non-negative");
  if (u == 0.0) return dphi0;
  return phi(u) / u;
}

Estimate phi_rebate_curve_mc(const RebateCurve& curve,
                             std::span<const PoolDraw> draws, double r) {
  require_draws(draws, "phi_rebate_curve_mc");
  return estimate_mean(draws, [&curve, r](const PoolDraw& d) {
    const double sent = r * d.volume;
    return curve.value(sent) * std::min(sent, d.deliverable);
  });
}

Estimate phi_rebate_curve_prime_mc(const RebateCurve& curve,
                                   std::span<const PoolDraw> draws, double r) {
  require_draws(draws, "phi_rebate_curve_prime_mc");
  return estimate_mean(draws, [&curve, r](const PoolDraw& d) {
    const double sent = r * d.volume;
    const double executed = std::min(sent, d.deliverable);
    double out = sent < d.deliverable ? curve.value(sent) * d.volume : 0.0;
    if (executed != 0.0) out += curve.right_slope(sent) * d.volume * executed;
    return out;
  });
}

Estimate phi_delivery_mc(const ThresholdDelivery& delivery, const PoolSpec& pool,
                         std::span<const PoolDraw> draws, double r) {
  require_draws(draws, "phi_delivery_mc");
  const double rho = pool.rebate;
  return estimate_mean(draws, [&delivery, rho, r](const PoolDraw& d) {
    const double sent = r * d.volume;
    return rho * std::min(sent, delivery.delivered(sent, d.deliverable));
  });
}

Estimate phi_delivery_prime_mc(const ThresholdDelivery& delivery,
                               const PoolSpec& pool,
                               std::span<const PoolDraw> draws, double r) {
  require_draws(draws, "phi_delivery_prime_mc");
  const double rho = pool.rebate;
  return estimate_mean(draws, [&delivery, rho, r](const PoolDraw& d) {
    const double sent = r * d.volume;
    return sent < delivery.delivered(sent, d.deliverable) ? rho * d.volume : 0.0;
  });
}

// Closed forms --------------------------------------------------------------

double exponential_g(double u, double lambda) {
  return -std::expm1(-lambda * u) / lambda;
}

double ExponentialPool::phi(double r) const {
  return rebate * exponential_g(r * volume, lambda);
}

double ExponentialPool::dphi(double r) const {
  return rebate * volume * std::exp(-lambda * r * volume);
}

double ExponentialPool::d2phi(double r) const {
  return -rebate * lambda * volume * volume * std::exp(-lambda * r * volume);
}

double ExponentialPool::psi(double u) const {
  if (u == 0.0) return dphi(0.0);
  return phi(u) / u;
}

double MeanExecutionCurve::psi(double u) const {
  return darkpool::psi(phi, u, dphi0());
}

MeanExecutionCurve MeanExecutionCurve::exponential(const ExponentialPool& pool) {
  return {[pool](double r) { return pool.phi(r); },
          [pool](double r) { return pool.dphi(r); }};
}

MeanExecutionCurve MeanExecutionCurve::empirical(const PoolSpec& pool,
                                                 std::vector<PoolDraw> draws) {
  require_draws(draws, "MeanExecutionCurve::empirical");
  auto shared = std::make_shared<const std::vector<PoolDraw>>(std::move(draws));
  return {[pool, shared](double r) { return phi_mc(pool, *shared, r).value; },
          [pool, shared](double r) {
            return phi_prime_mc(pool, *shared, r, r > 0.0 ? Side::kLeft : Side::kRight)
                .value;
          }};
}

}  // namespace darkpool
