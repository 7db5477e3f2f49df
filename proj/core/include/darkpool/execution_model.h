#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "darkpool/core.h"

namespace darkpool {

/// Monte Carlo estimate: sample mean and standard error of the mean.
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t count = 0;
};

/// (V, D_i) restricted to one pool.
struct PoolDraw {
  double volume = 0.0;
  double deliverable = 0.0;
};

std::vector<PoolDraw> pool_draws(std::span<const MarketSample> samples,
                                 std::size_t pool);

/// Rebate as a function of the quantity sent to the pool.
class RebateCurve {
 public:
  /// rho(q) = rho.
  static RebateCurve constant(double rho);
  /// rho(q) = scale * g(q)^theta with g(q) = (1 - exp(-lambda q)) / lambda and
  /// theta in (0, lambda].
  static RebateCurve power_of_g(double lambda, double theta, double scale = 1.0);
  /// Right-continuous step function: values[k] on [breakpoints[k],
  /// breakpoints[k+1]). breakpoints[0] must be 0 and values non-decreasing.
  static RebateCurve stepwise(std::vector<double> breakpoints,
                              std::vector<double> values);

  double value(double quantity) const;
  double right_slope(double quantity) const;
  /// Supremum of the curve over [0, infinity).
  double ceiling() const;

 private:
  struct Constant {
    double rho;
  };
  struct PowerOfG {
    double lambda, theta, scale;
  };
  struct Stepwise {
    std::vector<double> breakpoints, values;
  };
  explicit RebateCurve(std::variant<Constant, PowerOfG, Stepwise> form)
      : form_(std::move(form)) {}

  std::variant<Constant, PowerOfG, Stepwise> form_;
};

/// Delivery psi(x, D) = D * 1{x > s D}: the pool only releases liquidity to
/// orders above a fraction s of what it holds.
struct ThresholdDelivery {
  double s = 0.0;

  double delivered(double sent, double deliverable) const {
    return sent > s * deliverable ? deliverable : 0.0;
  }
};

/// A pool together with its optional execution variants. The nominal rebate
/// of `spec` is what the out-of-simplex remainder terms and the oracle use
/// when no curve is attached.
struct PoolModel {
  PoolSpec spec;
  std::optional<RebateCurve> rebate_curve;
  std::optional<ThresholdDelivery> delivery;

  PoolModel() = default;
  PoolModel(PoolSpec s) : spec(s) {}  // NOLINT: implicit on purpose
  PoolModel(double rebate) : spec{rebate} {}  // NOLINT

  double nominal_rebate() const { return spec.rebate; }
  double rebate_at(double quantity) const;
  double rebate_slope_at(double quantity) const;
  /// Upper bound of the rebate over all quantities.
  double rebate_ceiling() const;
  double delivered(double sent, double deliverable) const;
};

std::vector<PoolModel> pools_from_rebates(std::span<const double> rebates);

/// What the investor learns about one child order: the executed quantity and
/// the events the Lagrangian update is allowed to read.
struct OrderFeedback {
  double sent = 0.0;
  double executed = 0.0;
  bool filled = false;          // sent <= delivered
  bool has_liquidity = false;   // D > 0
  bool covers_volume = false;   // V <= D
};

OrderFeedback respond(const PoolModel& pool, double volume, double sent,
                      double deliverable);

/// Rebated executed quantity rho(sent) * executed.
double realized_rebate(const PoolModel& pool, const OrderFeedback& feedback);

/// Per-order right-derivative estimator (divided by V) of the mean execution
/// function at the proportion that produced `feedback`:
/// rho'(sent) * executed + rho(sent) * 1{filled}.
double marginal_gain(const PoolModel& pool, const OrderFeedback& feedback);

enum class Side { kLeft, kRight };

/// Sample mean of rho * min(r V, D) over a fixed draw set.
Estimate phi_mc(const PoolSpec& pool, std::span<const PoolDraw> draws, double r);

/// Sample mean of rho * V * 1{r V <= D} (left) or rho * V * 1{r V < D}
/// (right). At r = 0 only the right form is meaningful.
Estimate phi_prime_mc(const PoolSpec& pool, std::span<const PoolDraw> draws,
                      double r, Side side);

/// Concave extension of a mean execution function to the real line:
/// (r - r^2/2) phi'(0) below 0, base(r) on [0, 1] and
/// phi(1) + phi'(1) log r above 1.
double phi_extended(double phi1, double dphi0, double dphi1,
                    const std::function<double(double)>& base, double r);

/// Derivative of phi_extended outside [0, 1]; base_derivative inside.
double phi_prime_extended(double dphi0, double dphi1,
                          const std::function<double(double)>& base_derivative,
                          double r);

/// psi(u) = phi(u) / u with psi(0) = phi'(0).
double psi(const std::function<double(double)>& phi, double u, double dphi0);

/// E(rho(rV) min(rV, D)).
Estimate phi_rebate_curve_mc(const RebateCurve& curve,
                             std::span<const PoolDraw> draws, double r);

/// Right derivative E(rho'_r(rV) V min(rV, D)) + E(rho(rV) V 1{rV < D}).
Estimate phi_rebate_curve_prime_mc(const RebateCurve& curve,
                                   std::span<const PoolDraw> draws, double r);

/// rho E(min(rV, D 1{rV > s D})).
Estimate phi_delivery_mc(const ThresholdDelivery& delivery,
                         const PoolSpec& pool, std::span<const PoolDraw> draws,
                         double r);

/// Right derivative rho E(V 1{rV < psi(rV, D)}); the delivery slope is zero
/// away from the jump and taken as zero on it.
Estimate phi_delivery_prime_mc(const ThresholdDelivery& delivery,
                               const PoolSpec& pool,
                               std::span<const PoolDraw> draws, double r);

/// g(u) = E(min(u, D)) = (1 - exp(-lambda u)) / lambda for D ~ Exp(lambda).
double exponential_g(double u, double lambda);

/// Closed forms for a constant volume v and D ~ Exp(lambda).
struct ExponentialPool {
  double rebate = 1.0;
  double lambda = 1.0;
  double volume = 1.0;

  double phi(double r) const;
  double dphi(double r) const;
  /// phi''(r) = -rebate * lambda * v^2 * exp(-lambda r v).
  double d2phi(double r) const;
  double psi(double u) const;
};

/// A mean execution function given as callables, the form the equilibrium
/// and Jacobian tools consume.
struct MeanExecutionCurve {
  std::function<double(double)> phi;
  std::function<double(double)> dphi;

  double dphi0() const { return dphi(0.0); }
  double psi(double u) const;

  static MeanExecutionCurve exponential(const ExponentialPool& pool);
  /// phi_mc / phi_prime_mc (right side) on a fixed draw set.
  static MeanExecutionCurve empirical(const PoolSpec& pool,
                                      std::vector<PoolDraw> draws);
};

}  // namespace darkpool
