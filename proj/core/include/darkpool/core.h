#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace darkpool {

/// Absolute tolerance on |sum(r) - 1| for membership in the hyperplane
/// {r : sum_i r_i = 1}.
inline constexpr double kHyperplaneTolerance = 1e-12;

/// Splitting proportions of one order across N pools.
///
/// Weights always sum to one (within kHyperplaneTolerance times 1 + sum |w_i|) but may leave
/// [0, 1]: the Lagrangian recursion lives on the whole hyperplane and only
/// a projected allocation can actually be dispatched.
class Allocation {
 public:
  Allocation() = default;

  /// Throws std::invalid_argument when the weights are empty, non-finite or
  /// do not sum to one.
  explicit Allocation(std::vector<double> weights);

  static Allocation uniform(std::size_t n);

  /// Shifts every weight by the same amount so that the sum drift produced by
  /// rounding is removed. The input must already be close to the hyperplane.
  static Allocation renormalized(std::vector<double> weights);

  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  std::span<const double> weights() const { return weights_; }
  const std::vector<double>& vector() const { return weights_; }

  /// True iff every weight lies in [0, 1].
  bool in_simplex() const;

  friend bool operator==(const Allocation&, const Allocation&) = default;

 private:
  std::vector<double> weights_;
};

/// One requested volume V and the quantities D_i each pool could deliver.
struct MarketSample {
  double volume = 0.0;
  std::vector<double> deliverable;

  std::size_t pools() const { return deliverable.size(); }
};

/// Throws std::invalid_argument unless V > 0 and every D_i >= 0.
void validate(const MarketSample& sample);

struct PoolSpec {
  double rebate = 0.0;  // rho_i > 0, fraction of the reference price
};

void validate(const PoolSpec& pool);

/// Clips each weight to [0, 1] and divides by the clipped sum. Idempotent on
/// the simplex.
Allocation simplex_project(const Allocation& r);

// Step schedules ------------------------------------------------------------

enum class StepMode {
  kRaw,          // gamma_n = c / n^beta
  kPredictable,  // gamma_n * (n - 1) / (V^1 + ... + V^{n-1})
};

struct StepSchedule {
  double c = 1.0;
  double beta = 1.0;
  StepMode mode = StepMode::kRaw;
};

void validate(const StepSchedule& schedule);

/// c / n^beta, independent of the mode.
double raw_gamma(const StepSchedule& schedule, std::size_t n);

/// Step for index n >= 1. `past_volumes` must hold at least V^1..V^{n-1} in
/// predictable mode (only the first n - 1 entries are read) and is ignored in
/// raw mode. Predictable mode returns the raw step at n = 1.
double gamma(const StepSchedule& schedule, std::size_t n,
             std::span<const double> past_volumes);

/// Same as gamma() with the cumulated volume V^1 + ... + V^{n-1} supplied
/// directly.
double gamma_from_volume_sum(const StepSchedule& schedule, std::size_t n,
                             double volume_sum);

/// Input regimes the step conditions are checked against.
struct InputRegime {
  bool ergodic = false;
  double alpha = 0.5;  // averaging rate, only read when ergodic

  static InputRegime iid() { return {}; }
  static InputRegime averaging(double alpha) { return {true, alpha}; }
};

struct ScheduleReport {
  bool valid = false;
  // sum gamma_n = infinity.
  bool sum_diverges = false;
  // IID: sum gamma_n^2 < infinity.
  bool square_summable = false;
  // Ergodic: gamma_n = o(n^{alpha - 1}).
  bool rate_dominated = false;
  // Ergodic: sum n^{1 - alpha} max(gamma_n^2, |gamma_n - gamma_{n+1}|) < inf.
  bool weighted_increments_summable = false;
  std::string note;
};

/// Symbolic check of the power form c / n^beta. IID: valid iff beta in
/// (1/2, 1]. Averaging at rate alpha: valid iff beta in (1 - alpha, 1]; the
/// individual conditions are reported separately because the third one only
/// holds for beta > 1 - alpha / 2.
ScheduleReport validate_schedule(const StepSchedule& schedule,
                                 const InputRegime& regime);

}  // namespace darkpool
