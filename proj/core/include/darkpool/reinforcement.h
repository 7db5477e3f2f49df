#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "darkpool/core.h"
#include "darkpool/execution_model.h"

namespace darkpool {

/// Cumulative rebated executed volume per pool. The dispatched allocation is
/// I / sum(I) once something has been executed, and `fallback` before that
/// (uniform at start, the previous day's allocation after a daily reset).
struct ReinforcementState {
  std::vector<double> cumulative;
  std::size_t n = 0;
  Allocation fallback;

  static ReinforcementState initial(std::size_t pools);
  static ReinforcementState initial(Allocation start);

  Allocation allocation() const;
  /// X^n = I^n / n (zero vector before the first step).
  std::vector<double> index_average() const;
  double total() const;
};

/// I_i += rho_i(sent) min(r_i V, D_i) with r the current allocation.
ReinforcementState reinforce_step(const ReinforcementState& state,
                                  const MarketSample& sample,
                                  std::span<const PoolModel> pools);

/// Clears I and n but keeps the current allocation as the fallback.
ReinforcementState reset_profits(const ReinforcementState& state);

/// Bracket cap for psi^{-1}: beyond this proportion the tail is treated as
/// unreachable.
inline constexpr double kPsiInverseCap = 1e6;

/// u >= 0 with psi(u) = theta. Throws std::domain_error when theta exceeds
/// psi(0) = phi'(0) or when the bracket has to grow past kPsiInverseCap.
double psi_inverse(const MeanExecutionCurve& curve, double theta);

struct EquilibriumResult {
  double theta = 0.0;
  Allocation r;
  std::vector<double> x;
  /// sum_i psi_i^{-1}(min_i phi_i'(0)); < 1 guarantees an interior solution.
  double boundary_mass = 0.0;
  bool interior_guaranteed = false;
  double sum_residual = 0.0;         // |sum r - 1| before normalisation
  double level_residual = 0.0;       // max_i |psi_i(r_i) - theta| on the support
  double fixed_point_residual = 0.0; // max_i |phi_i(x_i / sum x) - x_i|
  /// Pools taking part (all of them unless enumerated on a subset).
  std::vector<std::size_t> support;
  std::string caveat;
};

/// Fixed point phi_i(x_i / sum_j x_j) = x_i with every pool active, found by
/// bisection on Theta(theta) = sum_i psi_i^{-1}(theta) = 1.
EquilibriumResult solve_equilibrium(std::span<const MeanExecutionCurve> curves);

/// Every equilibrium obtained by boycotting a subset of pools (at least
/// 2^N - 1 of them). Limited to N <= 10.
std::vector<EquilibriumResult> enumerate_equilibria(
    std::span<const MeanExecutionCurve> curves);

/// Jacobian of h(x) = (x_i - phi_i(x_i / sum x))_i.
Eigen::MatrixXd mean_field_jacobian(std::span<const double> x,
                                    std::span<const MeanExecutionCurve> curves);

std::vector<double> reinforcement_mean_field(
    std::span<const double> x, std::span<const MeanExecutionCurve> curves);

struct AttractivenessReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
  bool attractive = false;
  /// Eigenvalues of the Jacobian at x*, for cross-checking the criterion.
  Eigen::VectorXcd jacobian_eigenvalues;
  bool eigenvalues_positive = false;
};

AttractivenessReport attractiveness_check(
    const EquilibriumResult& equilibrium,
    std::span<const MeanExecutionCurve> curves);

}  // namespace darkpool
