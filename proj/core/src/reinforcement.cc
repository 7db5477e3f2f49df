#include "darkpool/reinforcement.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace darkpool {

// State -----------------------------------------------------------------------

ReinforcementState ReinforcementState::initial(std::size_t pools) {
  return initial(Allocation::uniform(pools));
}

ReinforcementState ReinforcementState::initial(Allocation start) {
  ReinforcementState state;
  state.cumulative.assign(start.size(), 0.0);
  state.fallback = std::move(start);
  return state;
}

double ReinforcementState::total() const {
  double sum = 0.0;
  for (double v : cumulative) sum += v;
  return sum;
}

Allocation ReinforcementState::allocation() const {
  const double sum = total();
  if (!(sum > 0.0)) return fallback;
  std::vector<double> w(cumulative.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = cumulative[i] / sum;
  return Allocation(std::move(w));
}

std::vector<double> ReinforcementState::index_average() const {
  std::vector<double> x(cumulative.size(), 0.0);
  if (n == 0) return x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = cumulative[i] / static_cast<double>(n);
  }
  return x;
}

ReinforcementState reinforce_step(const ReinforcementState& state,
                                  const MarketSample& sample,
                                  std::span<const PoolModel> pools) {
  if (sample.pools() != state.cumulative.size() || pools.size() != sample.pools()) {
    throw std::invalid_argument("reinforce_step: pool count mismatch");
  }
  const Allocation r = state.allocation();
  ReinforcementState next = state;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const OrderFeedback fb =
        respond(pools[i], sample.volume, r[i] * sample.volume, sample.deliverable[i]);
    next.cumulative[i] += realized_rebate(pools[i], fb);
  }
  ++next.n;
  return next;
}

ReinforcementState reset_profits(const ReinforcementState& state) {
  return ReinforcementState::initial(state.allocation());
}

// Equilibria ------------------------------------------------------------------

double psi_inverse(const MeanExecutionCurve& curve, double theta) {
  const double psi0 = curve.dphi0();
  if (!(theta > 0.0)) throw std::domain_error("psi_inverse: level must be positive");
  if (theta > psi0) {
    throw std::domain_error("psi_inverse: level above psi(0) = phi'(0)");
  }
  if (theta == psi0) return 0.0;

  double lo = 0.0;
  double hi = 1.0;
  while (curve.psi(hi) > theta) {
    lo = hi;
    hi *= 2.0;
    if (hi > kPsiInverseCap) {
      throw std::domain_error("psi_inverse: bracket exceeded the cap (level too small)");
    }
  }
  for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (curve.psi(mid) > theta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

namespace {

// psi_i^{-1} extended by 0 above psi_i(0) (the pool is boycotted there) and by
// +infinity below the reachable range.
double extended_psi_inverse(const MeanExecutionCurve& curve, double theta) {
  if (theta >= curve.dphi0()) return 0.0;
  try {
    return psi_inverse(curve, theta);
  } catch (const std::domain_error&) {
    return std::numeric_limits<double>::infinity();
  }
}

double theta_sum(std::span<const MeanExecutionCurve> curves, double theta) {
  double total = 0.0;
  for (const auto& c : curves) total += extended_psi_inverse(c, theta);
  return total;
}

EquilibriumResult solve_on(std::span<const MeanExecutionCurve> curves) {
  if (curves.empty()) throw std::invalid_argument("solve_equilibrium: no pools");
  double min_dphi0 = std::numeric_limits<double>::infinity();
  double max_dphi0 = 0.0;
  for (const auto& c : curves) {
    const double d0 = c.dphi0();
    if (!(d0 > 0.0)) throw std::invalid_argument("solve_equilibrium: phi'(0) must be positive");
    min_dphi0 = std::min(min_dphi0, d0);
    max_dphi0 = std::max(max_dphi0, d0);
  }

  EquilibriumResult out;
  out.boundary_mass = theta_sum(curves, min_dphi0);
  out.interior_guaranteed = out.boundary_mass < 1.0;
  if (!out.interior_guaranteed) {
    out.caveat = "interior equilibrium not guaranteed";
  }

  // Theta is non-increasing, Theta(max phi'(0)) = 0 and Theta -> inf at 0.
  double hi = out.interior_guaranteed ? min_dphi0 : max_dphi0;
  double lo = 0.5 * min_dphi0;
  for (int it = 0; theta_sum(curves, lo) <= 1.0; ++it) {
    if (it > 200) throw std::runtime_error("solve_equilibrium: no lower bracket");
    hi = lo;
    lo *= 0.5;
  }
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (theta_sum(curves, mid) > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.theta = 0.5 * (lo + hi);

  std::vector<double> r(curves.size());
  double raw_sum = 0.0;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    r[i] = extended_psi_inverse(curves[i], out.theta);
    raw_sum += r[i];
  }
  out.sum_residual = std::abs(raw_sum - 1.0);
  // Identical levels give the exact uniform split rather than v / fl(N v).
  if (std::adjacent_find(r.begin(), r.end(), std::not_equal_to<>()) == r.end()) {
    std::fill(r.begin(), r.end(), 1.0 / static_cast<double>(r.size()));
  } else {
    for (double& v : r) v /= raw_sum;
  }
  out.r = Allocation(r);

  out.x.resize(curves.size());
  for (std::size_t i = 0; i < curves.size(); ++i) {
    out.x[i] = curves[i].phi(r[i]);
    // A boycotted pool only needs psi_i(0) <= theta.
    const double gap = r[i] > 0.0 ? std::abs(curves[i].psi(r[i]) - out.theta)
                                  : std::max(0.0, curves[i].dphi0() - out.theta);
    out.level_residual = std::max(out.level_residual, gap);
  }
  double x_bar = 0.0;
  for (double v : out.x) x_bar += v;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    out.fixed_point_residual = std::max(
        out.fixed_point_residual, std::abs(curves[i].phi(out.x[i] / x_bar) - out.x[i]));
  }
  out.support.resize(curves.size());
  for (std::size_t i = 0; i < curves.size(); ++i) out.support[i] = i;
  return out;
}

}  // namespace

EquilibriumResult solve_equilibrium(std::span<const MeanExecutionCurve> curves) {
  return solve_on(curves);
}

std::vector<EquilibriumResult> enumerate_equilibria(
    std::span<const MeanExecutionCurve> curves) {
  const std::size_t n = curves.size();
  if (n == 0 || n > 10) {
    throw std::invalid_argument("enumerate_equilibria: supports 1 <= N <= 10");
  }
  std::vector<EquilibriumResult> out;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<MeanExecutionCurve> subset;
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        subset.push_back(curves[i]);
        support.push_back(i);
      }
    }
    EquilibriumResult partial = solve_on(subset);
    std::vector<double> r(n, 0.0), x(n, 0.0);
    for (std::size_t k = 0; k < support.size(); ++k) {
      r[support[k]] = partial.r[k];
      x[support[k]] = partial.x[k];
    }
    partial.r = Allocation(std::move(r));
    partial.x = std::move(x);
    partial.support = std::move(support);
    out.push_back(std::move(partial));
  }
  return out;
}

// Mean field ------------------------------------------------------------------

namespace {

double checked_total(std::span<const double> x,
                     std::span<const MeanExecutionCurve> curves) {
  if (x.size() != curves.size()) {
    throw std::invalid_argument("mean field: x and curves differ in size");
  }
  double x_bar = 0.0;
  for (double v : x) x_bar += v;
  if (!(x_bar > 0.0)) throw std::domain_error("mean field: sum(x) must be positive");
  return x_bar;
}

}  // namespace

std::vector<double> reinforcement_mean_field(
    std::span<const double> x, std::span<const MeanExecutionCurve> curves) {
  const double x_bar = checked_total(x, curves);
  std::vector<double> h(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) h[i] = x[i] - curves[i].phi(x[i] / x_bar);
  return h;
}

Eigen::MatrixXd mean_field_jacobian(std::span<const double> x,
                                    std::span<const MeanExecutionCurve> curves) {
  const double x_bar = checked_total(x, curves);
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd jac(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const double slope = curves[ui].dphi(x[ui] / x_bar);
    for (Eigen::Index j = 0; j < n; ++j) {
      jac(i, j) = x[ui] / (x_bar * x_bar) * slope;
    }
    jac(i, i) += 1.0 - slope / x_bar;
  }
  return jac;
}

AttractivenessReport attractiveness_check(
    const EquilibriumResult& equilibrium,
    std::span<const MeanExecutionCurve> curves) {
  const std::vector<double>& x = equilibrium.x;
  const double x_bar = checked_total(x, curves);
  AttractivenessReport out;
  double max_slope = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double slope = curves[j].dphi(x[j] / x_bar);
    out.lhs += x[j] / (x_bar * x_bar) * slope;
    max_slope = std::max(max_slope, slope);
  }
  out.rhs = 1.0 - max_slope / x_bar;
  out.margin = out.rhs - out.lhs;
  out.attractive = out.margin > 0.0;

  Eigen::EigenSolver<Eigen::MatrixXd> solver(mean_field_jacobian(x, curves), false);
  out.jacobian_eigenvalues = solver.eigenvalues();
  out.eigenvalues_positive = (out.jacobian_eigenvalues.real().array() > 0.0).all();
  return out;
}

}  // namespace darkpool
