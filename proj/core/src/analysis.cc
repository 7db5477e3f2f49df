#include "darkpool/analysis.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "darkpool/lagrangian.h"
#include "moments.h"

namespace darkpool {

std::string to_string(ConditionVerdict verdict) {
  switch (verdict) {
    case ConditionVerdict::kStrict: return "C_strict";
    case ConditionVerdict::kHolds: return "C";
    case ConditionVerdict::kFails: return "fail";
    case ConditionVerdict::kInconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

Estimate slope_estimate(const PoolModel& pool, std::span<const PoolDraw> draws,
                        double r, Side side) {
  if (pool.rebate_curve) return phi_rebate_curve_prime_mc(*pool.rebate_curve, draws, r);
  if (pool.delivery) return phi_delivery_prime_mc(*pool.delivery, pool.spec, draws, r);
  return phi_prime_mc(pool.spec, draws, r, side);
}

ConditionVerdict classify(double gap, double se) {
  if (se == 0.0) {
    if (gap > 0.0) return ConditionVerdict::kStrict;
    if (gap == 0.0) return ConditionVerdict::kHolds;
    return ConditionVerdict::kFails;
  }
  if (gap > 3.0 * se) return ConditionVerdict::kStrict;
  if (gap < -3.0 * se) return ConditionVerdict::kFails;
  return ConditionVerdict::kInconclusive;
}

ConditionReport assemble(const std::vector<Estimate>& at_zero,
                         const std::vector<Estimate>& at_edge) {
  ConditionReport report;
  report.argmin = static_cast<std::size_t>(
      std::min_element(at_zero.begin(), at_zero.end(),
                       [](const Estimate& a, const Estimate& b) { return a.value < b.value; }) -
      at_zero.begin());
  report.argmax = static_cast<std::size_t>(
      std::max_element(at_edge.begin(), at_edge.end(),
                       [](const Estimate& a, const Estimate& b) { return a.value < b.value; }) -
      at_edge.begin());
  report.min_slope_at_zero = at_zero[report.argmin];
  report.max_slope_at_edge = at_edge[report.argmax];
  report.gap = report.min_slope_at_zero.value - report.max_slope_at_edge.value;
  report.pooled_std_error = std::hypot(report.min_slope_at_zero.std_error,
                                       report.max_slope_at_edge.std_error);
  report.verdict = classify(report.gap, report.pooled_std_error);
  return report;
}

}  // namespace

ConditionReport check_condition_c(std::span<const PoolModel> pools,
                                  std::span<const MarketSample> samples) {
  const std::size_t n = pools.size();
  if (n < 2) throw std::invalid_argument("check_condition_c: needs N >= 2");
  if (samples.empty()) throw std::invalid_argument("check_condition_c: empty samples");
  const double edge = 1.0 / static_cast<double>(n - 1);
  std::vector<Estimate> at_zero, at_edge;
  for (std::size_t i = 0; i < n; ++i) {
    const auto draws = pool_draws(samples, i);
    at_zero.push_back(slope_estimate(pools[i], draws, 0.0, Side::kRight));
    at_edge.push_back(slope_estimate(pools[i], draws, edge, Side::kLeft));
  }
  return assemble(at_zero, at_edge);
}

ConditionReport check_condition_c(std::span<const MeanExecutionCurve> curves) {
  const std::size_t n = curves.size();
  if (n < 2) throw std::invalid_argument("check_condition_c: needs N >= 2");
  const double edge = 1.0 / static_cast<double>(n - 1);
  std::vector<Estimate> at_zero, at_edge;
  for (const auto& c : curves) {
    at_zero.push_back({c.dphi(0.0), 0.0, 0});
    at_edge.push_back({c.dphi(edge), 0.0, 0});
  }
  return assemble(at_zero, at_edge);
}

// Closed-form optimum ---------------------------------------------------------

std::vector<ExponentialPool> exponential_pools(double volume,
                                               std::span<const double> lambda,
                                               std::span<const double> rebate) {
  if (lambda.size() != rebate.size() || lambda.empty()) {
    throw std::invalid_argument("exponential_pools: lambda and rebate sizes differ");
  }
  if (!(volume > 0.0)) throw std::invalid_argument("exponential_pools: volume must be positive");
  std::vector<ExponentialPool> out;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (!(lambda[i] > 0.0) || !(rebate[i] > 0.0)) {
      throw std::invalid_argument("exponential_pools: lambda and rebate must be positive");
    }
    out.push_back({rebate[i], lambda[i], volume});
  }
  return out;
}

Allocation closed_form_optimum(double volume, std::span<const double> lambda,
                               std::span<const double> rebate) {
  exponential_pools(volume, lambda, rebate);  // validation
  // r_i = (log(rho_i v) + t) / (lambda_i v) is linear in the common level t.
  double inv_sum = 0.0, offset_sum = 0.0;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    const double scale = 1.0 / (lambda[i] * volume);
    inv_sum += scale;
    offset_sum += std::log(rebate[i] * volume) * scale;
  }
  const double level = (1.0 - offset_sum) / inv_sum;
  std::vector<double> r(lambda.size());
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    r[i] = (std::log(rebate[i] * volume) + level) / (lambda[i] * volume);
    if (r[i] < 0.0 || r[i] > 1.0) {
      throw std::domain_error(
          "closed_form_optimum: first-order solution leaves the simplex (no interior optimum)");
    }
  }
  return Allocation::renormalized(std::move(r));
}

// Mean field --------------------------------------------------------------------

VectorEstimate mean_field(const Allocation& r, std::span<const MarketSample> samples,
                          std::span<const PoolModel> pools) {
  if (samples.empty()) throw std::invalid_argument("mean_field: empty samples");
  std::vector<RunningMoments> moments(r.size());
  for (const MarketSample& s : samples) {
    const LagrangianStepReport h = innovation(r, s, pools);
    for (std::size_t i = 0; i < r.size(); ++i) moments[i].add(h.direction[i]);
  }
  VectorEstimate out;
  out.count = samples.size();
  for (const auto& m : moments) {
    out.value.push_back(m.mean());
    out.std_error.push_back(m.std_error());
  }
  return out;
}

// Spectra -------------------------------------------------------------------------

SpectralReport matrix_a(std::span<const double> a, double tolerance) {
  if (a.empty()) throw std::invalid_argument("matrix_a: empty input");
  for (double v : a) {
    if (!(v > 0.0)) throw std::invalid_argument("matrix_a: entries must be positive");
  }
  const auto n = static_cast<Eigen::Index>(a.size());
  SpectralReport out;
  out.matrix.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out.matrix(i, j) = -a[static_cast<std::size_t>(j)];
    }
    out.matrix(i, i) += static_cast<double>(n) * a[static_cast<std::size_t>(i)];
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(out.matrix);
  out.eigenvalues = solver.eigenvalues();
  const Eigen::MatrixXcd vectors = solver.eigenvectors();
  const double scale = std::max(1.0, out.eigenvalues.cwiseAbs().maxCoeff());

  out.min_nonzero_real = std::numeric_limits<double>::infinity();
  out.eigenvectors_in_hyperplane = true;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (std::abs(out.eigenvalues(k)) <= tolerance * scale) {
      ++out.kernel_dimension;
      continue;
    }
    out.min_nonzero_real = std::min(out.min_nonzero_real, out.eigenvalues(k).real());
    const Eigen::VectorXcd v = vectors.col(k);
    if (std::abs(v.sum()) > 1e-8 * std::max(1.0, v.norm())) {
      out.eigenvectors_in_hyperplane = false;
    }
  }
  const double min_a = *std::min_element(a.begin(), a.end());
  out.bound = static_cast<double>(n) * min_a;
  if (n == 1) out.min_nonzero_real = 0.0;
  out.bound_holds = n == 1 || out.min_nonzero_real >= out.bound - tolerance * std::max(1.0, out.bound);

  out.kernel_vector.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.kernel_vector(i) = 1.0 / a[static_cast<std::size_t>(i)];
  }
  out.kernel_vector.normalize();
  return out;
}

Eigen::MatrixXd hyperplane_basis(std::size_t n) {
  if (n < 2) throw std::invalid_argument("hyperplane_basis: needs N >= 2");
  const auto rows = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(rows, rows - 1);
  for (Eigen::Index k = 0; k < rows - 1; ++k) {
    const double m = static_cast<double>(k + 1);
    const double norm = std::sqrt(m * (m + 1.0));
    for (Eigen::Index i = 0; i <= k; ++i) q(i, k) = 1.0 / norm;
    q(k + 1, k) = -m / norm;
  }
  return q;
}

Eigen::MatrixXd restrict_to_hyperplane(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("restrict_to_hyperplane: square matrix required");
  const Eigen::MatrixXd q = hyperplane_basis(static_cast<std::size_t>(m.rows()));
  return q.transpose() * m * q;
}

Eigen::MatrixXd lagrangian_jacobian(std::span<const double> a) {
  return -matrix_a(a).matrix / static_cast<double>(a.size());
}

// CLT ------------------------------------------------------------------------------

Eigen::MatrixXd solve_continuous_lyapunov(const Eigen::MatrixXd& m,
                                          const Eigen::MatrixXd& q) {
  const Eigen::Index n = m.rows();
  if (m.cols() != n || q.rows() != n || q.cols() != n) {
    throw std::invalid_argument("solve_continuous_lyapunov: dimension mismatch");
  }
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd kron(n * n, n * n);
  // vec(M X) = (I kron M) vec X and vec(X M^T) = (M kron I) vec X (column-major).
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      kron.block(i * n, j * n, n, n) = id(i, j) * m + m(i, j) * id;
    }
  }
  const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(q.data(), n * n);
  const Eigen::VectorXd sol = kron.fullPivLu().solve(rhs);
  Eigen::MatrixXd x = Eigen::Map<const Eigen::MatrixXd>(sol.data(), n, n);
  return 0.5 * (x + x.transpose());
}

namespace {

double smallest_real_part(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
  return solver.eigenvalues().real().minCoeff();
}

}  // namespace

Eigen::MatrixXd clt_covariance(const Eigen::MatrixXd& a_inf,
                               const Eigen::MatrixXd& c_inf, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("clt_covariance: step constant must be positive");
  if (a_inf.rows() != a_inf.cols() || c_inf.rows() != a_inf.rows() ||
      c_inf.cols() != a_inf.cols()) {
    throw std::invalid_argument("clt_covariance: dimension mismatch");
  }
  const double lambda_min = smallest_real_part(a_inf);
  if (!(lambda_min > 1.0 / (2.0 * c))) {
    std::ostringstream msg;
    msg << "clt_covariance: step constant c = " << c << " must exceed c_min = "
        << (lambda_min > 0.0 ? 1.0 / (2.0 * lambda_min) : std::numeric_limits<double>::infinity());
    throw std::domain_error(msg.str());
  }
  const Eigen::Index n = a_inf.rows();
  const Eigen::MatrixXd m = -a_inf + Eigen::MatrixXd::Identity(n, n) / (2.0 * c);
  return solve_continuous_lyapunov(m, c_inf);
}

CltAnalysis analyze_clt(std::span<const double> a, const Eigen::MatrixXd& c_inf,
                        double c) {
  CltAnalysis out;
  out.a.assign(a.begin(), a.end());
  out.A = matrix_a(a).matrix;
  out.A_inf = restrict_to_hyperplane(out.A) / static_cast<double>(a.size());
  out.C_inf = c_inf;
  out.lambda_min_real = smallest_real_part(out.A_inf);
  out.c_min = 1.0 / (2.0 * out.lambda_min_real);
  out.step_constant = c;
  out.Sigma_inf = clt_covariance(out.A_inf, c_inf, c);
  const Eigen::Index n = out.A_inf.rows();
  const Eigen::MatrixXd m = -out.A_inf + Eigen::MatrixXd::Identity(n, n) / (2.0 * c);
  out.residual = (m * out.Sigma_inf + out.Sigma_inf * m.transpose() + c_inf).norm();
  return out;
}

Eigen::MatrixXd noise_covariance_mc(const Allocation& r,
                                    std::span<const MarketSample> samples,
                                    std::span<const PoolModel> pools) {
  if (samples.empty()) throw std::invalid_argument("noise_covariance_mc: empty samples");
  const auto n = static_cast<Eigen::Index>(r.size());
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd h(n);
  for (const MarketSample& s : samples) {
    const LagrangianStepReport rep = innovation(r, s, pools);
    for (Eigen::Index i = 0; i < n; ++i) h(i) = rep.direction[static_cast<std::size_t>(i)];
    second.noalias() += h * h.transpose();
  }
  second /= static_cast<double>(samples.size());
  return restrict_to_hyperplane(second);
}

std::vector<double> curvature_closed_form(std::span<const ExponentialPool> pools,
                                          const Allocation& r) {
  if (pools.size() != r.size()) throw std::invalid_argument("curvature_closed_form: size mismatch");
  std::vector<double> a(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) a[i] = -pools[i].d2phi(r[i]);
  return a;
}

CurvatureEstimate curvature_finite_difference(std::span<const PoolModel> pools,
                                              std::span<const MarketSample> samples,
                                              const Allocation& r, double bandwidth) {
  if (samples.empty()) throw std::invalid_argument("curvature_finite_difference: empty samples");
  if (!(bandwidth > 0.0)) throw std::invalid_argument("curvature_finite_difference: bandwidth must be positive");
  CurvatureEstimate out;
  out.bandwidth = bandwidth;
  for (std::size_t i = 0; i < r.size(); ++i) {
    RunningMoments m;
    const double rho = pools[i].nominal_rebate();
    const double lo = r[i] - bandwidth, hi = r[i] + bandwidth;
    for (const MarketSample& s : samples) {
      const double v = s.volume, d = s.deliverable[i];
      const double diff = (lo * v <= d ? 1.0 : 0.0) - (hi * v <= d ? 1.0 : 0.0);
      m.add(rho * v * diff / (2.0 * bandwidth));
    }
    out.a.push_back(m.mean());
    out.std_error.push_back(m.std_error());
  }
  return out;
}

// Averaging diagnostic ---------------------------------------------------------------

RateReport averaging_diagnostic(std::span<const MarketSample> stream,
                                std::span<const double> u_grid, std::size_t pool,
                                double alpha_hypothesis,
                                const std::function<double(double)>& expectation,
                                double tolerance) {
  if (stream.size() < 1000) {
    throw std::invalid_argument("averaging_diagnostic: stream must hold at least 1000 samples");
  }
  if (u_grid.empty()) throw std::invalid_argument("averaging_diagnostic: empty u grid");
  RateReport report;
  report.pool = pool;
  report.hypothesis = alpha_hypothesis;
  report.tolerance = tolerance;

  const std::size_t len = stream.size();
  const std::size_t n_max = expectation ? len : len / 10;
  std::vector<double> partial(len);
  for (double u : u_grid) {
    RateFit fit;
    fit.u = u;
    double running = 0.0;
    for (std::size_t k = 0; k < len; ++k) {
      const MarketSample& s = stream[k];
      if (pool >= s.pools()) throw std::out_of_range("averaging_diagnostic: pool index");
      running += u * s.volume < s.deliverable[pool] ? s.volume : 0.0;
      partial[k] = running;
    }
    fit.expectation = expectation ? expectation(u) : running / static_cast<double>(len);

    std::vector<double> xs, ys;
    bool zero_block = false;
    for (std::size_t start = 8; start <= n_max; start *= 2) {
      const std::size_t stop = std::min(2 * start - 1, n_max);
      double worst = 0.0;
      for (std::size_t n = start; n <= stop; ++n) {
        worst = std::max(worst,
                         std::abs(partial[n - 1] / static_cast<double>(n) - fit.expectation));
      }
      if (worst == 0.0) zero_block = true;
      xs.push_back(0.5 * (std::log(static_cast<double>(start)) +
                          std::log(static_cast<double>(stop))));
      ys.push_back(worst > 0.0 ? std::log(worst) : 0.0);
    }
    fit.points = xs.size();
    const double y_spread =
        ys.empty() ? 0.0 : *std::max_element(ys.begin(), ys.end()) - *std::min_element(ys.begin(), ys.end());
    if (zero_block || xs.size() < 3 || y_spread == 0.0) {
      fit.degenerate = true;
    } else {
      double mx = 0.0, my = 0.0;
      for (std::size_t k = 0; k < xs.size(); ++k) {
        mx += xs[k];
        my += ys[k];
      }
      mx /= static_cast<double>(xs.size());
      my /= static_cast<double>(xs.size());
      double sxy = 0.0, sxx = 0.0;
      for (std::size_t k = 0; k < xs.size(); ++k) {
        sxy += (xs[k] - mx) * (ys[k] - my);
        sxx += (xs[k] - mx) * (xs[k] - mx);
      }
      fit.rate = -sxy / sxx;
    }
    report.fits.push_back(fit);
  }

  std::size_t used = 0;
  for (const RateFit& f : report.fits) {
    if (f.degenerate) continue;
    report.mean_rate += f.rate;
    ++used;
  }
  report.degenerate = used == 0;
  if (used > 0) report.mean_rate /= static_cast<double>(used);
  report.compatible =
      !report.degenerate && std::abs(report.mean_rate - alpha_hypothesis) <= tolerance;
  return report;
}

}  // namespace darkpool
