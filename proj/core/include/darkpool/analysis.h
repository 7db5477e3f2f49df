#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "darkpool/core.h"
#include "darkpool/execution_model.h"

namespace darkpool {

// Condition on the derivatives at the simplex edges ----------------------------

enum class ConditionVerdict {
  kStrict,        // min phi_i'(0) > max phi_i'(1/(N-1)), separated by 3 s.e.
  kHolds,         // equality, only reachable with exact (zero-error) inputs
  kFails,
  kInconclusive,  // gap within 3 pooled standard errors
};

std::string to_string(ConditionVerdict verdict);

struct ConditionReport {
  Estimate min_slope_at_zero;      // min_i phi_i'(0)
  std::size_t argmin = 0;
  Estimate max_slope_at_edge;      // max_i phi_i'(1/(N-1))
  std::size_t argmax = 0;
  double gap = 0.0;
  double pooled_std_error = 0.0;
  ConditionVerdict verdict = ConditionVerdict::kInconclusive;
};

ConditionReport check_condition_c(std::span<const PoolModel> pools,
                                  std::span<const MarketSample> samples);

/// Exact version on closed-form curves (zero standard errors).
ConditionReport check_condition_c(std::span<const MeanExecutionCurve> curves);

// Closed-form optimum ------------------------------------------------------------

/// Optimal split for a constant volume v and D_i ~ Exp(lambda_i): solves
/// rho_i v exp(-lambda_i r_i v) = common level with sum r_i = 1. Throws
/// std::domain_error when the solution leaves [0, 1]^N.
Allocation closed_form_optimum(double volume, std::span<const double> lambda,
                               std::span<const double> rebate);

std::vector<ExponentialPool> exponential_pools(double volume,
                                               std::span<const double> lambda,
                                               std::span<const double> rebate);

// Mean field of the Lagrangian recursion ----------------------------------------

struct VectorEstimate {
  std::vector<double> value;
  std::vector<double> std_error;
  std::size_t count = 0;
};

/// Monte Carlo average of innovation(r, .) over the samples.
VectorEstimate mean_field(const Allocation& r, std::span<const MarketSample> samples,
                          std::span<const PoolModel> pools);

// Spectral facts -------------------------------------------------------------------

struct SpectralReport {
  Eigen::MatrixXd matrix;           // A_ij = -a_j + N a_i delta_ij
  Eigen::VectorXcd eigenvalues;
  std::size_t kernel_dimension = 0;
  Eigen::VectorXd kernel_vector;    // proportional to (1 / a_i)
  double min_nonzero_real = 0.0;
  double bound = 0.0;               // N * min_i a_i
  bool bound_holds = false;
  bool eigenvectors_in_hyperplane = false;
};

SpectralReport matrix_a(std::span<const double> a, double tolerance = 1e-9);

/// Orthonormal basis of the hyperplane {x : sum x = 0}, as an N x (N-1)
/// matrix. Column k (0-based) is (1, ..., 1, -(k+1), 0, ..., 0) /
/// sqrt((k+1)(k+2)) with k+1 leading ones.
Eigen::MatrixXd hyperplane_basis(std::size_t n);

/// Q^T M Q for the basis above.
Eigen::MatrixXd restrict_to_hyperplane(const Eigen::MatrixXd& m);

/// Dh(r*) = -(1/N) [-a_j + N a_i delta_ij].
Eigen::MatrixXd lagrangian_jacobian(std::span<const double> a);

// Central limit theorem ------------------------------------------------------------

struct CltAnalysis {
  std::vector<double> a;
  Eigen::MatrixXd A;          // matrix_a(a).matrix
  Eigen::MatrixXd A_inf;      // -Dh(r*) restricted to the hyperplane
  Eigen::MatrixXd C_inf;      // noise covariance in the hyperplane basis
  Eigen::MatrixXd Sigma_inf;  // asymptotic covariance of (r^n - r*)/sqrt(gamma_n)
  double lambda_min_real = 0.0;
  double c_min = 0.0;         // 1 / (2 Re lambda_min)
  double step_constant = 0.0;
  double residual = 0.0;      // ||M S + S M^T + C||_F
};

/// Solves M S + S M^T + C = 0 with M = -A_inf + Id/(2c). Throws
/// std::domain_error (naming c_min) when M is not Hurwitz.
Eigen::MatrixXd clt_covariance(const Eigen::MatrixXd& a_inf,
                               const Eigen::MatrixXd& c_inf, double c);

/// Solves M X + X M^T + Q = 0 by Kronecker vectorisation.
Eigen::MatrixXd solve_continuous_lyapunov(const Eigen::MatrixXd& m,
                                          const Eigen::MatrixXd& q);

CltAnalysis analyze_clt(std::span<const double> a, const Eigen::MatrixXd& c_inf,
                        double c);

/// Uncentred second moment E(H H^T) of innovation(r, .), expressed in the
/// hyperplane basis.
Eigen::MatrixXd noise_covariance_mc(const Allocation& r,
                                    std::span<const MarketSample> samples,
                                    std::span<const PoolModel> pools);

/// a_i = -phi_i''(r_i) for the exponential closed forms.
std::vector<double> curvature_closed_form(std::span<const ExponentialPool> pools,
                                          const Allocation& r);

struct CurvatureEstimate {
  std::vector<double> a;
  std::vector<double> std_error;
  double bandwidth = 0.0;
};

/// a_i by central differences of phi_prime_mc with the given bandwidth.
CurvatureEstimate curvature_finite_difference(std::span<const PoolModel> pools,
                                              std::span<const MarketSample> samples,
                                              const Allocation& r,
                                              double bandwidth);

// Averaging-rate diagnostic ---------------------------------------------------------

struct RateFit {
  double u = 0.0;
  double rate = 0.0;        // minus the fitted log-log slope
  double expectation = 0.0;
  std::size_t points = 0;
  bool degenerate = false;
};

struct RateReport {
  std::size_t pool = 0;
  double hypothesis = 0.0;
  double tolerance = 0.15;
  std::vector<RateFit> fits;
  double mean_rate = 0.0;
  bool degenerate = false;
  bool compatible = false;
};

/// Estimates the rate at which (1/n) sum_k V^k 1{u V^k < D_i^k} approaches
/// its mean: the largest absolute error on each dyadic block [2^j, 2^{j+1})
/// is regressed against n on a log-log scale. When `expectation` is empty the
/// full-stream mean is used as reference and only n <= len/10 is fitted.
RateReport averaging_diagnostic(std::span<const MarketSample> stream,
                                std::span<const double> u_grid, std::size_t pool,
                                double alpha_hypothesis,
                                const std::function<double(double)>& expectation = {},
                                double tolerance = 0.15);

}  // namespace darkpool
