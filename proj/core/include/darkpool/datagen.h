#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "darkpool/core.h"
#include "darkpool/rng.h"

namespace darkpool {

// IID lognormal ---------------------------------------------------------------

/// Target mean and variance of one lognormal marginal.
struct LognormalTarget {
  double mean = 1.0;
  double variance = 1.0;

  /// sigma^2 = log(1 + s^2 / m^2).
  double sigma2() const;
  /// mu = log m - sigma^2 / 2.
  double mu() const;
};

/// Mean and variance of exp(N(mu, sigma2)).
double lognormal_mean(double mu, double sigma2);
double lognormal_variance(double mu, double sigma2);

struct LognormalConfig {
  LognormalTarget volume;
  std::vector<LognormalTarget> deliverable;
  std::uint64_t seed = 0;
};

void validate(const LognormalConfig& config);

std::vector<MarketSample> gen_lognormal(const LognormalConfig& config, std::size_t n);

/// V = volume and D_i ~ Exp(lambda_i) independent: the closed-form fixture.
std::vector<MarketSample> gen_constant_exponential(double volume,
                                                   const std::vector<double>& lambda,
                                                   std::uint64_t seed, std::size_t n);

/// Streaming version of gen_constant_exponential (same draws).
class ExponentialSource {
 public:
  ExponentialSource(double volume, std::vector<double> lambda, std::uint64_t seed);
  MarketSample next();
  void next(MarketSample& out);

 private:
  double volume_;
  std::vector<double> lambda_;
  Rng rng_;
};

// Exponential Ornstein-Uhlenbeck ------------------------------------------------

struct OuGeneratorConfig {
  Eigen::VectorXd m;   // N + 1
  Eigen::MatrixXd A;   // (N + 1) x (N + 1)
  Eigen::MatrixXd B;   // (N + 1) x M, rank N + 1
  double v0 = 1.0;
  Eigen::VectorXd d0;  // N scales, ones when empty
  std::uint64_t seed = 0;
  /// Draw X^0 from the stationary law; otherwise start at the stationary mean.
  bool stationary = true;
};

/// Fixed point of C <- A C A^T + Q. Throws std::domain_error when the
/// iteration does not reach the tolerance.
struct LyapunovSolution {
  Eigen::MatrixXd C;
  double residual = 0.0;  // ||C - A C A^T - Q||_F
  std::size_t iterations = 0;
};

LyapunovSolution solve_discrete_lyapunov(const Eigen::MatrixXd& a,
                                         const Eigen::MatrixXd& q,
                                         double tolerance = 1e-12,
                                         std::size_t max_iterations = 100000);

double spectral_radius(const Eigen::MatrixXd& a);

/// X^{n+1} = m + A X^n + B Xi^{n+1}, V = v0 exp(X_0), D_i = d0_i exp(X_i).
class OuGenerator {
 public:
  explicit OuGenerator(OuGeneratorConfig config);

  std::size_t pools() const { return static_cast<std::size_t>(config_.m.size()) - 1; }
  const OuGeneratorConfig& config() const { return config_; }
  const Eigen::VectorXd& stationary_mean() const { return mean_; }
  const Eigen::MatrixXd& stationary_covariance() const { return lyapunov_.C; }
  double lyapunov_residual() const { return lyapunov_.residual; }
  const Eigen::VectorXd& state() const { return x_; }

  /// Stationary standard deviation of the levels (V, D_1, ..., D_N).
  Eigen::VectorXd level_std() const;
  Eigen::VectorXd level_mean() const;

  /// E(V 1{u V < D_i}) under the stationary law (closed form).
  double truncated_volume_mean(double u, std::size_t pool) const;

  MarketSample next();
  std::vector<MarketSample> generate(std::size_t n);

 private:
  OuGeneratorConfig config_;
  Eigen::VectorXd mean_;
  LyapunovSolution lyapunov_;
  Eigen::MatrixXd chol_;  // lower factor of C
  Eigen::VectorXd x_;
  Eigen::VectorXd xi_;
  Rng rng_;
};

std::vector<MarketSample> gen_exp_ou(const OuGeneratorConfig& config, std::size_t n);

// Pseudo-real mixing -------------------------------------------------------------

enum class MeanWindow { kFullPeriod, kPerDay };

std::string to_string(MeanWindow window);

struct MixerConfig {
  std::vector<double> beta;
  std::vector<double> alpha;
  MeanWindow window = MeanWindow::kFullPeriod;
};

void validate(const MixerConfig& config);

struct MixedStream {
  std::vector<MarketSample> samples;
  /// Indices at which a new day starts (always contains 0 when non-empty).
  std::vector<std::size_t> day_starts;
  bool shortage = false;  // sum beta < 1
  MeanWindow window = MeanWindow::kFullPeriod;
  double mean_volume = 0.0;               // full-period means
  std::vector<double> mean_correlates;
};

/// D_i = beta_i ((1 - alpha_i) V + alpha_i S_i EV / ES_i). `day_starts` may
/// be empty (one day); it is required for the per-day window.
MixedStream mix_pseudo_real(const std::vector<double>& volume,
                            const std::vector<std::vector<double>>& correlates,
                            const MixerConfig& config,
                            const std::vector<std::size_t>& day_starts = {});

// CSV ingestion -------------------------------------------------------------------

/// Parse failure with the offending 1-based line.
class IngestError : public std::runtime_error {
 public:
  IngestError(const std::string& what, std::size_t line)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct VolumeSeries {
  std::vector<std::int64_t> timestamps;  // seconds since the epoch (UTC)
  std::vector<double> volume;
  std::vector<std::size_t> day_starts;
};

/// Seconds since the epoch for "YYYY-MM-DD[T ]hh:mm[:ss[.fff]][Z]" or a plain
/// integer. Returns false when the text matches neither.
bool parse_timestamp(const std::string& text, std::int64_t& out);

/// Reads a `timestamp,volume` file. Throws IngestError on malformed rows,
/// negative volumes and decreasing timestamps.
VolumeSeries ingest_csv(std::istream& in);
VolumeSeries ingest_csv(const std::string& path);

struct SeriesSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
};

SeriesSummary summarize(const std::vector<double>& series);

/// Mean / variance table, one column per series.
std::string format_summary_table(const std::vector<std::string>& names,
                                 const std::vector<SeriesSummary>& columns);

/// Column i of a stream: 0 is V, i >= 1 is D_i.
std::vector<double> stream_column(const std::vector<MarketSample>& stream, std::size_t column);

/// `n,V,D_1,...,D_N` with %.17g values.
void write_stream_csv(std::ostream& out, const std::vector<MarketSample>& stream);

/// FNV-1a over the bit patterns of every V and D_i.
std::uint64_t stream_checksum(const std::vector<MarketSample>& stream);

}  // namespace darkpool
