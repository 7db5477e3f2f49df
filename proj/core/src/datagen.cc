#include "darkpool/datagen.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "moments.h"

namespace darkpool {

// Lognormal -------------------------------------------------------------------

double LognormalTarget::sigma2() const { return std::log1p(variance / (mean * mean)); }

double LognormalTarget::mu() const { return std::log(mean) - 0.5 * sigma2(); }

double lognormal_mean(double mu, double sigma2) { return std::exp(mu + 0.5 * sigma2); }

double lognormal_variance(double mu, double sigma2) {
  return std::expm1(sigma2) * std::exp(2.0 * mu + sigma2);
}

namespace {

void validate_target(const LognormalTarget& t, const char* what) {
  if (!(t.mean > 0.0) || !std::isfinite(t.mean)) {
    throw std::invalid_argument(std::string("lognormal: ") + what + " mean must be positive");
  }
  if (!(t.variance > 0.0) || !std::isfinite(t.variance)) {
    throw std::invalid_argument(std::string("lognormal: ") + what +
                                " variance must be positive (use a constant stream for zero)");
  }
}

}  // namespace

void validate(const LognormalConfig& config) {
  validate_target(config.volume, "volume");
  if (config.deliverable.empty()) throw std::invalid_argument("lognormal: no pools");
  for (const auto& d : config.deliverable) validate_target(d, "deliverable");
}

std::vector<MarketSample> gen_lognormal(const LognormalConfig& config, std::size_t n) {
  validate(config);
  Rng rng(config.seed, 0);
  const double mu_v = config.volume.mu(), sd_v = std::sqrt(config.volume.sigma2());
  std::vector<double> mu, sd;
  for (const auto& d : config.deliverable) {
    mu.push_back(d.mu());
    sd.push_back(std::sqrt(d.sigma2()));
  }
  std::vector<MarketSample> out(n);
  for (auto& s : out) {
    s.volume = std::exp(mu_v + sd_v * rng.normal());
    s.deliverable.resize(mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
      s.deliverable[i] = std::exp(mu[i] + sd[i] * rng.normal());
    }
  }
  return out;
}

ExponentialSource::ExponentialSource(double volume, std::vector<double> lambda,
                                     std::uint64_t seed)
    : volume_(volume), lambda_(std::move(lambda)), rng_(seed, 0) {
  if (!(volume_ > 0.0)) throw std::invalid_argument("exponential source: volume must be positive");
  if (lambda_.empty()) throw std::invalid_argument("exponential source: no pools");
  for (double l : lambda_) {
    if (!(l > 0.0)) throw std::invalid_argument("exponential source: rates must be positive");
  }
}

void ExponentialSource::next(MarketSample& out) {
  out.volume = volume_;
  out.deliverable.resize(lambda_.size());
  for (std::size_t i = 0; i < lambda_.size(); ++i) {
    out.deliverable[i] = rng_.exponential(lambda_[i]);
  }
}

MarketSample ExponentialSource::next() {
  MarketSample s;
  next(s);
  return s;
}

std::vector<MarketSample> gen_constant_exponential(double volume,
                                                   const std::vector<double>& lambda,
                                                   std::uint64_t seed, std::size_t n) {
  ExponentialSource source(volume, lambda, seed);
  std::vector<MarketSample> out(n);
  for (auto& s : out) source.next(s);
  return out;
}

// Ornstein-Uhlenbeck --------------------------------------------------------------

double spectral_radius(const Eigen::MatrixXd& a) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

LyapunovSolution solve_discrete_lyapunov(const Eigen::MatrixXd& a,
                                         const Eigen::MatrixXd& q, double tolerance,
                                         std::size_t max_iterations) {
  if (a.rows() != a.cols() || q.rows() != a.rows() || q.cols() != a.cols()) {
    throw std::invalid_argument("discrete lyapunov: dimension mismatch");
  }
  if (spectral_radius(a) >= 1.0) {
    throw std::domain_error("discrete lyapunov: spectral radius of A must be < 1");
  }
  LyapunovSolution out;
  out.C = q;
  for (out.iterations = 1; out.iterations <= max_iterations; ++out.iterations) {
    Eigen::MatrixXd next = a * out.C * a.transpose() + q;
    next = 0.5 * (next + next.transpose());
    const double change = (next - out.C).norm();
    out.C = std::move(next);
    if (change <= tolerance * std::max(1.0, out.C.norm())) break;
  }
  out.residual = (out.C - a * out.C * a.transpose() - q).norm();
  if (out.iterations > max_iterations || !(out.residual <= 1e-10 * std::max(1.0, out.C.norm()))) {
    throw std::domain_error("discrete lyapunov: fixed-point iteration did not converge");
  }
  return out;
}

OuGenerator::OuGenerator(OuGeneratorConfig config)
    : config_(std::move(config)), rng_(config_.seed, 0) {
  const Eigen::Index d = config_.m.size();
  if (d < 2) throw std::invalid_argument("ou: m must have N + 1 >= 2 entries");
  if (config_.A.rows() != d || config_.A.cols() != d) {
    throw std::invalid_argument("ou: A must be (N+1) x (N+1)");
  }
  if (config_.B.rows() != d || config_.B.cols() < 1) {
    throw std::invalid_argument("ou: B must have N + 1 rows");
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(config_.B);
  if (lu.rank() != d) throw std::invalid_argument("ou: B must have full rank N + 1");
  if (!(config_.v0 > 0.0)) throw std::invalid_argument("ou: v0 must be positive");
  if (config_.d0.size() == 0) config_.d0 = Eigen::VectorXd::Ones(d - 1);
  if (config_.d0.size() != d - 1 || (config_.d0.array() <= 0.0).any()) {
    throw std::invalid_argument("ou: d0 must hold N positive scales");
  }
  if (spectral_radius(config_.A) >= 1.0) {
    throw std::domain_error("ou: spectral radius of A must be < 1");
  }
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
  mean_ = (id - config_.A).partialPivLu().solve(config_.m);
  lyapunov_ = solve_discrete_lyapunov(config_.A, config_.B * config_.B.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(lyapunov_.C);
  if (llt.info() != Eigen::Success) throw std::domain_error("ou: stationary covariance not positive definite");
  chol_ = llt.matrixL();

  xi_.resize(config_.B.cols());
  x_ = mean_;
  if (config_.stationary) {
    Eigen::VectorXd z(d);
    for (Eigen::Index k = 0; k < d; ++k) z(k) = rng_.normal();
    x_ += chol_ * z;
  }
}

Eigen::VectorXd OuGenerator::level_mean() const {
  const Eigen::Index d = mean_.size();
  Eigen::VectorXd out(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const double scale = k == 0 ? config_.v0 : config_.d0(k - 1);
    out(k) = scale * lognormal_mean(mean_(k), lyapunov_.C(k, k));
  }
  return out;
}

Eigen::VectorXd OuGenerator::level_std() const {
  const Eigen::Index d = mean_.size();
  Eigen::VectorXd out(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const double scale = k == 0 ? config_.v0 : config_.d0(k - 1);
    out(k) = scale * std::sqrt(lognormal_variance(mean_(k), lyapunov_.C(k, k)));
  }
  return out;
}

double OuGenerator::truncated_volume_mean(double u, std::size_t pool) const {
  if (pool >= pools()) throw std::out_of_range("ou: pool index");
  if (!(u > 0.0)) throw std::invalid_argument("ou: u must be positive");
  const auto i = static_cast<Eigen::Index>(pool + 1);
  const Eigen::MatrixXd& c = lyapunov_.C;
  // Tilting by exp(X_0) shifts the Gaussian mean by C e_0.
  const double shift_mean = mean_(i) - mean_(0) + c(i, 0) - c(0, 0);
  const double sd = std::sqrt(c(i, i) + c(0, 0) - 2.0 * c(i, 0));
  const double k = std::log(u * config_.v0 / config_.d0(i - 1));
  const double tail = 0.5 * std::erfc((k - shift_mean) / (sd * std::sqrt(2.0)));
  return config_.v0 * lognormal_mean(mean_(0), c(0, 0)) * tail;
}

MarketSample OuGenerator::next() {
  for (Eigen::Index k = 0; k < xi_.size(); ++k) xi_(k) = rng_.normal();
  x_ = config_.m + config_.A * x_ + config_.B * xi_;
  MarketSample s;
  s.volume = config_.v0 * std::exp(x_(0));
  s.deliverable.resize(pools());
  for (std::size_t i = 0; i < pools(); ++i) {
    s.deliverable[i] = config_.d0(static_cast<Eigen::Index>(i)) *
                       std::exp(x_(static_cast<Eigen::Index>(i + 1)));
  }
  return s;
}

std::vector<MarketSample> OuGenerator::generate(std::size_t n) {
  std::vector<MarketSample> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) out.push_back(next());
  return out;
}

std::vector<MarketSample> gen_exp_ou(const OuGeneratorConfig& config, std::size_t n) {
  OuGenerator gen(config);
  return gen.generate(n);
}

// Mixing -----------------------------------------------------------------------------

std::string to_string(MeanWindow window) {
  return window == MeanWindow::kPerDay ? "per_day" : "full_period";
}

void validate(const MixerConfig& config) {
  if (config.beta.empty() || config.beta.size() != config.alpha.size()) {
    throw std::invalid_argument("mixer: beta and alpha must have the same non-zero length");
  }
  for (double b : config.beta) {
    if (!(b > 0.0)) throw std::invalid_argument("mixer: beta must be positive");
  }
  for (double a : config.alpha) {
    if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("mixer: alpha must lie in [0, 1]");
  }
}

MixedStream mix_pseudo_real(const std::vector<double>& volume,
                            const std::vector<std::vector<double>>& correlates,
                            const MixerConfig& config,
                            const std::vector<std::size_t>& day_starts) {
  validate(config);
  const std::size_t n_pools = config.beta.size();
  if (correlates.size() != n_pools) {
    throw std::invalid_argument("mixer: one correlate series per pool is required");
  }
  const std::size_t len = volume.size();
  if (len == 0) throw std::invalid_argument("mixer: empty volume series");
  for (const auto& s : correlates) {
    if (s.size() != len) throw std::invalid_argument("mixer: series lengths differ");
  }
  for (double v : volume) {
    if (!(v > 0.0)) throw std::invalid_argument("mixer: volumes must be positive");
  }

  MixedStream out;
  out.window = config.window;
  out.day_starts = day_starts.empty() ? std::vector<std::size_t>{0} : day_starts;
  if (out.day_starts.front() != 0 || !std::is_sorted(out.day_starts.begin(), out.day_starts.end()) ||
      out.day_starts.back() >= len) {
    throw std::invalid_argument("mixer: day starts must be increasing indices starting at 0");
  }
  double beta_sum = 0.0;
  for (double b : config.beta) beta_sum += b;
  out.shortage = beta_sum < 1.0;

  const auto mean_over = [](const std::vector<double>& x, std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t k = lo; k < hi; ++k) s += x[k];
    return s / static_cast<double>(hi - lo);
  };
  out.mean_volume = mean_over(volume, 0, len);
  for (const auto& s : correlates) out.mean_correlates.push_back(mean_over(s, 0, len));

  std::vector<std::pair<std::size_t, std::size_t>> windows;
  if (config.window == MeanWindow::kFullPeriod) {
    windows.emplace_back(0, len);
  } else {
    for (std::size_t d = 0; d < out.day_starts.size(); ++d) {
      const std::size_t hi = d + 1 < out.day_starts.size() ? out.day_starts[d + 1] : len;
      windows.emplace_back(out.day_starts[d], hi);
    }
  }

  out.samples.resize(len);
  for (const auto& [lo, hi] : windows) {
    const double ev = mean_over(volume, lo, hi);
    std::vector<double> ratio(n_pools);
    for (std::size_t i = 0; i < n_pools; ++i) {
      const double es = mean_over(correlates[i], lo, hi);
      if (!(es > 0.0)) throw std::invalid_argument("mixer: correlate series must have a positive mean");
      ratio[i] = ev / es;
    }
    for (std::size_t k = lo; k < hi; ++k) {
      MarketSample& s = out.samples[k];
      s.volume = volume[k];
      s.deliverable.resize(n_pools);
      for (std::size_t i = 0; i < n_pools; ++i) {
        const double a = config.alpha[i];
        s.deliverable[i] =
            config.beta[i] * ((1.0 - a) * volume[k] + a * correlates[i][k] * ratio[i]);
      }
    }
  }
  return out;
}

// CSV ingestion --------------------------------------------------------------------------

namespace {

constexpr std::int64_t kSecondsPerDay = 86400;

// Days since 1970-01-01 of a proleptic Gregorian date.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool all_digits(const std::string& s, std::size_t from, std::size_t count) {
  if (from + count > s.size()) return false;
  for (std::size_t k = from; k < from + count; ++k) {
    if (s[k] < '0' || s[k] > '9') return false;
  }
  return true;
}

int digits_at(const std::string& s, std::size_t from, std::size_t count) {
  return std::stoi(s.substr(from, count));
}

std::int64_t day_of(std::int64_t ts) {
  return ts >= 0 ? ts / kSecondsPerDay : -((-ts + kSecondsPerDay - 1) / kSecondsPerDay);
}

}  // namespace

bool parse_timestamp(const std::string& raw, std::int64_t& out) {
  const std::string text = trim(raw);
  if (text.empty()) return false;
  std::size_t pos = 0;
  if (text.find('-', 1) == std::string::npos) {
    // Plain epoch seconds.
    try {
      const long long v = std::stoll(text, &pos);
      if (pos != text.size()) return false;
      out = v;
      return true;
    } catch (const std::exception&) {
      return false;
    }
  }
  if (!all_digits(text, 0, 4) || text.size() < 16 || text[4] != '-' || !all_digits(text, 5, 2) ||
      text[7] != '-' || !all_digits(text, 8, 2) || (text[10] != 'T' && text[10] != ' ') ||
      !all_digits(text, 11, 2) || text[13] != ':' || !all_digits(text, 14, 2)) {
    return false;
  }
  const int year = digits_at(text, 0, 4), month = digits_at(text, 5, 2), day = digits_at(text, 8, 2);
  const int hour = digits_at(text, 11, 2), minute = digits_at(text, 14, 2);
  int second = 0;
  pos = 16;
  if (pos < text.size() && text[pos] == ':') {
    if (!all_digits(text, pos + 1, 2)) return false;
    second = digits_at(text, pos + 1, 2);
    pos += 3;
    if (pos < text.size() && text[pos] == '.') {
      ++pos;
      const std::size_t start = pos;
      while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
      if (pos == start) return false;
    }
  }
  if (pos < text.size() && text[pos] == 'Z') ++pos;
  if (pos != text.size()) return false;
  if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 || second > 60) {
    return false;
  }
  out = days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day)) * kSecondsPerDay +
        hour * 3600 + minute * 60 + second;
  return true;
}

VolumeSeries ingest_csv(std::istream& in) {
  VolumeSeries out;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string row = trim(line);
    if (row.empty()) continue;
    if (!header_seen) {
      if (row != "timestamp,volume") {
        throw IngestError("line " + std::to_string(line_no) +
                              ": expected header 'timestamp,volume'", line_no);
      }
      header_seen = true;
      continue;
    }
    const auto comma = row.find(',');
    if (comma == std::string::npos || row.find(',', comma + 1) != std::string::npos) {
      throw IngestError("line " + std::to_string(line_no) + ": expected two fields", line_no);
    }
    std::int64_t ts = 0;
    if (!parse_timestamp(row.substr(0, comma), ts)) {
      throw IngestError("line " + std::to_string(line_no) + ": bad timestamp '" +
                            trim(row.substr(0, comma)) + "'", line_no);
    }
    const std::string vol_text = trim(row.substr(comma + 1));
    double vol = 0.0;
    std::size_t used = 0;
    try {
      vol = std::stod(vol_text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != vol_text.size() || !std::isfinite(vol)) {
      throw IngestError("line " + std::to_string(line_no) + ": bad volume '" + vol_text + "'", line_no);
    }
    if (vol < 0.0) {
      throw IngestError("line " + std::to_string(line_no) + ": negative volume", line_no);
    }
    if (!out.timestamps.empty() && ts < out.timestamps.back()) {
      throw IngestError("line " + std::to_string(line_no) + ": timestamps decrease", line_no);
    }
    if (out.timestamps.empty() || day_of(ts) != day_of(out.timestamps.back())) {
      out.day_starts.push_back(out.timestamps.size());
    }
    out.timestamps.push_back(ts);
    out.volume.push_back(vol);
  }
  if (!header_seen) throw IngestError("line 1: missing header 'timestamp,volume'", 1);
  return out;
}

VolumeSeries ingest_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("ingest: cannot open " + path);
  return ingest_csv(in);
}

SeriesSummary summarize(const std::vector<double>& series) {
  RunningMoments m;
  for (double x : series) m.add(x);
  return {m.count(), m.mean(), m.variance()};
}

std::string format_summary_table(const std::vector<std::string>& names,
                                 const std::vector<SeriesSummary>& columns) {
  if (names.size() != columns.size()) throw std::invalid_argument("summary table: size mismatch");
  std::ostringstream out;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-10s", "");
  out << buf;
  for (const auto& n : names) {
    std::snprintf(buf, sizeof buf, "%12s", n.c_str());
    out << buf;
  }
  out << '\n';
  std::snprintf(buf, sizeof buf, "%-10s", "Mean");
  out << buf;
  for (const auto& c : columns) {
    std::snprintf(buf, sizeof buf, "%12.2f", c.mean);
    out << buf;
  }
  out << '\n';
  std::snprintf(buf, sizeof buf, "%-10s", "Variance");
  out << buf;
  for (const auto& c : columns) {
    std::snprintf(buf, sizeof buf, "%12.2e", c.variance);
    out << buf;
  }
  out << '\n';
  return out.str();
}

std::vector<double> stream_column(const std::vector<MarketSample>& stream, std::size_t column) {
  std::vector<double> out;
  out.reserve(stream.size());
  for (const auto& s : stream) {
    if (column == 0) {
      out.push_back(s.volume);
    } else {
      if (column > s.pools()) throw std::out_of_range("stream_column: column index");
      out.push_back(s.deliverable[column - 1]);
    }
  }
  return out;
}

void write_stream_csv(std::ostream& out, const std::vector<MarketSample>& stream) {
  const std::size_t n_pools = stream.empty() ? 0 : stream.front().pools();
  out << "n,V";
  for (std::size_t i = 1; i <= n_pools; ++i) out << ",D_" << i;
  out << '\n';
  char buf[40];
  for (std::size_t k = 0; k < stream.size(); ++k) {
    out << (k + 1);
    std::snprintf(buf, sizeof buf, ",%.17g", stream[k].volume);
    out << buf;
    for (double d : stream[k].deliverable) {
      std::snprintf(buf, sizeof buf, ",%.17g", d);
      out << buf;
    }
    out << '\n';
  }
}

std::uint64_t stream_checksum(const std::vector<MarketSample>& stream) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto mix = [&h](double x) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &x, sizeof bits);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& s : stream) {
    mix(s.volume);
    for (double d : s.deliverable) mix(d);
  }
  return h;
}

}  // namespace darkpool
