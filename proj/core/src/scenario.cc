#include "darkpool/scenario.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "darkpool/analysis.h"
#include "darkpool/reinforcement.h"
#include "darkpool/report_io.h"
#include "darkpool/rng.h"
#include "json_util.h"
#include "moments.h"

namespace darkpool {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::kIid: return "iid";
    case Regime::kErgodic: return "erg";
    case Regime::kPseudoReal: return "pseudo-real";
    case Regime::kExponential: return "exponential";
  }
  return "iid";
}

std::string to_string(ResetPolicy policy) {
  return policy == ResetPolicy::kDaily ? "daily" : "none";
}

namespace {

Regime parse_regime(const KeyValueFile& f) {
  const std::string v = f.get_string("regime");
  if (v == "iid") return Regime::kIid;
  if (v == "erg") return Regime::kErgodic;
  if (v == "pseudo-real") return Regime::kPseudoReal;
  if (v == "exponential") return Regime::kExponential;
  throw ConfigError(f.source() + ":" + std::to_string(f.line_of("regime")) +
                        ": regime: expected iid, erg, pseudo-real or exponential",
                    f.line_of("regime"));
}

[[noreturn]] void fail_at(const KeyValueFile& f, const std::string& key, const std::string& msg) {
  const std::size_t line = f.line_of(key);
  throw ConfigError(f.source() + ":" + std::to_string(line) + ": " + key + ": " + msg, line);
}

void expect_size(const KeyValueFile& f, const std::string& key, std::size_t got,
                 std::size_t want, const std::string& what) {
  if (got != want) {
    fail_at(f, key, "expected " + std::to_string(want) + " entries (" + what + "), got " +
                        std::to_string(got));
  }
}

void expect_positive(const KeyValueFile& f, const std::string& key, const std::vector<double>& v) {
  for (double x : v) {
    if (!(x > 0.0)) fail_at(f, key, "entries must be positive");
  }
}

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::string resolve(const std::string& base, const std::string& path) {
  const fs::path p(path);
  return p.is_absolute() ? path : (fs::path(base) / p).string();
}

ExponentialFixture read_fixture(const KeyValueFile& f, const std::string& prefix,
                                std::size_t pools) {
  ExponentialFixture fx;
  fx.volume = f.get_double(prefix + ".volume");
  if (!(fx.volume > 0.0)) fail_at(f, prefix + ".volume", "must be positive");
  fx.lambda = f.get_list(prefix + ".lambda");
  expect_positive(f, prefix + ".lambda", fx.lambda);
  expect_size(f, prefix + ".lambda", fx.lambda.size(), pools, "one rate per pool");
  return fx;
}

}  // namespace

ScenarioConfig load_scenario(const KeyValueFile& f, const std::string& base_dir) {
  ScenarioConfig c;
  c.echo = f.entries();
  c.regime = parse_regime(f);

  const std::vector<double> rebates = f.get_list("pools.rebate");
  expect_positive(f, "pools.rebate", rebates);
  const std::size_t n = rebates.size();
  c.pools = pools_from_rebates(rebates);
  if (f.has("pools.threshold")) {
    const auto s = f.get_list("pools.threshold");
    expect_size(f, "pools.threshold", s.size(), n, "one per pool");
    for (std::size_t i = 0; i < n; ++i) {
      if (!(s[i] >= 0.0)) fail_at(f, "pools.threshold", "entries must be >= 0");
      if (s[i] > 0.0) c.pools[i].delivery = ThresholdDelivery{s[i]};
    }
  }
  if (f.has("pools.curve_lambda")) {
    const auto lambda = f.get_list("pools.curve_lambda");
    const auto theta = f.get_list("pools.curve_theta");
    expect_size(f, "pools.curve_lambda", lambda.size(), n, "one per pool");
    expect_size(f, "pools.curve_theta", theta.size(), n, "one per pool");
    std::vector<double> scale = rebates;
    if (f.has("pools.curve_scale")) {
      scale = f.get_list("pools.curve_scale");
      expect_size(f, "pools.curve_scale", scale.size(), n, "one per pool");
    }
    for (std::size_t i = 0; i < n; ++i) {
      try {
        c.pools[i].rebate_curve = RebateCurve::power_of_g(lambda[i], theta[i], scale[i]);
      } catch (const std::invalid_argument& e) {
        fail_at(f, "pools.curve_theta", e.what());
      }
    }
  }

  switch (c.regime) {
    case Regime::kIid: {
      c.lognormal.volume = {f.get_double("iid.volume_mean"), f.get_double("iid.volume_variance")};
      const auto dm = f.get_list("iid.deliverable_mean");
      const auto dv = f.get_list("iid.deliverable_variance");
      expect_size(f, "iid.deliverable_mean", dm.size(), n, "one per pool");
      expect_size(f, "iid.deliverable_variance", dv.size(), n, "one per pool");
      for (std::size_t i = 0; i < n; ++i) c.lognormal.deliverable.push_back({dm[i], dv[i]});
      try {
        validate(c.lognormal);
      } catch (const std::invalid_argument& e) {
        fail_at(f, "iid.volume_mean", e.what());
      }
      break;
    }
    case Regime::kErgodic: {
      c.ou.m = to_eigen(f.get_list("erg.m"));
      expect_size(f, "erg.m", static_cast<std::size_t>(c.ou.m.size()), n + 1, "N + 1 components");
      c.ou.A = f.get_matrix("erg.A");
      c.ou.B = f.get_matrix("erg.B");
      c.ou.v0 = f.get_double("erg.v0", 1.0);
      if (f.has("erg.d0")) c.ou.d0 = to_eigen(f.get_list("erg.d0"));
      c.ou.stationary = f.get_bool("erg.stationary", true);
      try {
        OuGenerator probe(c.ou);  // validates shapes, rank and spectral radius
      } catch (const std::exception& e) {
        fail_at(f, "erg.A", e.what());
      }
      break;
    }
    case Regime::kExponential: {
      c.exponential = read_fixture(f, "exponential", n);
      c.exponential.rebate = rebates;
      break;
    }
    case Regime::kPseudoReal: {
      c.volume_file = resolve(base_dir, f.get_string("pseudo_real.volume_file"));
      for (const auto& p : f.get_string_list("pseudo_real.correlate_files")) {
        c.correlate_files.push_back(resolve(base_dir, p));
      }
      expect_size(f, "pseudo_real.correlate_files", c.correlate_files.size(), n, "one per pool");
      for (const auto& p : c.correlate_files) {
        if (!fs::exists(p)) fail_at(f, "pseudo_real.correlate_files", "file not found: " + p);
      }
      if (!fs::exists(c.volume_file)) fail_at(f, "pseudo_real.volume_file", "file not found: " + c.volume_file);
      c.mixer.beta = f.get_list("pseudo_real.beta");
      c.mixer.alpha = f.get_list("pseudo_real.alpha");
      expect_size(f, "pseudo_real.beta", c.mixer.beta.size(), n, "one per pool");
      expect_size(f, "pseudo_real.alpha", c.mixer.alpha.size(), n, "one per pool");
      const std::string window = f.get_string("pseudo_real.mean_window", "full_period");
      if (window == "full_period") {
        c.mixer.window = MeanWindow::kFullPeriod;
      } else if (window == "per_day") {
        c.mixer.window = MeanWindow::kPerDay;
      } else {
        fail_at(f, "pseudo_real.mean_window", "expected full_period or per_day");
      }
      try {
        validate(c.mixer);
      } catch (const std::invalid_argument& e) {
        fail_at(f, "pseudo_real.beta", e.what());
      }
      break;
    }
  }

  c.schedule.c = f.get_double("algo.c", 1.0);
  c.schedule.beta = f.get_double("algo.beta", 1.0);
  const std::string step = f.get_string("algo.step", "raw");
  if (step == "raw") {
    c.schedule.mode = StepMode::kRaw;
  } else if (step == "predictable") {
    c.schedule.mode = StepMode::kPredictable;
  } else {
    fail_at(f, "algo.step", "expected raw or predictable");
  }
  c.projection = f.get_bool("algo.projection", false);
  c.averaging_alpha = f.get_double("algo.alpha", 0.5);
  try {
    validate(c.schedule);
  } catch (const std::invalid_argument& e) {
    fail_at(f, "algo.c", e.what());
  }
  const bool ergodic = c.regime == Regime::kErgodic || c.regime == Regime::kPseudoReal;
  const ScheduleReport sched = validate_schedule(
      c.schedule, ergodic ? InputRegime::averaging(c.averaging_alpha) : InputRegime::iid());
  if (!sched.valid) {
    fail_at(f, f.has("algo.beta") ? "algo.beta" : "algo.c",
            "step schedule invalid for regime " + to_string(c.regime) +
                (sched.note.empty() ? "" : " (" + sched.note + ")"));
  }

  c.steps = f.get_size("run.steps", c.regime == Regime::kPseudoReal ? 0 : 10000);
  if (c.steps == 0 && c.regime != Regime::kPseudoReal) fail_at(f, "run.steps", "must be positive");
  c.replications = f.get_size("run.replications", 1);
  if (c.replications == 0) fail_at(f, "run.replications", "must be positive");
  c.seed = f.get_u64("run.seed", 0);
  const std::string reset = f.get_string("run.reset", "none");
  if (reset == "none") {
    c.reset = ResetPolicy::kNone;
  } else if (reset == "daily") {
    c.reset = ResetPolicy::kDaily;
  } else {
    fail_at(f, "run.reset", "expected none or daily");
  }
  c.steps_per_day = f.get_size("run.steps_per_day", 10000);
  if (c.steps_per_day == 0) fail_at(f, "run.steps_per_day", "must be positive");
  c.warmup = f.get_size("run.warmup", 100);
  c.window = f.get_size("run.window", 100);
  if (c.window == 0) fail_at(f, "run.window", "must be positive");
  c.write_stream = f.get_bool("run.write_stream", false);
  c.out_dir = f.get_string("run.out", "out");

  if (f.has("analysis.a")) {
    c.analysis_a = f.get_list("analysis.a");
    expect_positive(f, "analysis.a", c.analysis_a);
  }
  c.analysis_samples = f.get_size("analysis.samples", 100000);
  if (c.analysis_samples == 0) fail_at(f, "analysis.samples", "must be positive");
  if (f.has("fixture.volume") || f.has("fixture.lambda") || f.has("fixture.rebate")) {
    ExponentialFixture fx = read_fixture(f, "fixture", n);
    fx.rebate = f.get_list("fixture.rebate");
    expect_positive(f, "fixture.rebate", fx.rebate);
    expect_size(f, "fixture.rebate", fx.rebate.size(), n, "one per pool");
    c.clt_fixture = fx;
  }
  c.averaging_pool = f.get_size("averaging.pool", 0);
  if (c.averaging_pool >= n) fail_at(f, "averaging.pool", "pool index out of range");
  if (f.has("averaging.u")) {
    c.averaging_u = f.get_list("averaging.u");
    expect_positive(f, "averaging.u", c.averaging_u);
  }

  f.reject_unused();
  return c;
}

ScenarioConfig load_scenario_file(const std::string& path, const ScenarioOverrides& overrides) {
  KeyValueFile f = KeyValueFile::load(path);
  if (overrides.seed) f.set("run.seed", std::to_string(*overrides.seed));
  if (overrides.out_dir) f.set("run.out", *overrides.out_dir);
  if (overrides.replications) f.set("run.replications", std::to_string(*overrides.replications));
  const fs::path parent = fs::path(path).parent_path();
  return load_scenario(f, parent.empty() ? "." : parent.string());
}

std::uint64_t replication_seed(std::uint64_t master, std::size_t replication) {
  return substream_seed(master, 1000 + replication);
}

GeneratedStream generate_stream(const ScenarioConfig& c, std::uint64_t seed, std::size_t length) {
  GeneratedStream out;
  switch (c.regime) {
    case Regime::kIid: {
      LognormalConfig cfg = c.lognormal;
      cfg.seed = seed;
      out.samples = gen_lognormal(cfg, length);
      break;
    }
    case Regime::kErgodic: {
      OuGeneratorConfig cfg = c.ou;
      cfg.seed = seed;
      OuGenerator gen(cfg);
      out.samples = gen.generate(length);
      const Eigen::VectorXd sd = gen.level_std();
      out.facts["stationary_level_std_V"] = sd(0);
      for (Eigen::Index i = 1; i < sd.size(); ++i) {
        out.facts["stationary_level_std_D_" + std::to_string(i)] = sd(i);
      }
      out.facts["lyapunov_residual"] = gen.lyapunov_residual();
      const SeriesSummary v = summarize(stream_column(out.samples, 0));
      out.facts["empirical_level_std_V"] = std::sqrt(v.variance);
      break;
    }
    case Regime::kExponential:
      out.samples = gen_constant_exponential(c.exponential.volume, c.exponential.lambda, seed, length);
      break;
    case Regime::kPseudoReal: {
      const VolumeSeries v = ingest_csv(c.volume_file);
      std::vector<std::vector<double>> s;
      for (const auto& p : c.correlate_files) s.push_back(ingest_csv(p).volume);
      MixedStream mixed = mix_pseudo_real(v.volume, s, c.mixer, v.day_starts);
      out.samples = std::move(mixed.samples);
      out.day_starts = std::move(mixed.day_starts);
      out.facts["shortage"] = mixed.shortage ? 1.0 : 0.0;
      out.facts["mean_V"] = mixed.mean_volume;
      if (length > 0 && length < out.samples.size()) {
        out.samples.resize(length);
        while (!out.day_starts.empty() && out.day_starts.back() >= length) out.day_starts.pop_back();
      }
      return out;
    }
  }
  for (std::size_t k = 0; k < out.samples.size(); k += c.steps_per_day) out.day_starts.push_back(k);
  return out;
}

namespace {

std::string hex64(std::uint64_t x) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

void write_series(const fs::path& path, const std::string& header,
                  const std::vector<BenchmarkRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << header << '\n';
  write_benchmark_csv(out, records);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

json run_replication(const ScenarioConfig& c, std::size_t k, const fs::path& dir,
                     std::vector<std::string>& files) {
  const std::uint64_t seed = replication_seed(c.seed, k);
  const GeneratedStream stream = generate_stream(c, seed, c.steps);
  if (stream.samples.empty()) throw std::runtime_error("replication produced an empty stream");

  ComparisonOptions opts;
  opts.schedule = c.schedule;
  opts.projection = c.projection;
  if (c.reset == ResetPolicy::kDaily) opts.reset_points = stream.day_starts;
  const ComparisonResult result = run_comparison(stream.samples, c.pools, opts);

  fs::create_directories(dir);
  char header[160];
  std::snprintf(header, sizeof header, "# darkpool seed=%llu replication=%zu c=%.17g",
                static_cast<unsigned long long>(seed), k, c.schedule.c);
  write_series(dir / "series.csv", header, result.records);
  write_series(dir / "smoothed.csv", header, smooth(result.records, c.warmup, c.window));
  files.push_back((dir / "series.csv").string());
  files.push_back((dir / "smoothed.csv").string());
  if (c.write_stream) {
    std::ofstream out(dir / "stream.csv", std::ios::binary);
    out << header << '\n';
    write_stream_csv(out, stream.samples);
    files.push_back((dir / "stream.csv").string());
  }

  json j;
  j["replication"] = k;
  j["seed"] = seed;
  j["steps"] = stream.samples.size();
  j["stream_checksum"] = hex64(stream_checksum(stream.samples));
  j["final_allocation"] = {{"opti", result.final_opti.vector()},
                           {"opti_state", result.final_opti_state},
                           {"reinf", result.final_reinf.vector()}};
  std::size_t zero = 0;
  for (const auto& r : result.records) zero += r.oracle_zero ? 1 : 0;
  j["oracle_zero_steps"] = zero;
  const std::size_t len = result.records.size();
  const PerformanceAverages half = average_performance(result.records, len / 2, len);
  j["second_half_performance"] = {{"opti", half.opti}, {"reinf", half.reinf}};
  const PerformanceAverages all = average_performance(result.records, 0, len);
  j["mean_performance"] = {{"opti", all.opti}, {"reinf", all.reinf}};
  json days = json::array();
  for (std::size_t d = 0; d < stream.day_starts.size(); ++d) {
    const std::size_t lo = stream.day_starts[d];
    const std::size_t hi = d + 1 < stream.day_starts.size() ? stream.day_starts[d + 1] : len;
    const PerformanceAverages p = average_performance(result.records, lo, hi);
    days.push_back({{"day", d}, {"start", lo}, {"steps", hi - lo}, {"opti", p.opti}, {"reinf", p.reinf}});
  }
  j["per_day_performance"] = days;
  json facts = json::object();
  for (const auto& [key, value] : stream.facts) facts[key] = finite_or_null(value);
  j["generator"] = facts;
  return j;
}

}  // namespace

std::vector<std::string> run_scenario(const ScenarioConfig& c, std::ostream* log) {
  const fs::path out(c.out_dir);
  fs::create_directories(out);
  std::vector<json> reps(c.replications);
  std::vector<std::vector<std::string>> files(c.replications);
  std::vector<std::exception_ptr> errors(c.replications);
  std::atomic<std::size_t> next{0};
  const std::size_t workers = std::max<std::size_t>(
      1, std::min<std::size_t>(c.replications, std::thread::hardware_concurrency()));
  const auto work = [&] {
    for (std::size_t k = next++; k < c.replications; k = next++) {
      try {
        reps[k] = run_replication(c, k, out / ("rep" + std::to_string(k)), files[k]);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  json summary;
  json echo = json::object();
  for (const auto& [key, value] : c.echo) echo[key] = value;
  summary["config"] = echo;
  summary["regime"] = to_string(c.regime);
  summary["master_seed"] = c.seed;
  summary["step_constant"] = c.schedule.c;
  summary["step_exponent"] = c.schedule.beta;
  summary["step_mode"] = c.schedule.mode == StepMode::kPredictable ? "predictable" : "raw";
  summary["reset"] = to_string(c.reset);
  if (c.regime == Regime::kPseudoReal) summary["mean_window"] = to_string(c.mixer.window);
  summary["replications"] = reps;

  std::vector<std::string> written;
  for (const auto& f : files) written.insert(written.end(), f.begin(), f.end());
  write_text(out / "summary.json", summary.dump(2) + "\n");
  written.push_back((out / "summary.json").string());

  if (log) {
    for (const auto& r : reps) {
      *log << "rep " << r["replication"].get<std::size_t>() << ": seed " << r["seed"].get<std::uint64_t>()
           << ", second-half performance opti " << r["second_half_performance"]["opti"].get<double>()
           << " reinf " << r["second_half_performance"]["reinf"].get<double>();
      if (r["generator"].contains("stationary_level_std_V")) {
        *log << ", sigma_V stationary " << r["generator"]["stationary_level_std_V"].get<double>()
             << " empirical " << r["generator"]["empirical_level_std_V"].get<double>();
      }
      *log << '\n';
    }
  }
  return written;
}

std::vector<std::string> diagnostic_names() {
  return {"condition-c", "spectra", "clt", "averaging", "equilibrium", "schedule"};
}

namespace {

[[noreturn]] void missing(const std::string& diag, const std::string& key, const std::string& why) {
  throw ConfigError("diag " + diag + ": missing " + key + " (" + why + ")");
}

std::string diag_clt(const ScenarioConfig& c) {
  if (!c.clt_fixture) missing("clt", "fixture.lambda", "closed-form r* source; also set fixture.volume and fixture.rebate");
  const ExponentialFixture& fx = *c.clt_fixture;
  const Allocation r_star = closed_form_optimum(fx.volume, fx.lambda, fx.rebate);
  const auto exp_pools = exponential_pools(fx.volume, fx.lambda, fx.rebate);
  const std::vector<double> a = curvature_closed_form(exp_pools, r_star);
  const auto samples = gen_constant_exponential(fx.volume, fx.lambda, c.seed, c.analysis_samples);
  const auto pools = pools_from_rebates(fx.rebate);
  const Eigen::MatrixXd noise = noise_covariance_mc(r_star, samples, pools);
  const CltAnalysis clt = analyze_clt(a, noise, c.schedule.c);
  json j = json::parse(report_json(clt));
  j["r_star"] = r_star.vector();
  j["samples"] = c.analysis_samples;
  return j.dump(2);
}

std::string diag_averaging(const ScenarioConfig& c) {
  const GeneratedStream s = generate_stream(c, c.seed, c.regime == Regime::kPseudoReal ? 0 : c.steps);
  std::vector<double> u = c.averaging_u;
  if (u.empty()) {
    // Around the ratio of mean deliverable to mean volume, where the indicator is informative.
    const double ratio = summarize(stream_column(s.samples, c.averaging_pool + 1)).mean /
                         summarize(stream_column(s.samples, 0)).mean;
    u = {0.5 * ratio, ratio, 2.0 * ratio};
  }
  std::function<double(double)> expectation;
  std::optional<OuGenerator> gen;
  if (c.regime == Regime::kErgodic) {
    gen.emplace(c.ou);
    expectation = [&gen, &c](double x) { return gen->truncated_volume_mean(x, c.averaging_pool); };
  }
  const RateReport r = averaging_diagnostic(s.samples, u, c.averaging_pool, c.averaging_alpha, expectation);
  json j = json::parse(report_json(r));
  j["reference"] = expectation ? "stationary_closed_form" : "full_stream_mean";
  return j.dump(2);
}

std::string diag_equilibrium(const ScenarioConfig& c) {
  const GeneratedStream s = generate_stream(c, c.seed, c.analysis_samples);
  std::vector<MeanExecutionCurve> curves;
  for (std::size_t i = 0; i < c.pools.size(); ++i) {
    curves.push_back(MeanExecutionCurve::empirical(c.pools[i].spec, pool_draws(s.samples, i)));
  }
  const EquilibriumResult eq = solve_equilibrium(curves);
  const AttractivenessReport att = attractiveness_check(eq, curves);
  json j = json::parse(report_json(eq));
  j["attractiveness"] = {{"lhs", att.lhs}, {"rhs", att.rhs}, {"margin", att.margin},
                         {"attractive", att.attractive},
                         {"jacobian_eigenvalues", complex_json(att.jacobian_eigenvalues)},
                         {"eigenvalues_positive", att.eigenvalues_positive}};
  return j.dump(2);
}

}  // namespace

std::string run_diagnostic(const ScenarioConfig& c, const std::string& name) {
  std::string text;
  if (name == "condition-c") {
    const GeneratedStream s = generate_stream(c, c.seed, c.analysis_samples);
    text = report_json(check_condition_c(c.pools, s.samples));
  } else if (name == "spectra") {
    if (c.analysis_a.empty()) missing("spectra", "analysis.a", "curvature vector");
    text = report_json(matrix_a(c.analysis_a));
  } else if (name == "clt") {
    text = diag_clt(c);
  } else if (name == "averaging") {
    text = diag_averaging(c);
  } else if (name == "equilibrium") {
    text = diag_equilibrium(c);
  } else if (name == "schedule") {
    const bool ergodic = c.regime == Regime::kErgodic || c.regime == Regime::kPseudoReal;
    text = report_json(validate_schedule(
        c.schedule, ergodic ? InputRegime::averaging(c.averaging_alpha) : InputRegime::iid()));
  } else {
    std::string known;
    for (const auto& n : diagnostic_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("unknown diagnostic '" + name + "' (expected one of " + known + ")");
  }
  text += "\n";
  fs::create_directories(c.out_dir);
  write_text(fs::path(c.out_dir) / ("diag_" + name + ".json"), text);
  return text;
}

}  // namespace darkpool
