#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "darkpool/bench.h"
#include "darkpool/config.h"
#include "darkpool/core.h"
#include "darkpool/datagen.h"
#include "darkpool/execution_model.h"

namespace darkpool {

enum class Regime { kIid, kErgodic, kPseudoReal, kExponential };
enum class ResetPolicy { kNone, kDaily };

std::string to_string(Regime regime);
std::string to_string(ResetPolicy policy);

/// V = volume constant, D_i ~ Exp(lambda_i).
struct ExponentialFixture {
  double volume = 1.0;
  std::vector<double> lambda;
  std::vector<double> rebate;
};

struct ScenarioConfig {
  Regime regime = Regime::kIid;
  std::vector<PoolModel> pools;

  LognormalConfig lognormal;
  OuGeneratorConfig ou;
  ExponentialFixture exponential;
  std::string volume_file;
  std::vector<std::string> correlate_files;
  MixerConfig mixer;

  StepSchedule schedule;
  bool projection = false;
  double averaging_alpha = 0.5;  // declared rate for the ergodic regimes

  std::size_t steps = 10000;     // 0: whole data set (pseudo-real only)
  std::size_t replications = 1;
  std::uint64_t seed = 0;
  ResetPolicy reset = ResetPolicy::kNone;
  std::size_t steps_per_day = 10000;
  std::size_t warmup = 100;
  std::size_t window = 100;
  bool write_stream = false;
  std::string out_dir = "out";

  // Diagnostics.
  std::vector<double> analysis_a;
  std::size_t analysis_samples = 100000;
  std::optional<ExponentialFixture> clt_fixture;
  std::size_t averaging_pool = 0;
  std::vector<double> averaging_u;

  /// Every key of the source file after command line overrides.
  std::map<std::string, std::string> echo;
};

/// Builds and cross-checks a scenario. Relative data paths are resolved
/// against `base_dir`. Throws ConfigError.
ScenarioConfig load_scenario(const KeyValueFile& file, const std::string& base_dir = ".");

struct ScenarioOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::size_t> replications;
};

ScenarioConfig load_scenario_file(const std::string& path, const ScenarioOverrides& overrides = {});

struct GeneratedStream {
  std::vector<MarketSample> samples;
  std::vector<std::size_t> day_starts;
  /// Regime-specific facts for the summary (e.g. stationary level std).
  std::map<std::string, double> facts;
};

/// Input stream of one replication. Synthetic regimes draw from `seed`;
/// pseudo-real data ignore it.
GeneratedStream generate_stream(const ScenarioConfig& config, std::uint64_t seed,
                                std::size_t length);

/// Seed of replication k.
std::uint64_t replication_seed(std::uint64_t master, std::size_t replication);

/// Runs every replication (in parallel) and writes
/// <out>/rep<k>/{series,smoothed}.csv and <out>/summary.json. Returns the
/// written paths in a deterministic order. Progress lines go to `log`.
std::vector<std::string> run_scenario(const ScenarioConfig& config, std::ostream* log = nullptr);

/// Diagnostic names accepted by run_diagnostic.
std::vector<std::string> diagnostic_names();

/// Runs one diagnostic and returns its JSON report; also written to
/// <out>/diag_<name>.json. Throws ConfigError when a prerequisite is missing.
std::string run_diagnostic(const ScenarioConfig& config, const std::string& name);

}  // namespace darkpool
