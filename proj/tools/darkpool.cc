// darkpool: run order-splitting experiments and diagnostics from a config file.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "darkpool/config.h"
#include "darkpool/datagen.h"
#include "darkpool/scenario.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::size_t> replications;

  darkpool::ScenarioOverrides overrides() const { return {seed, out, replications}; }
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool replications) {
  cmd->add_option("--config", flags.config, "Scenario config file")->required();
  cmd->add_option("--seed", flags.seed, "Master seed (overrides run.seed)");
  cmd->add_option("--out", flags.out, "Output directory (overrides run.out)");
  if (replications) {
    cmd->add_option("--replications", flags.replications, "Replication count (overrides run.replications)");
  }
}

int cmd_run(const CommonFlags& flags) {
  const darkpool::ScenarioConfig config = darkpool::load_scenario_file(flags.config, flags.overrides());
  const auto files = darkpool::run_scenario(config, &std::cerr);
  for (const auto& f : files) std::cout << f << '\n';
  return 0;
}

int cmd_diag(const CommonFlags& flags, const std::string& name) {
  const darkpool::ScenarioConfig config = darkpool::load_scenario_file(flags.config, flags.overrides());
  std::cout << darkpool::run_diagnostic(config, name);
  return 0;
}

int cmd_ingest(const std::vector<std::string>& files, const std::string& config_path,
               const std::string& out_path) {
  std::vector<std::string> names;
  std::vector<darkpool::SeriesSummary> columns;
  if (!config_path.empty()) {
    const darkpool::ScenarioConfig config = darkpool::load_scenario_file(config_path);
    if (config.regime != darkpool::Regime::kPseudoReal) {
      throw darkpool::ConfigError("ingest --config expects a pseudo-real scenario");
    }
    const auto stream = darkpool::generate_stream(config, config.seed, 0);
    const std::size_t n = config.pools.size();
    for (std::size_t col = 0; col <= n; ++col) {
      names.push_back(col == 0 ? "V" : "D_" + std::to_string(col));
      columns.push_back(darkpool::summarize(darkpool::stream_column(stream.samples, col)));
    }
    std::cerr << stream.samples.size() << " samples, " << stream.day_starts.size() << " days, "
              << (stream.facts.at("shortage") > 0.0 ? "shortage" : "no shortage") << '\n';
  }
  for (const auto& path : files) {
    const darkpool::VolumeSeries s = darkpool::ingest_csv(path);
    names.push_back(std::filesystem::path(path).stem().string());
    columns.push_back(darkpool::summarize(s.volume));
    std::cerr << path << ": " << s.volume.size() << " rows, " << s.day_starts.size() << " days\n";
  }
  if (names.empty()) throw darkpool::ConfigError("ingest: give CSV files or --config");
  const std::string table = darkpool::format_summary_table(names, columns);
  std::cout << table;
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << table;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dark pool order-splitting simulator"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "Run both allocators against the oracle");
  add_common(run, run_flags, true);

  CommonFlags diag_flags;
  std::string diag_name;
  CLI::App* diag = app.add_subcommand("diag", "Run one diagnostic and write its JSON report");
  diag->add_option("name", diag_name, "condition-c | spectra | clt | averaging | equilibrium | schedule")
      ->required()
      ->check(CLI::IsMember(darkpool::diagnostic_names()));
  add_common(diag, diag_flags, false);

  std::vector<std::string> ingest_files;
  std::string ingest_config, ingest_out;
  CLI::App* ingest = app.add_subcommand("ingest", "Summarise timestamp,volume CSV files");
  ingest->add_option("files", ingest_files, "CSV files with header timestamp,volume");
  ingest->add_option("--config", ingest_config, "Pseudo-real scenario: summarise the mixed stream");
  ingest->add_option("--out", ingest_out, "Also write the table to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return cmd_run(run_flags);
    if (*diag) return cmd_diag(diag_flags, diag_name);
    if (*ingest) return cmd_ingest(ingest_files, ingest_config, ingest_out);
  } catch (const darkpool::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const darkpool::IngestError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
