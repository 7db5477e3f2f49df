#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "darkpool/config.h"
#include "darkpool/scenario.h"

using namespace darkpool;
namespace fs = std::filesystem;

namespace {

const char* kIid =
    "regime = iid\n"
    "pools.rebate = 0.01, 0.03, 0.05\n"
    "iid.volume_mean = 9\n"
    "iid.volume_variance = 1\n"
    "iid.deliverable_mean = 1, 2, 3\n"
    "iid.deliverable_variance = 1, 1, 1\n"
    "run.steps = 2000\n"
    "run.seed = 5\n";

KeyValueFile parse(const std::string& text) {
  std::istringstream in(text);
  return KeyValueFile::parse(in, "test.cfg");
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("darkpool_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(KeyValue, ParsesListsAndMatrices) {
  const KeyValueFile f = parse("a = 1, 2.5 # trailing\n# comment\nm = 1, 2; 3, 4\nflag = yes\n");
  EXPECT_EQ(f.get_list("a"), (std::vector<double>{1.0, 2.5}));
  const Eigen::MatrixXd m = f.get_matrix("m");
  EXPECT_EQ(m(1, 0), 3.0);
  EXPECT_TRUE(f.get_bool("flag", false));
  EXPECT_EQ(f.line_of("m"), 3u);
}

TEST(KeyValue, ErrorsCarryLines) {
  try {
    parse("a = 1\nnot a pair\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  try {
    parse("a = 1\nb = 2\na = 3\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  const KeyValueFile f = parse("x = 1\ny = abc\n");
  try {
    f.get_double("y");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("y"), std::string::npos);
  }
}

TEST(Scenario, UnknownKeyIsRejected) {
  try {
    load_scenario(parse(std::string(kIid) + "algo.cc = 3\n"));
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 9u);
    EXPECT_NE(std::string(e.what()).find("algo.cc"), std::string::npos);
  }
}

TEST(Scenario, CrossFieldChecks) {
  EXPECT_THROW(load_scenario(parse(std::string(kIid) + "algo.beta = 0.4\n")), ConfigError);
  EXPECT_THROW(load_scenario(parse("regime = iid\npools.rebate = 0.1, 0.2\n"
                                   "iid.volume_mean = 9\niid.volume_variance = 1\n"
                                   "iid.deliverable_mean = 1\niid.deliverable_variance = 1\n")),
               ConfigError);
  EXPECT_THROW(load_scenario(parse("regime = nope\n")), ConfigError);
}

TEST(Scenario, LoadsFileWithOverrides) {
  const fs::path dir = scratch("overrides");
  std::ofstream(dir / "s.cfg") << kIid;
  ScenarioOverrides o;
  o.seed = 99;
  o.replications = 3;
  o.out_dir = (dir / "o").string();
  const ScenarioConfig c = load_scenario_file((dir / "s.cfg").string(), o);
  EXPECT_EQ(c.seed, 99u);
  EXPECT_EQ(c.replications, 3u);
  EXPECT_EQ(c.out_dir, (dir / "o").string());
  EXPECT_EQ(c.pools.size(), 3u);
}

TEST(Scenario, RunIsDeterministic) {
  const fs::path dir = scratch("determinism");
  ScenarioConfig c = load_scenario(parse(std::string(kIid) + "run.replications = 2\n"));
  c.out_dir = (dir / "a").string();
  run_scenario(c);
  c.out_dir = (dir / "b").string();
  run_scenario(c);
  for (const char* f : {"rep0/series.csv", "rep1/smoothed.csv"}) {
    EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f));
  }
  EXPECT_NE(slurp(dir / "a/rep0/series.csv").substr(200), slurp(dir / "a/rep1/series.csv").substr(200));
  const auto js = nlohmann::json::parse(slurp(dir / "a/summary.json"));
  ASSERT_EQ(js["replications"].size(), 2u);
  EXPECT_NE(js["replications"][0]["stream_checksum"], js["replications"][1]["stream_checksum"]);
  EXPECT_EQ(js["master_seed"], 5);
}

TEST(Scenario, ReplicationSeedsDiffer) {
  EXPECT_NE(replication_seed(1, 0), replication_seed(1, 1));
  EXPECT_EQ(replication_seed(1, 0), replication_seed(1, 0));
}

TEST(Scenario, SyntheticDayStarts) {
  ScenarioConfig c = load_scenario(parse(std::string(kIid) + "run.steps_per_day = 500\n"));
  const GeneratedStream s = generate_stream(c, 1, 2000);
  EXPECT_EQ(s.day_starts, (std::vector<std::size_t>{0, 500, 1000, 1500}));
}

TEST(Diagnostics, SpectraAndMissingFixture) {
  const fs::path dir = scratch("diag");
  ScenarioConfig c = load_scenario(parse(std::string(kIid) + "analysis.a = 1, 1, 1\n"));
  c.out_dir = dir.string();
  const auto js = nlohmann::json::parse(run_diagnostic(c, "spectra"));
  EXPECT_EQ(js["kernel_dimension"], 1);
  EXPECT_TRUE(fs::exists(dir / "diag_spectra.json"));
  try {
    run_diagnostic(c, "clt");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("fixture.lambda"), std::string::npos);
  }
  EXPECT_THROW(run_diagnostic(c, "bogus"), ConfigError);
}

TEST(Diagnostics, ConditionOnClosedFormConfig) {
  const fs::path dir = scratch("diag_cf");
  ScenarioConfig c = load_scenario_file(std::string(DARKPOOL_CONFIG_DIR) + "/closed_form.cfg",
                                        {std::nullopt, dir.string(), std::nullopt});
  c.analysis_samples = 20000;
  const auto js = nlohmann::json::parse(run_diagnostic(c, "condition-c"));
  EXPECT_EQ(js["verdict"], "C_strict");
  const auto clt = nlohmann::json::parse(run_diagnostic(c, "clt"));
  EXPECT_LT(clt["residual"].get<double>(), 1e-10);
}
