#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <wbansim/runner.hpp>

using namespace wbansim;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::path("runner_out") / name;
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("scenario command writes heatmaps, CDFs, report, and summary") {
  const fs::path dir = fresh_dir("scenario_default");
  RunConfig cfg;
  cfg.output_dir = dir.string();
  REQUIRE(run(cfg, Command::scenario) == exit_ok);

  for (const char* name : {"pd.csv", "sar.csv", "cdf_pd.csv", "cdf_sar.csv", "report.txt",
                           "summary.txt"}) {
    INFO(name);
    CHECK(fs::exists(dir / name));
    CHECK(fs::file_size(dir / name) > 0);
  }

  const std::string summary = slurp(dir / "summary.txt");
  CHECK(summary.find("command=scenario") != std::string::npos);
  CHECK(summary.find("scenario=relay_sweep") != std::string::npos);
  CHECK(summary.find("protocol=on") != std::string::npos);
  CHECK(summary.find("cells_evaluated=238") != std::string::npos);
  CHECK(summary.find("argmax_pd_cell=") != std::string::npos);
  CHECK(summary.find("assumed_defaults=") != std::string::npos);

  const std::string report = slurp(dir / "report.txt");
  CHECK(report.find("exposure compliance report") != std::string::npos);
  CHECK(report.find("samples: 238") != std::string::npos);
}

TEST_CASE("written heatmap CSVs parse back bit-identical") {
  const fs::path dir = fresh_dir("roundtrip");
  RunConfig cfg;
  cfg.output_dir = dir.string();
  cfg.protocol_enabled = false;
  REQUIRE(run(cfg, Command::scenario) == exit_ok);

  const SweepResult expected = run_sweep(cfg.make_scenario());
  std::ifstream in(dir / "pd.csv");
  const Heatmap loaded = read_heatmap_csv(in);
  CHECK(loaded.grid == expected.pd.grid);
  CHECK(loaded.scenario == expected.pd.scenario);
  CHECK(loaded.masked == expected.pd.masked);
  for (std::size_t i = 0; i < loaded.values.size(); ++i) {
    if (loaded.masked[i]) continue;
    REQUIRE(loaded.values[i] == expected.pd.values[i]);
  }
}

TEST_CASE("identical configs give byte-identical outputs") {
  const fs::path a = fresh_dir("repeat_a");
  const fs::path b = fresh_dir("repeat_b");
  RunConfig cfg;
  cfg.scenario = SweepKind::tx_sweep;
  cfg.output_dir = a.string();
  REQUIRE(run(cfg, Command::scenario) == exit_ok);
  cfg.output_dir = b.string();
  REQUIRE(run(cfg, Command::scenario) == exit_ok);
  for (const char* name : {"pd.csv", "sar.csv", "cdf_pd.csv", "cdf_sar.csv", "report.txt"}) {
    INFO(name);
    CHECK(slurp(a / name) == slurp(b / name));
  }
}

TEST_CASE("single command summarizes the route and exposure") {
  const fs::path dir = fresh_dir("single_default");
  RunConfig cfg;
  cfg.output_dir = dir.string();
  REQUIRE(run(cfg, Command::single) == exit_ok);
  const std::string summary = slurp(dir / "summary.txt");
  CHECK(summary.find("command=single") != std::string::npos);
  CHECK(summary.find("mode=multi_hop") != std::string::npos);
  CHECK(summary.find("reason=distance_rule") != std::string::npos);
  CHECK(summary.find("direct_rate_bps=1e+07") != std::string::npos);
  CHECK(summary.find("reduction_fraction=0.9999999") != std::string::npos);
}

TEST_CASE("emergency traffic goes direct in the single command") {
  const fs::path dir = fresh_dir("single_emergency");
  RunConfig cfg;
  cfg.traffic = Traffic::emergency;
  cfg.output_dir = dir.string();
  REQUIRE(run(cfg, Command::single) == exit_ok);
  const std::string summary = slurp(dir / "summary.txt");
  CHECK(summary.find("mode=single_hop") != std::string::npos);
  CHECK(summary.find("reason=emergency") != std::string::npos);
  CHECK(summary.find("reduction_db=0") != std::string::npos);
}

TEST_CASE("protocol-demo reports the reduction and both rates") {
  const fs::path dir = fresh_dir("demo");
  RunConfig cfg;
  cfg.output_dir = dir.string();
  REQUIRE(run(cfg, Command::protocol_demo) == exit_ok);
  const std::string summary = slurp(dir / "summary.txt");
  CHECK(summary.find("command=protocol-demo") != std::string::npos);
  CHECK(summary.find("direct_rate_bps=") != std::string::npos);
  CHECK(summary.find("multi_rate_before_bps=") != std::string::npos);
  CHECK(summary.find("multi_rate_after_bps=") != std::string::npos);
  CHECK(summary.find("reduction_fraction=") != std::string::npos);
  CHECK(summary.find("before_pd_w_per_m2=") != std::string::npos);
  CHECK(summary.find("after_pd_w_per_m2=") != std::string::npos);

  RunConfig no_relay = cfg;
  no_relay.relay.reset();
  no_relay.output_dir = fresh_dir("demo_no_relay").string();
  CHECK(run(no_relay, Command::protocol_demo) == exit_config_error);
}

TEST_CASE("invalid scenes fail validation before any file is written") {
  const fs::path dir = fresh_dir("invalid");
  RunConfig cfg;
  cfg.rx = cfg.tx;
  cfg.output_dir = dir.string();
  CHECK(run(cfg, Command::single) == exit_config_error);
  CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("the compliance gate trips only when asked") {
  RunConfig cfg;
  cfg.tx = NodePosition{5, 6};
  cfg.rx = NodePosition{6, 6};  // 1 cm from a 30 dBm transmitter
  cfg.relay.reset();
  cfg.tx_power_dbm = 30.0;

  cfg.output_dir = fresh_dir("gate_off").string();
  CHECK(run(cfg, Command::single) == exit_ok);

  cfg.output_dir = fresh_dir("gate_on").string();
  RunOptions opt;
  opt.fail_on_violation = true;
  CHECK(run(cfg, Command::single, opt) == exit_compliance_failure);
  // Outputs are still written; only the exit status differs.
  CHECK(fs::exists(fs::path(cfg.output_dir) / "summary.txt"));
}

TEST_CASE("run options override the config") {
  const fs::path dir = fresh_dir("overrides");
  RunConfig cfg;
  cfg.output_dir = "should_not_be_used";
  RunOptions opt;
  opt.output_dir = dir.string();
  opt.scenario_kind = SweepKind::rx_sweep;
  opt.no_protocol = true;
  REQUIRE(run(cfg, Command::scenario, opt) == exit_ok);
  CHECK_FALSE(fs::exists("should_not_be_used"));
  const std::string summary = slurp(dir / "summary.txt");
  CHECK(summary.find("scenario=rx_sweep") != std::string::npos);
  CHECK(summary.find("protocol=off") != std::string::npos);
}

TEST_CASE("unwritable output paths exit with a runtime error") {
  const fs::path blocker = fresh_dir("blocker_file");
  fs::create_directories(blocker.parent_path());
  { std::ofstream touch(blocker); }
  RunConfig cfg;
  cfg.output_dir = (blocker / "sub").string();  // path through a regular file
  CHECK(run(cfg, Command::single) == exit_runtime_error);
}

TEST_CASE("cdf csv round trip preserves the limit and samples") {
  const fs::path dir = fresh_dir("cdf");
  RunConfig cfg;
  cfg.output_dir = dir.string();
  REQUIRE(run(cfg, Command::scenario) == exit_ok);

  std::ifstream in(dir / "cdf_sar.csv");
  const EmpiricalCdf cdf = read_cdf_csv(in);
  CHECK(cdf.limit == cfg.limits.sar_head_fcc_w_per_kg);
  CHECK(cdf.values.size() == 238);
  CHECK(cdf.probabilities.back() == 1.0);
  CHECK(std::is_sorted(cdf.values.begin(), cdf.values.end()));
}
