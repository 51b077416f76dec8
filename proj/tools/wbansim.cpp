// Command-line front end: load a config, run one command, write results.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <wbansim/wbansim.hpp>

namespace {

bool parse_kind(const std::string& text, wbansim::SweepKind& kind) {
  if (text == "relay_sweep") kind = wbansim::SweepKind::relay_sweep;
  else if (text == "tx_sweep") kind = wbansim::SweepKind::tx_sweep;
  else if (text == "rx_sweep") kind = wbansim::SweepKind::rx_sweep;
  else return false;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Body-surface radio link and RF-exposure simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string kind_text;
  bool no_protocol = false;
  bool fail_on_violation = false;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "config file (key = value lines)");
    sub->add_option("--out", out_dir, "output directory (overrides output_dir)");
    sub->add_flag("--no-protocol", no_protocol, "skip the power-control protocol");
    sub->add_flag("--fail-on-violation", fail_on_violation,
                  "exit 3 when any SAR limit is violated");
  };

  CLI::App* scenario = app.add_subcommand(
      "scenario", "sweep one node over the grid; writes heatmaps, CDFs, and a report");
  scenario->add_option("kind", kind_text, "relay_sweep | tx_sweep | rx_sweep");
  add_common(scenario);

  CLI::App* single = app.add_subcommand("single", "evaluate one fixed scene");
  add_common(single);

  CLI::App* demo = app.add_subcommand(
      "protocol-demo", "run the rate-equalizing power reduction on one scene");
  add_common(demo);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return wbansim::exit_config_error;
  }

  wbansim::RunConfig cfg;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "config error: cannot open '" << config_path << "'\n";
      return wbansim::exit_config_error;
    }
    std::ostringstream text;
    text << in.rdbuf();
    try {
      cfg = wbansim::parse_config(text.str());
    } catch (const wbansim::ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return wbansim::exit_config_error;
    }
  }

  wbansim::RunOptions opt;
  opt.no_protocol = no_protocol;
  opt.fail_on_violation = fail_on_violation;
  if (!out_dir.empty()) opt.output_dir = out_dir;

  wbansim::Command cmd = wbansim::Command::single;
  if (scenario->parsed()) {
    cmd = wbansim::Command::scenario;
    if (!kind_text.empty()) {
      wbansim::SweepKind kind;
      if (!parse_kind(kind_text, kind)) {
        std::cerr << "config error: unknown scenario kind '" << kind_text
                  << "' (expected relay_sweep, tx_sweep, or rx_sweep)\n";
        return wbansim::exit_config_error;
      }
      opt.scenario_kind = kind;
    }
  } else if (demo->parsed()) {
    cmd = wbansim::Command::protocol_demo;
  }

  return wbansim::run(cfg, cmd, opt);
}
