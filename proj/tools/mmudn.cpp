// Command-line front end: blockage, se, simulate, allocate, sweep.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mmudn/commands.hpp"
#include "mmudn/errors.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericError = 3;

struct Options {
  std::string config_path;
  std::string output_path;
  std::string format = "csv";
  std::vector<std::string> overrides;
  std::string seed;
  std::string threads;
  std::string input;
  std::string tier;
  std::string direction;
  std::string lambda_hat;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config_path, "key=value configuration file");
  cmd->add_option("--output", o.output_path, "output file (default: stdout)");
  cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--threads", o.threads, "worker threads (0 = all cores)");
  cmd->add_option("--set", o.overrides, "override key=value (repeatable)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mmW overlaid ultra-dense network laboratory"};
  app.require_subcommand(1);
  Options o;
  auto* blockage = app.add_subcommand("blockage", "blockage parameters from building statistics");
  auto* se = app.add_subcommand("se", "analytic spectral efficiency asymptotes and bounds");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo spectral efficiency at one operating point");
  auto* allocate = app.add_subcommand("allocate", "UL/DL allocation sweep with and without decoupling");
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo spectral efficiency over a density-ratio grid");
  for (auto* cmd : {blockage, se, simulate, allocate, sweep}) add_common(cmd, o);
  blockage->add_option("--input", o.input, "building statistics CSV");
  for (auto* cmd : {simulate, sweep}) {
    cmd->add_option("--tier", o.tier, "mmw or muw");
    cmd->add_option("--direction", o.direction, "dl or ul");
  }
  simulate->add_option("--lambda-hat", o.lambda_hat, "BS-to-user density ratio of the tier");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kConfigError;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  mmudn::Table table;
  try {
    mmudn::Config config;
    if (!o.config_path.empty()) config.load_file(o.config_path);
    for (const auto& ov : o.overrides) config.apply_override(ov);
    if (!o.seed.empty()) config.set("seed", o.seed);
    if (!o.threads.empty()) config.set("threads", o.threads);
    if (!o.input.empty()) config.set("input_csv", o.input);
    if (!o.tier.empty()) config.set("tier", o.tier);
    if (!o.direction.empty()) config.set("direction", o.direction);
    if (!o.lambda_hat.empty()) config.set("lambda_hat", o.lambda_hat);
    table = mmudn::run_command(command, config);
  } catch (const mmudn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const mmudn::ParameterError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const mmudn::DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const mmudn::NumericError& e) {
    std::cerr << "numeric error in " << command << ": " << e.what() << '\n';
    return kNumericError;
  } catch (const mmudn::AssumptionError& e) {
    std::cerr << "numeric error in " << command << ": " << e.what() << '\n';
    return kNumericError;
  }

  for (const auto& [key, value] : table.derived) {
    if (key.rfind("warning", 0) == 0) std::cerr << "warning: " << value << '\n';
  }
  const auto format = o.format == "json" ? mmudn::TableFormat::Json : mmudn::TableFormat::Csv;
  std::ostringstream buffer;
  mmudn::write_table(buffer, table, format);
  if (o.output_path.empty()) {
    std::cout << buffer.str();
  } else {
    std::ofstream out(o.output_path, std::ios::binary);
    if (!out) {
      std::cerr << "config error: cannot write " << o.output_path << '\n';
      return kConfigError;
    }
    out << buffer.str();
  }
  return 0;
}
