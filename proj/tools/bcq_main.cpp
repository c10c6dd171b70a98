#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bcq/cli.hpp"

namespace {

bcq::Json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw bcq::ValidationError("cannot open config file \"" + path + "\"");
  bcq::Json j;
  in >> j;
  return j;
}

int emit(const bcq::cli::Outcome& outcome, const std::string& out_path) {
  if (!outcome.error.empty()) {
    std::cerr << "error: " << outcome.error << "\n";
    return outcome.exit_code;
  }
  const std::string body =
      outcome.csv.empty() ? outcome.output.dump(2) + "\n" : outcome.csv;
  if (out_path.empty()) {
    std::cout << body;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write \"" << out_path << "\"\n";
      return bcq::cli::kExitConfigError;
    }
    out << body;
  }
  return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact certificates for quantitative Borel-Cantelli theorems"};
  app.require_subcommand(1);

  std::string theorem, quantity, axis, range, config_path, out_path;

  auto* check = app.add_subcommand("check", "run theorem checks over a parameter grid");
  check->add_option("theorem", theorem, "theorem tag (e.g. second-bc)")->required();
  check->add_option("--config", config_path, "config JSON file")->required();
  check->add_option("--out", out_path, "output file (default: stdout)");

  auto* sweep = app.add_subcommand("sweep", "emit a CSV parameter sweep");
  sweep->add_option("quantity", quantity, "die-power | first-bc-margin | wn")->required();
  sweep->add_option("--axis", axis, "axis parameter name")->required();
  sweep->add_option("--range", range, "axis range a..b")->required();
  sweep->add_option("--config", config_path, "config JSON file")->required();
  sweep->add_option("--out", out_path, "output file (default: stdout)");

  auto* specker = app.add_subcommand("specker", "run the Specker reduction demonstration");
  specker->add_option("--config", config_path, "config JSON file")->required();
  specker->add_option("--out", out_path, "output file (default: stdout)");

  auto* odiff = app.add_subcommand("oracle-diff", "compare closed forms against brute force");
  odiff->add_option("--config", config_path, "config JSON file")->required();
  odiff->add_option("--out", out_path, "output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    const bcq::Json config = load_config(config_path);
    bcq::cli::Outcome outcome;
    if (check->parsed()) {
      outcome = bcq::cli::run_check(theorem, config);
    } else if (sweep->parsed()) {
      const auto sep = range.find("..");
      if (sep == std::string::npos) {
        std::cerr << "error: --range must look like a..b\n";
        return bcq::cli::kExitConfigError;
      }
      const std::uint64_t lo = std::stoull(range.substr(0, sep));
      const std::uint64_t hi = std::stoull(range.substr(sep + 2));
      outcome = bcq::cli::run_sweep(quantity, axis, lo, hi, config);
    } else if (specker->parsed()) {
      outcome = bcq::cli::run_specker(config);
    } else {
      outcome = bcq::cli::run_oracle_diff(config);
    }
    return emit(outcome, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return bcq::cli::kExitConfigError;
  }
}
