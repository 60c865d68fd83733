#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif
#include <nlohmann/json.hpp>

#include "latstab/error.hpp"
#include "latstab/harness.hpp"

namespace {

using latstab::harness::ExitCode;
using latstab::harness::Format;
using latstab::harness::RunConfig;

void add_parameters(CLI::App& app, RunConfig& cfg, std::string& config_path) {
  app.add_option("--example", cfg.example, "Example number for verify (1-4)");
  app.add_option("--lambda", cfg.lambda, "Scale lambda");
  app.add_option("--gamma", cfg.gamma, "Stability exponent gamma");
  app.add_option("--alpha", cfg.alpha, "Two-sided exponent alpha");
  app.add_option("--lambda1", cfg.lambda1, "Right-side scale");
  app.add_option("--lambda2", cfg.lambda2, "Left-side scale");
  app.add_option("--a1", cfg.a1, "Hermite rate of unit jumps");
  app.add_option("--a2", cfg.a2, "Hermite rate of double jumps");
  app.add_option("--a", cfg.a, "Target rate a");
  app.add_option("--A", cfg.A, "Base Poisson rate A");
  app.add_option("--mu", cfg.mu, "Shifted-Poisson count mean");
  app.add_option("--p", cfg.p, "Shifted-geometric success probability");
  app.add_option("--tolerance", cfg.tolerance, "Verdict tolerance");
  app.add_option("--n", cfg.n, "Single row index n");
  app.add_option("--n-max", cfg.n_max, "Largest n");
  app.add_option("--grid", cfg.grid, "DFT grid size (power of two)");
  app.add_option("--samples", cfg.samples, "Number of draws");
  app.add_option("--seed", cfg.seed, "RNG seed");
  app.add_option("--out", cfg.out, "Output file");
  app.add_option("--family", cfg.family,
                 "invert: positive-stable | symmetric-stable | two-sided-stable | hermite | "
                 "poisson | compound-poisson | example2-normalizer");
  app.add_option("--law", cfg.law, "sample: poisson | discrete-stable | hermite | theorem1-row");
  app.add_option("--count-law", cfg.count_law,
                 "unit | shifted-poisson | shifted-geometric | hermite");
  app.add_option("--jump", cfg.jump, "unit | hermite");
  const std::map<std::string, Format> formats{{"csv", Format::csv}, {"json", Format::json}};
  app.add_option("--format", cfg.format, "Output format")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  app.add_option("--config", config_path, "JSON file with default parameters");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Casual-composition representations of discrete stable laws"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  std::string config_path;
  add_parameters(app, cfg, config_path);

  const std::map<std::string, std::string> commands = {
      {"verify", "Check a casual-composition representation against its target CF"},
      {"nonunique", "Two distinct bases representing the same law"},
      {"converge", "Row-sum convergence to the compound Poisson limit"},
      {"invert", "Recover a PMF window from a lattice CF"},
      {"sample", "Draw a batch and compare it with the exact PMF"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(ExitCode::usage_error);
  }
  cfg.command = app.get_subcommands().front()->get_name();

  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "usage error: cannot read config " << config_path << '\n';
      return static_cast<int>(ExitCode::usage_error);
    }
    try {
      latstab::harness::merge_config_json(cfg, nlohmann::json::parse(in));
    } catch (const std::exception& e) {
      std::cerr << "usage error: " << e.what() << '\n';
      return static_cast<int>(ExitCode::usage_error);
    }
  }
  return latstab::harness::run(cfg, std::cout, std::cerr);
}
