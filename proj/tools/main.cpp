// Copyright (c) 2026 interp-lab developers.
// SPDX-License-Identifier: Apache-2.0
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "interp/errors.hpp"
#include "interp/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"interp-lab: deterministic quantum-interpretation experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  auto* run_cmd = app.add_subcommand("run", "execute an experiment config");
  run_cmd->add_option("config", config_path, "config JSON file")->required();
  auto* seed_opt = run_cmd->add_option("--seed", seed, "override the config seed");
  auto* out_opt = run_cmd->add_option("--out", out_dir, "output directory");

  std::string dir_a, dir_b;
  auto* cmp_cmd = app.add_subcommand("compare", "diff two completed run directories");
  cmp_cmd->add_option("dir_a", dir_a, "first run directory")->required();
  cmp_cmd->add_option("dir_b", dir_b, "second run directory")->required();

  std::string validate_path;
  auto* val_cmd = app.add_subcommand("validate", "check a config without running it");
  val_cmd->add_option("config", validate_path, "config JSON file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      auto config = interp::experiment::load_config(config_path);
      std::optional<std::uint64_t> seed_override;
      if (seed_opt->count() > 0) seed_override = seed;
      std::optional<std::filesystem::path> out_override;
      if (out_opt->count() > 0) out_override = out_dir;
      const auto info = interp::experiment::run(config, seed_override, out_override);
      std::cout << "run complete: " << info.dir.string() << "\n";
    } else if (cmp_cmd->parsed()) {
      const auto rep = interp::experiment::compare_runs(dir_a, dir_b);
      std::cout << rep.details.dump(2) << "\n";
    } else {
      interp::experiment::load_config(validate_path);
      std::cout << "valid\n";
    }
  } catch (const interp::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
