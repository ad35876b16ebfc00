// Copyright (c) 2026 interp-lab developers.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

namespace interp::experiment {

using json = nlohmann::ordered_json;

std::string project_version();

// Parse a config file; throws ValidationError naming the file or JSON path.
json load_config(const std::filesystem::path& path);

// Structural validation of a parsed config; throws ValidationError whose
// path component names the offending key (e.g. "/solver/dt").
void validate_config(const json& config);

struct RunInfo {
  std::filesystem::path dir;
  json summary;
};

// Execute a validated config. seed/out_dir, when given, override the config.
// Writes manifest.json, data files, and summary.json into the run directory.
RunInfo run(json config, std::optional<std::uint64_t> seed_override = {},
            std::optional<std::filesystem::path> out_override = {});

struct CompareReport {
  bool zero_diffs = false;
  json details;
};

// Aligned-statistic diff of two completed run directories; throws
// IncompatibleRuns when they do not describe the same physical setup.
CompareReport compare_runs(const std::filesystem::path& dir_a,
                           const std::filesystem::path& dir_b);

}  // namespace interp::experiment
