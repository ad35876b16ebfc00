// Copyright (c) 2026 interp-lab developers.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "interp/bell.hpp"
#include "interp/bohm.hpp"
#include "interp/branch_stats.hpp"
#include "interp/core_field.hpp"
#include "interp/jumper.hpp"
#include "interp/tensor_state.hpp"

namespace interp::io {

using json = nlohmann::ordered_json;

// All floating-point output goes through this (17 significant digits), so
// repeated runs produce byte-identical files.
std::string fmt(double v);

std::uint64_t fnv1a(std::string_view s);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

void write_json(const std::filesystem::path& path, const json& j);
json read_json(const std::filesystem::path& path);  // ValidationError on bad parse

// field CSV columns: x, re_psi, im_psi; sidecar JSON (same stem, .json)
// holds {grid, t, hbar, mass}.
void write_wavefield(const std::filesystem::path& csv_path, const core::WaveField& f);
core::WaveField read_wavefield(const std::filesystem::path& csv_path);

// columns: trajectory_id, t, x
void write_trajectories(const std::filesystem::path& path,
                        const std::vector<bohm::Trajectory>& trajectories);

// single named column
void write_samples(const std::filesystem::path& path, const std::string& column,
                   const std::vector<double>& values);
std::vector<double> read_samples(const std::filesystem::path& path);

// columns: t, value, basis
void write_jump_record(const std::filesystem::path& path, const jump::JumpRecord& rec);

// columns: t, label, angle
void write_pair_record(const std::filesystem::path& path,
                       const bell::PairJumpRecord& rec);

// columns: n_t, w, counting_fraction, born_weight
void write_distribution(const std::filesystem::path& path,
                        const std::vector<branches::DistributionRow>& rows);

json tensor_state_json(const hilbert::TensorState& s);
hilbert::TensorState tensor_state_from_json(const json& j);

}  // namespace interp::io
