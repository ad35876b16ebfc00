// Copyright (c) 2026 interp-lab developers.
// SPDX-License-Identifier: Apache-2.0
#include "interp/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "interp/errors.hpp"

namespace interp::io {

namespace {

std::filesystem::path sidecar(const std::filesystem::path& csv_path) {
  auto p = csv_path;
  p.replace_extension(".json");
  return p;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(where, "not a number: '" + s + "'");
  }
}

}  // namespace

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError(path.string(), "cannot open for writing");
  out << text;
  if (!out) throw ValidationError(path.string(), "write failed");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path.string(), "cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_json(const std::filesystem::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

json read_json(const std::filesystem::path& path) {
  const auto text = read_text(path);
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ValidationError(path.string(), "invalid JSON");
  return j;
}

void write_wavefield(const std::filesystem::path& csv_path, const core::WaveField& f) {
  std::string text = "x,re_psi,im_psi\n";
  for (int i = 0; i < f.grid.n_points; ++i) {
    const auto& a = f.psi[static_cast<std::size_t>(i)];
    text += fmt(f.grid.x(i));
    text += ',';
    text += fmt(a.real());
    text += ',';
    text += fmt(a.imag());
    text += '\n';
  }
  write_text(csv_path, text);

  json header;
  header["grid"] = {{"x_min", f.grid.x_min},
                    {"x_max", f.grid.x_max},
                    {"n_points", f.grid.n_points}};
  header["t"] = f.t;
  header["hbar"] = f.hbar;
  header["mass"] = f.mass;
  write_json(sidecar(csv_path), header);
}

core::WaveField read_wavefield(const std::filesystem::path& csv_path) {
  const auto header = read_json(sidecar(csv_path));
  for (const char* key : {"grid", "t", "hbar", "mass"})
    if (!header.contains(key))
      throw ValidationError(sidecar(csv_path).string(), std::string("missing key '") + key + "'");
  const auto& g = header["grid"];
  for (const char* key : {"x_min", "x_max", "n_points"})
    if (!g.contains(key))
      throw ValidationError(sidecar(csv_path).string(), std::string("missing key 'grid.") + key + "'");

  auto grid = core::Grid::make(g["x_min"].get<double>(), g["x_max"].get<double>(),
                               g["n_points"].get<int>());
  auto f = core::make_field(grid, header["hbar"].get<double>(),
                            header["mass"].get<double>());
  f.t = header["t"].get<double>();

  std::istringstream in(read_text(csv_path));
  std::string line;
  if (!std::getline(in, line) || split(line, ',').size() != 3)
    throw ValidationError(csv_path.string(), "expected header x,re_psi,im_psi");
  std::size_t i = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (i >= f.psi.size()) throw ValidationError(csv_path.string(), "more rows than grid points");
    const auto cols = split(line, ',');
    if (cols.size() != 3) throw ValidationError(csv_path.string(), "expected 3 columns");
    f.psi[i] = {parse_double(cols[1], csv_path.string()),
                parse_double(cols[2], csv_path.string())};
    ++i;
  }
  if (i != f.psi.size()) throw ValidationError(csv_path.string(), "fewer rows than grid points");
  return f;
}

void write_trajectories(const std::filesystem::path& path,
                        const std::vector<bohm::Trajectory>& trajectories) {
  std::string text = "trajectory_id,t,x\n";
  for (const auto& tr : trajectories) {
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
      text += std::to_string(tr.id);
      text += ',';
      text += fmt(tr.times[k]);
      text += ',';
      text += fmt(tr.positions[k]);
      text += '\n';
    }
  }
  write_text(path, text);
}

void write_samples(const std::filesystem::path& path, const std::string& column,
                   const std::vector<double>& values) {
  std::string text = column + "\n";
  for (double v : values) {
    text += fmt(v);
    text += '\n';
  }
  write_text(path, text);
}

std::vector<double> read_samples(const std::filesystem::path& path) {
  std::istringstream in(read_text(path));
  std::string line;
  if (!std::getline(in, line))
    throw ValidationError(path.string(), "empty samples file");
  std::vector<double> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(parse_double(split(line, ',').front(), path.string()));
  }
  return out;
}

void write_jump_record(const std::filesystem::path& path, const jump::JumpRecord& rec) {
  std::string text = "t,value,basis\n";
  const auto basis = jump::basis_name(rec.basis);
  for (std::size_t i = 0; i < rec.times.size(); ++i) {
    text += fmt(rec.times[i]);
    text += ',';
    text += fmt(rec.values[i]);
    text += ',';
    text += basis;
    text += '\n';
  }
  write_text(path, text);
}

void write_pair_record(const std::filesystem::path& path,
                       const bell::PairJumpRecord& rec) {
  std::string text = "t,label,angle\n";
  for (std::size_t i = 0; i < rec.times.size(); ++i) {
    text += fmt(rec.times[i]);
    text += ',';
    text += std::to_string(rec.labels[i]);
    text += ',';
    text += fmt(rec.angles[i]);
    text += '\n';
  }
  write_text(path, text);
}

void write_distribution(const std::filesystem::path& path,
                        const std::vector<branches::DistributionRow>& rows) {
  std::string text = "n_t,w,counting_fraction,born_weight\n";
  for (const auto& r : rows) {
    text += std::to_string(r.k);
    text += ',';
    text += r.w;
    text += ',';
    text += fmt(r.counting_fraction);
    text += ',';
    text += fmt(r.born_weight);
    text += '\n';
  }
  write_text(path, text);
}

json tensor_state_json(const hilbert::TensorState& s) {
  json j;
  j["dims"] = s.dims;
  j["names"] = s.names;
  j["labels"] = s.labels;
  json amps = json::array();
  for (const auto& a : s.amps) amps.push_back({a.real(), a.imag()});
  j["amplitudes"] = std::move(amps);
  return j;
}

hilbert::TensorState tensor_state_from_json(const json& j) {
  for (const char* key : {"dims", "names", "labels", "amplitudes"})
    if (!j.contains(key))
      throw ValidationError("tensor_state", std::string("missing key '") + key + "'");
  auto s = hilbert::TensorState::make(j["dims"].get<std::vector<int>>(),
                                      j["names"].get<std::vector<std::string>>(),
                                      j["labels"].get<std::vector<std::vector<std::string>>>());
  const auto& amps = j["amplitudes"];
  if (!amps.is_array() || amps.size() != s.amps.size())
    throw ValidationError("tensor_state.amplitudes", "wrong amplitude count");
  for (std::size_t i = 0; i < s.amps.size(); ++i) {
    if (!amps[i].is_array() || amps[i].size() != 2)
      throw ValidationError("tensor_state.amplitudes", "entries must be [re, im]");
    s.amps[i] = {amps[i][0].get<double>(), amps[i][1].get<double>()};
  }
  return s;
}

}  // namespace interp::io
