// Copyright (c) 2026 interp-lab developers.
// SPDX-License-Identifier: Apache-2.0
//
// File formats, config validation, run artifacts, and the compare pipeline.
// CLI exit codes are exercised through the installed binary via std::system.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <doctest.h>
#include <json.hpp>

#include "interp/bohm.hpp"
#include "interp/branch_stats.hpp"
#include "interp/core_field.hpp"
#include "interp/errors.hpp"
#include "interp/experiment.hpp"
#include "interp/io.hpp"
#include "interp/jumper.hpp"
#include "interp/tensor_state.hpp"

using namespace interp;
namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

fs::path fresh_dir(const std::string& tag) {
  const auto p = fs::temp_directory_path() / ("interp_lab_test_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

// Minimal valid config per kind; tests mutate copies of these.
json chain_config(std::uint64_t seed) {
  json c;
  c["schema_version"] = 1;
  c["kind"] = "chain";
  c["seed"] = seed;
  c["chain"] = {{"alpha", 0.6}, {"beta", 0.8}};
  return c;
}

json solve_config(std::uint64_t seed, int n_points) {
  json c;
  c["schema_version"] = 1;
  c["kind"] = "solve";
  c["seed"] = seed;
  c["grid"] = {{"x_min", -16.0}, {"x_max", 16.0}, {"n_points", n_points}};
  c["initial_state"] =
      {{"kind", "gaussian"}, {"x0", 0.0}, {"sigma0", 1.5}, {"k0", 0.5}};
  c["potential"] = {{"kind", "free"}};
  c["solver"] = {{"method", "split_step"},
                 {"dt", 1e-3},
                 {"n_steps", 200},
                 {"output_every", 50}};
  return c;
}

// Shared evolution for the bohm-vs-jump comparison: a broad packet evolved
// briefly, so both samplers target the same final density.
json sampled_config(const std::string& kind, std::uint64_t seed) {
  json c;
  c["schema_version"] = 1;
  c["kind"] = kind;
  c["seed"] = seed;
  c["grid"] = {{"x_min", -20.0}, {"x_max", 20.0}, {"n_points", 1024}};
  c["initial_state"] =
      {{"kind", "gaussian"}, {"x0", 0.0}, {"sigma0", 2.0}, {"k0", 0.0}};
  c["potential"] = {{"kind", "free"}};
  c["solver"] = {{"method", "split_step"},
                 {"dt", 2e-3},
                 {"n_steps", 100},
                 {"output_every", 10}};
  if (kind == "bohm")
    c["bohm"] = {{"n_trajectories", 3000}, {"paths_recorded", 4}};
  if (kind == "jump")
    c["jump"] = {{"basis", "position"}, {"rate", 1.0}, {"n_samples", 3000}};
  return c;
}

int cli(const std::string& args) {
  const std::string cmd =
      std::string(INTERP_CLI_PATH) + " " + args + " >/dev/null 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

int cli_stderr(const std::string& args, const fs::path& err_file) {
  const std::string cmd = std::string(INTERP_CLI_PATH) + " " + args +
                          " >/dev/null 2>" + err_file.string();
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) { return io::read_text(p); }

}  // namespace

TEST_SUITE_BEGIN("io_experiment");

TEST_CASE("fmt round trips doubles through text exactly") {
  const double values[] = {1.0 / 3.0, 0.1,      1e-300, 1e300,
                           3.141592653589793,   5e-324, 0.0,
                           12345678901234567.0, -2.5};
  for (double v : values) {
    const auto s = io::fmt(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(io::fmt(1.0) == "1");
  CHECK(io::fmt(0.5) == "0.5");
}

TEST_CASE("wavefield csv round trip is bitwise exact") {
  const auto dir = fresh_dir("wavefield_rt");
  const auto g = core::Grid::make(-8.0, 8.0, 64);
  auto f = core::make_field(g);
  for (int i = 0; i < g.n_points; ++i) {
    const double x = g.x(i);
    f.psi[static_cast<std::size_t>(i)] = {std::exp(-x * x / 3.0) * std::cos(x),
                                          std::sin(0.7 * x) / 3.0};
  }
  f.t = 0.375;
  f.hbar = 1.0;
  f.mass = 2.0;

  const auto csv = dir / "psi.csv";
  io::write_wavefield(csv, f);
  CHECK(fs::exists(dir / "psi.json"));

  const auto back = io::read_wavefield(csv);
  CHECK(back.grid.x_min == f.grid.x_min);
  CHECK(back.grid.x_max == f.grid.x_max);
  CHECK(back.grid.n_points == f.grid.n_points);
  CHECK(back.t == f.t);
  CHECK(back.hbar == f.hbar);
  CHECK(back.mass == f.mass);
  REQUIRE(back.psi.size() == f.psi.size());
  for (std::size_t i = 0; i < f.psi.size(); ++i) CHECK(back.psi[i] == f.psi[i]);
}

TEST_CASE("wavefield reader rejects malformed input") {
  const auto dir = fresh_dir("wavefield_bad");
  const auto g = core::Grid::make(0.0, 1.0, 8);
  auto f = core::make_field(g);
  io::write_wavefield(dir / "ok.csv", f);
  const auto good_csv = slurp(dir / "ok.csv");
  const auto good_sidecar = slurp(dir / "ok.json");

  CHECK_THROWS_AS(io::read_wavefield(dir / "absent.csv"), ValidationError);

  io::write_text(dir / "no_sidecar.csv", good_csv);
  CHECK_THROWS_AS(io::read_wavefield(dir / "no_sidecar.csv"), ValidationError);

  auto write_pair = [&](const std::string& name, const std::string& csv,
                        const std::string& sidecar) {
    io::write_text(dir / (name + ".csv"), csv);
    io::write_text(dir / (name + ".json"), sidecar);
  };

  write_pair("bad_header", "x,psi\n0,0,0\n", good_sidecar);
  CHECK_THROWS_AS(io::read_wavefield(dir / "bad_header.csv"), ValidationError);

  write_pair("short", "x,re_psi,im_psi\n0,1,0\n", good_sidecar);
  CHECK_THROWS_AS(io::read_wavefield(dir / "short.csv"), ValidationError);

  std::string two_cols = "x,re_psi,im_psi\n";
  for (int i = 0; i < 8; ++i) two_cols += "0,1\n";
  write_pair("cols", two_cols, good_sidecar);
  CHECK_THROWS_AS(io::read_wavefield(dir / "cols.csv"), ValidationError);

  std::string bad_num = "x,re_psi,im_psi\n";
  for (int i = 0; i < 8; ++i) bad_num += "0,one,0\n";
  write_pair("num", bad_num, good_sidecar);
  CHECK_THROWS_AS(io::read_wavefield(dir / "num.csv"), ValidationError);

  write_pair("keys", good_csv, "{\"t\": 0.0}\n");
  CHECK_THROWS_AS(io::read_wavefield(dir / "keys.csv"), ValidationError);
}

TEST_CASE("samples file round trip and failure modes") {
  const auto dir = fresh_dir("samples");
  const std::vector<double> xs = {1.0 / 3.0, -2.75, 1e-12, 7.0, 0.1};
  io::write_samples(dir / "s.csv", "x", xs);

  const auto text = slurp(dir / "s.csv");
  CHECK(text.substr(0, 2) == "x\n");

  const auto back = io::read_samples(dir / "s.csv");
  REQUIRE(back.size() == xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(back[i] == xs[i]);

  CHECK_THROWS_AS(io::read_samples(dir / "absent.csv"), ValidationError);
  io::write_text(dir / "empty.csv", "");
  CHECK_THROWS_AS(io::read_samples(dir / "empty.csv"), ValidationError);
  io::write_text(dir / "garbled.csv", "x\nnot_a_number\n");
  CHECK_THROWS_AS(io::read_samples(dir / "garbled.csv"), ValidationError);
}

TEST_CASE("record writers emit the documented columns") {
  const auto dir = fresh_dir("writers");

  jump::JumpRecord jr;
  jr.basis = jump::Basis::position;
  jr.times = {0.0, 0.5};
  jr.values = {1.25, -3.0};
  io::write_jump_record(dir / "j.csv", jr);
  CHECK(slurp(dir / "j.csv") == "t,value,basis\n0,1.25,position\n0.5,-3,position\n");

  bell::PairJumpRecord pr;
  pr.times = {0.0};
  pr.labels = {1};
  pr.angles = {0.5};
  io::write_pair_record(dir / "p.csv", pr);
  CHECK(slurp(dir / "p.csv") == "t,label,angle\n0,1,0.5\n");

  branches::DistributionRow row;
  row.k = 3;
  row.w = "10";
  row.counting_fraction = 0.25;
  row.born_weight = 0.125;
  io::write_distribution(dir / "d.csv", {row});
  CHECK(slurp(dir / "d.csv") ==
        "n_t,w,counting_fraction,born_weight\n3,10,0.25,0.125\n");

  bohm::Trajectory tr;
  tr.id = 7;
  tr.times = {0.0, 1.0};
  tr.positions = {0.25, 0.75};
  io::write_trajectories(dir / "t.csv", {tr});
  CHECK(slurp(dir / "t.csv") == "trajectory_id,t,x\n7,0,0.25\n7,1,0.75\n");
}

TEST_CASE("tensor state json round trip and validation") {
  const auto dir = fresh_dir("tensor_json");
  auto s = hilbert::TensorState::make({2, 2}, {"sys", "env"},
                                      {{"0", "1"}, {"g", "e"}});
  s.amps[0] = {std::sqrt(0.3), 0.1};
  s.amps[3] = {-0.5, std::sqrt(0.2)};

  const auto j = io::tensor_state_json(s);
  io::write_json(dir / "state.json", j);
  const auto back = io::tensor_state_from_json(io::read_json(dir / "state.json"));
  CHECK(back.dims == s.dims);
  CHECK(back.names == s.names);
  CHECK(back.labels == s.labels);
  REQUIRE(back.amps.size() == s.amps.size());
  for (std::size_t i = 0; i < s.amps.size(); ++i) CHECK(back.amps[i] == s.amps[i]);

  auto missing = j;
  missing.erase("dims");
  CHECK_THROWS_AS(io::tensor_state_from_json(missing), ValidationError);

  auto short_amps = j;
  short_amps["amplitudes"].erase(0);
  CHECK_THROWS_AS(io::tensor_state_from_json(short_amps), ValidationError);

  auto bad_entry = j;
  bad_entry["amplitudes"][0] = {1.0};
  CHECK_THROWS_AS(io::tensor_state_from_json(bad_entry), ValidationError);
}

TEST_CASE("read_json rejects unparsable text") {
  const auto dir = fresh_dir("bad_json");
  io::write_text(dir / "broken.json", "{ \"a\": ");
  CHECK_THROWS_AS(io::read_json(dir / "broken.json"), ValidationError);
  CHECK_THROWS_AS(io::read_json(dir / "absent.json"), ValidationError);
}

TEST_CASE("every bundled config validates") {
  int n_configs = 0;
  for (const auto& entry : fs::directory_iterator(INTERP_CONFIGS_DIR)) {
    if (entry.path().extension() != ".json") continue;
    if (entry.path().filename() == "config.schema.json") continue;
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(experiment::load_config(entry.path()));
    ++n_configs;
  }
  CHECK(n_configs >= 10);
}

TEST_CASE("config rejection names the offending json path") {
  const auto base =
      experiment::load_config(fs::path(INTERP_CONFIGS_DIR) / "harmonic.json");

  auto path_of = [](const json& config) -> std::string {
    try {
      experiment::validate_config(config);
    } catch (const ValidationError& e) {
      return e.path;
    }
    return "";
  };

  auto c = base;
  c.erase("seed");
  CHECK(path_of(c) == "/seed");

  c = base;
  c["seed"] = -4;
  CHECK(path_of(c) == "/seed");

  c = base;
  c["schema_version"] = 2;
  CHECK(path_of(c) == "/schema_version");

  c = base;
  c["kind"] = "warp";
  CHECK(path_of(c) == "/kind");

  c = base;
  c["solver"]["dt"] = -1.0;
  CHECK(path_of(c) == "/solver/dt");

  c = base;
  c["solver"].erase("n_steps");
  CHECK(path_of(c) == "/solver/n_steps");

  c = base;
  c["grid"]["n_points"] = 4;
  CHECK(path_of(c) == "/grid/n_points");

  c = base;
  c["initial_state"]["kind"] = "plane";
  CHECK(path_of(c) == "/initial_state/kind");

  c = base;
  c["output_dir"] = 12;
  CHECK(path_of(c) == "/output_dir");

  CHECK(path_of(json::array()) == "/");

  json bell_bad = {{"schema_version", 1}, {"kind", "bell"}, {"seed", 1},
                   {"bell", json::object()}};
  CHECK(path_of(bell_bad) == "/bell/angle_a");

  CHECK_THROWS_AS(experiment::load_config(fs::temp_directory_path() /
                                          "interp_lab_test_no_such.json"),
                  ValidationError);
}

TEST_CASE("run writes summary and manifest with overrides applied") {
  const auto dir = fresh_dir("run_chain");
  const auto info = experiment::run(chain_config(42), 777, dir);
  CHECK(info.dir == dir);
  CHECK(info.summary.at("kind") == "chain");
  CHECK(info.summary.at("seed") == 777);
  CHECK(fs::exists(dir / "state.json"));

  const auto on_disk = io::read_json(dir / "summary.json");
  CHECK(on_disk == info.summary);

  const auto manifest = io::read_json(dir / "manifest.json");
  CHECK(manifest.at("version") == experiment::project_version());
  CHECK(manifest.at("kind") == "chain");
  CHECK(manifest.at("seed") == 777);
  CHECK(manifest.at("config_hash").get<std::string>().size() == 16);
  CHECK(manifest.at("wall_time_seconds").is_number());
  CHECK(manifest.at("config").at("seed") == 777);

  // Without overrides the config's own output_dir and seed are honored.
  const auto dir2 = fresh_dir("run_chain_cfg");
  auto cfg = chain_config(42);
  cfg["output_dir"] = dir2.string();
  const auto info2 = experiment::run(cfg, std::nullopt, std::nullopt);
  CHECK(info2.dir == dir2);
  CHECK(info2.summary.at("seed") == 42);
}

TEST_CASE("same config and seed produce byte-identical artifacts") {
  const auto dir_a = fresh_dir("det_a");
  const auto dir_b = fresh_dir("det_b");
  const auto cfg = solve_config(11, 256);
  experiment::run(cfg, std::nullopt, dir_a);
  experiment::run(cfg, std::nullopt, dir_b);

  for (const char* name :
       {"psi_initial.csv", "psi_final.csv", "observables.csv", "summary.json"}) {
    CAPTURE(name);
    REQUIRE(fs::exists(dir_a / name));
    REQUIRE(fs::exists(dir_b / name));
    CHECK(slurp(dir_a / name) == slurp(dir_b / name));
  }
  // Manifests exist but carry wall-clock timings, so they are not compared.
  CHECK(fs::exists(dir_a / "manifest.json"));
}

TEST_CASE("comparing a run against itself reports zero diffs") {
  const auto dir = fresh_dir("self_cmp");
  experiment::run(sampled_config("bohm", 21), std::nullopt, dir);
  CHECK(fs::exists(dir / "trajectories.csv"));
  CHECK(fs::exists(dir / "final_positions.csv"));

  const auto rep = experiment::compare_runs(dir, dir);
  CHECK(rep.zero_diffs);
  CHECK(rep.details.at("field_max_diff") == 0.0);
  CHECK(rep.details.at("field_l2_diff") == 0.0);
  CHECK(rep.details.at("two_sample_ks") == 0.0);
  CHECK(rep.details.at("two_sample_pvalue").get<double>() > 0.99);
  CHECK(rep.details.at("run_a").at("kind") == "bohm");
}

TEST_CASE("bohm and jump runs agree on the final-density statistics") {
  const auto dir_a = fresh_dir("cross_bohm");
  const auto dir_b = fresh_dir("cross_jump");
  experiment::run(sampled_config("bohm", 33), std::nullopt, dir_a);
  experiment::run(sampled_config("jump", 34), std::nullopt, dir_b);

  const auto rep = experiment::compare_runs(dir_a, dir_b);
  CHECK_FALSE(rep.zero_diffs);
  CHECK(rep.details.at("field_max_diff") == 0.0);  // identical deterministic fields
  for (const char* side : {"run_a", "run_b"}) {
    CAPTURE(side);
    const auto& gof = rep.details.at(side).at("gof_vs_final_density");
    CHECK(gof.at("pvalue").get<double>() > 0.01);
    CHECK(gof.at("pass_alpha01").get<bool>());
  }
  CHECK(rep.details.at("two_sample_pvalue").get<double>() > 0.01);
}

TEST_CASE("comparisons between unrelated runs are rejected") {
  const auto empty_a = fresh_dir("cmp_empty_a");
  const auto empty_b = fresh_dir("cmp_empty_b");
  CHECK_THROWS_AS(experiment::compare_runs(empty_a, empty_b), IncompatibleRuns);

  const auto grid_a = fresh_dir("cmp_grid_a");
  const auto grid_b = fresh_dir("cmp_grid_b");
  experiment::run(solve_config(5, 256), std::nullopt, grid_a);
  experiment::run(solve_config(5, 512), std::nullopt, grid_b);
  CHECK_THROWS_AS(experiment::compare_runs(grid_a, grid_b), IncompatibleRuns);

  const auto chain_a = fresh_dir("cmp_chain_a");
  const auto chain_b = fresh_dir("cmp_chain_b");
  experiment::run(chain_config(1), std::nullopt, chain_a);
  experiment::run(chain_config(2), std::nullopt, chain_b);
  CHECK_THROWS_WITH_AS(experiment::compare_runs(chain_a, chain_b),
                       "runs share no comparable artifacts", IncompatibleRuns);
}

TEST_CASE("cli maps outcomes to exit codes 0, 2 and 3") {
  const auto dir = fresh_dir("cli");
  const auto good = fs::path(INTERP_CONFIGS_DIR) / "harmonic_ground.json";
  CHECK(cli("validate " + good.string()) == 0);

  CHECK(cli("validate " + (dir / "absent.json").string()) == 2);

  io::write_text(dir / "broken.json", "{ nope");
  CHECK(cli("validate " + (dir / "broken.json").string()) == 2);

  auto bad = solve_config(1, 256);
  bad["solver"]["dt"] = -1.0;
  io::write_json(dir / "bad_dt.json", bad);
  const auto err_file = dir / "stderr.txt";
  CHECK(cli_stderr("validate " + (dir / "bad_dt.json").string(), err_file) == 2);
  CHECK(slurp(err_file).find("/solver/dt") != std::string::npos);

  io::write_json(dir / "chain.json", chain_config(3));
  const auto out = dir / "chain_run";
  CHECK(cli("run " + (dir / "chain.json").string() + " --seed 9 --out " +
            out.string()) == 0);
  CHECK(io::read_json(out / "summary.json").at("seed") == 9);

  CHECK(cli("run " + (dir / "bad_dt.json").string()) == 2);

  // chain runs expose no comparable artifacts -> runtime error -> 3.
  CHECK(cli("compare " + out.string() + " " + out.string()) == 3);

  io::write_json(dir / "solve.json", solve_config(4, 256));
  const auto solve_out = dir / "solve_run";
  CHECK(cli("run " + (dir / "solve.json").string() + " --out " +
            solve_out.string()) == 0);
  CHECK(cli("compare " + solve_out.string() + " " + solve_out.string()) == 0);

  CHECK(cli("") != 0);
  CHECK(cli("frobnicate") != 0);
}

TEST_SUITE_END();
