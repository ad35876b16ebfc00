// Copyright (c) 2026 interp-lab developers.
// SPDX-License-Identifier: Apache-2.0
#include "interp/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "interp/bell.hpp"
#include "interp/bohm.hpp"
#include "interp/branch_stats.hpp"
#include "interp/core_field.hpp"
#include "interp/errors.hpp"
#include "interp/io.hpp"
#include "interp/jumper.hpp"
#include "interp/solver.hpp"
#include "interp/stats.hpp"
#include "interp/tensor_state.hpp"

namespace interp::experiment {

namespace fs = std::filesystem;
using cdouble = std::complex<double>;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ValidationError(path.empty() ? "/" : path, msg);
}

const json& need(const json& j, const std::string& path, const char* key) {
  if (!j.is_object()) fail(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(path + "/" + key, "missing required key");
  return *it;
}

double need_num(const json& j, const std::string& path, const char* key) {
  const auto& v = need(j, path, key);
  if (!v.is_number()) fail(path + "/" + key, "expected a number");
  return v.get<double>();
}

double opt_num(const json& j, const std::string& path, const char* key,
               double fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number()) fail(path + "/" + key, "expected a number");
  return v.get<double>();
}

std::int64_t need_int(const json& j, const std::string& path, const char* key) {
  const auto& v = need(j, path, key);
  if (!v.is_number_integer()) fail(path + "/" + key, "expected an integer");
  return v.get<std::int64_t>();
}

std::int64_t opt_int(const json& j, const std::string& path, const char* key,
                     std::int64_t fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number_integer()) fail(path + "/" + key, "expected an integer");
  return v.get<std::int64_t>();
}

std::string need_str(const json& j, const std::string& path, const char* key) {
  const auto& v = need(j, path, key);
  if (!v.is_string()) fail(path + "/" + key, "expected a string");
  return v.get<std::string>();
}

bool opt_bool(const json& j, const std::string& path, const char* key,
              bool fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_boolean()) fail(path + "/" + key, "expected a boolean");
  return v.get<bool>();
}

cdouble need_complex(const json& j, const std::string& path, const char* key) {
  const auto& v = need(j, path, key);
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    fail(path + "/" + key, "expected a number or an [re, im] pair");
  return {v[0].get<double>(), v[1].get<double>()};
}

// ---------------------------------------------------------------- parsing --

struct SolveParams {
  core::Grid grid;
  bool ground_state = false;
  bool slit_pair = false;
  double separation = 0.0, lobe_sigma = 0.0;
  double x0 = 0.0, sigma0 = 1.0, k0 = 0.0;
  tdse::PotentialSpec pot;
  bool auto_height = false;
  tdse::SolverConfig cfg;
  bool write_snapshots = false;
};

core::Grid parse_grid(const json& config) {
  const auto& g = need(config, "", "grid");
  const double x_min = need_num(g, "/grid", "x_min");
  const double x_max = need_num(g, "/grid", "x_max");
  const auto n = need_int(g, "/grid", "n_points");
  if (x_max <= x_min) fail("/grid/x_max", "x_max must exceed x_min");
  if (n < 8 || n > (1 << 22)) fail("/grid/n_points", "n_points must be in [8, 2^22]");
  return core::Grid::make(x_min, x_max, static_cast<int>(n));
}

SolveParams parse_solve(const json& config) {
  SolveParams p;
  p.grid = parse_grid(config);

  const auto& init = need(config, "", "initial_state");
  const auto type = need_str(init, "/initial_state", "kind");
  if (type == "ground_state") {
    p.ground_state = true;
  } else if (type == "gaussian") {
    p.x0 = need_num(init, "/initial_state", "x0");
    p.sigma0 = need_num(init, "/initial_state", "sigma0");
    p.k0 = need_num(init, "/initial_state", "k0");
    if (!(p.sigma0 > 0.0)) fail("/initial_state/sigma0", "sigma0 must be > 0");
  } else if (type == "slit_pair") {
    p.slit_pair = true;
    p.separation = need_num(init, "/initial_state", "separation");
    p.lobe_sigma = need_num(init, "/initial_state", "lobe_sigma");
    p.x0 = opt_num(init, "/initial_state", "x0", 0.0);
    p.k0 = opt_num(init, "/initial_state", "k0", 0.0);
    if (!(p.separation > 0.0)) fail("/initial_state/separation", "separation must be > 0");
    if (!(p.lobe_sigma > 0.0)) fail("/initial_state/lobe_sigma", "lobe_sigma must be > 0");
  } else {
    fail("/initial_state/kind", "expected 'gaussian', 'ground_state' or 'slit_pair'");
  }

  const auto& pot = need(config, "", "potential");
  const auto kind = need_str(pot, "/potential", "kind");
  if (kind == "free") {
    p.pot = tdse::PotentialSpec::free_space();
  } else if (kind == "harmonic") {
    const double omega = need_num(pot, "/potential", "omega");
    if (!(omega > 0.0)) fail("/potential/omega", "omega must be > 0");
    p.pot = tdse::PotentialSpec::harmonic(omega);
  } else if (kind == "gaussian_barrier") {
    const double h = need_num(pot, "/potential", "height");
    const double c = need_num(pot, "/potential", "center");
    const double w = need_num(pot, "/potential", "width");
    if (!(w > 0.0)) fail("/potential/width", "width must be > 0");
    p.pot = tdse::PotentialSpec::gaussian_barrier(h, c, w);
  } else if (kind == "double_slit") {
    const double c = opt_num(pot, "/potential", "center", 0.0);
    const double h = opt_num(pot, "/potential", "height", 50.0);
    const double th = need_num(pot, "/potential", "thickness");
    const double sw = need_num(pot, "/potential", "slit_width");
    const double sep = need_num(pot, "/potential", "slit_separation");
    if (!(th > 0.0)) fail("/potential/thickness", "thickness must be > 0");
    if (!(sw > 0.0)) fail("/potential/slit_width", "slit_width must be > 0");
    if (!(sep > 0.0)) fail("/potential/slit_separation", "slit_separation must be > 0");
    p.pot = tdse::PotentialSpec::double_slit(c, h, th, sw, sep);
  } else if (kind == "beam_splitter") {
    const double c = opt_num(pot, "/potential", "center", 0.0);
    const double w = need_num(pot, "/potential", "width");
    if (!(w > 0.0)) fail("/potential/width", "width must be > 0");
    if (pot.contains("height") && pot.at("height").is_number()) {
      p.pot = tdse::PotentialSpec::beam_splitter(c, w, pot.at("height").get<double>());
    } else if (!pot.contains("height") ||
               (pot.at("height").is_string() &&
                pot.at("height").get<std::string>() == "auto")) {
      p.pot = tdse::PotentialSpec::beam_splitter(c, w, 0.0);
      p.auto_height = true;
    } else {
      fail("/potential/height", "expected a number or 'auto'");
    }
  } else {
    fail("/potential/kind", "unknown potential kind '" + kind + "'");
  }

  const auto& sol = need(config, "", "solver");
  const auto method = need_str(sol, "/solver", "method");
  if (method == "split_step") {
    p.cfg.method = tdse::Method::split_step;
  } else if (method == "crank_nicolson") {
    p.cfg.method = tdse::Method::crank_nicolson;
  } else {
    fail("/solver/method", "expected 'split_step' or 'crank_nicolson'");
  }
  p.cfg.dt = need_num(sol, "/solver", "dt");
  if (!(p.cfg.dt > 0.0)) fail("/solver/dt", "dt must be > 0");
  p.cfg.n_steps = need_int(sol, "/solver", "n_steps");
  if (p.cfg.n_steps < 0) fail("/solver/n_steps", "n_steps must be >= 0");
  p.cfg.output_every = opt_int(sol, "/solver", "output_every", 10);
  if (p.cfg.output_every < 1) fail("/solver/output_every", "output_every must be >= 1");
  p.cfg.strict = opt_bool(sol, "/solver", "strict", false);

  if (config.contains("outputs"))
    p.write_snapshots = opt_bool(config.at("outputs"), "/outputs", "snapshots", false);
  return p;
}

struct BohmParams {
  std::int64_t n_trajectories = 0;
  std::int64_t paths_recorded = 100;
};

BohmParams parse_bohm(const json& config) {
  BohmParams p;
  const auto& b = need(config, "", "bohm");
  p.n_trajectories = need_int(b, "/bohm", "n_trajectories");
  if (p.n_trajectories < 1) fail("/bohm/n_trajectories", "need at least 1 trajectory");
  p.paths_recorded = opt_int(b, "/bohm", "paths_recorded", 100);
  if (p.paths_recorded < 0) fail("/bohm/paths_recorded", "must be >= 0");
  return p;
}

struct JumpParams {
  jump::Basis basis = jump::Basis::position;
  double rate = 10.0;
  std::int64_t n_samples = 100000;
  double superluminal_threshold = 10.0;
};

JumpParams parse_jump(const json& config) {
  JumpParams p;
  const auto& b = need(config, "", "jump");
  const auto basis = need_str(b, "/jump", "basis");
  if (basis != "position" && basis != "momentum")
    fail("/jump/basis", "expected 'position' or 'momentum'");
  p.basis = jump::basis_from_name(basis);
  p.rate = need_num(b, "/jump", "rate");
  if (!(p.rate >= 0.0)) fail("/jump/rate", "rate must be >= 0");
  p.n_samples = opt_int(b, "/jump", "n_samples", 100000);
  if (p.n_samples < 1) fail("/jump/n_samples", "need at least 1 sample");
  p.superluminal_threshold = opt_num(b, "/jump", "superluminal_threshold", 10.0);
  return p;
}

struct BellParams {
  double angle_a = 0.0, angle_a_prime = 0.0, angle_b = 0.0, angle_b_prime = 0.0;
  std::int64_t n_trials = 0;
  double w_hh = 0.5;
  double jump_rate = 10.0;
  double duration = 10.0;
};

BellParams parse_bell(const json& config) {
  BellParams p;
  const auto& b = need(config, "", "bell");
  p.angle_a = need_num(b, "/bell", "angle_a");
  p.angle_a_prime = need_num(b, "/bell", "angle_a_prime");
  p.angle_b = need_num(b, "/bell", "angle_b");
  p.angle_b_prime = need_num(b, "/bell", "angle_b_prime");
  p.n_trials = need_int(b, "/bell", "n_trials");
  if (p.n_trials < 1) fail("/bell/n_trials", "n_trials must be >= 1");
  p.w_hh = opt_num(b, "/bell", "w_hh", 0.5);
  if (p.w_hh < 0.0 || p.w_hh > 1.0) fail("/bell/w_hh", "w_hh must lie in [0, 1]");
  p.jump_rate = opt_num(b, "/bell", "jump_rate", 10.0);
  if (!(p.jump_rate >= 0.0)) fail("/bell/jump_rate", "jump_rate must be >= 0");
  p.duration = opt_num(b, "/bell", "duration", 10.0);
  if (!(p.duration >= 0.0)) fail("/bell/duration", "duration must be >= 0");
  return p;
}

struct BranchesParams {
  int n = 1;
  double p = 0.5;
  double epsilon = 0.05;
  std::int64_t n_runs = 10000;
};

BranchesParams parse_branches(const json& config) {
  BranchesParams p;
  const auto& b = need(config, "", "branches");
  const auto n = need_int(b, "/branches", "n");
  if (n < 1 || n > 1000000) fail("/branches/n", "n must be in [1, 1e6]");
  p.n = static_cast<int>(n);
  p.p = need_num(b, "/branches", "p");
  if (!(p.p > 0.0 && p.p < 1.0)) fail("/branches/p", "p must lie in (0, 1)");
  p.epsilon = opt_num(b, "/branches", "epsilon", 0.05);
  if (!(p.epsilon > 0.0)) fail("/branches/epsilon", "epsilon must be > 0");
  p.n_runs = opt_int(b, "/branches", "n_runs", 10000);
  if (p.n_runs < 0) fail("/branches/n_runs", "n_runs must be >= 0");
  return p;
}

struct DecohereParams {
  cdouble c{0.9, 0.0};
  int n_max = 100;
  int explicit_n = 20;
};

DecohereParams parse_decohere(const json& config) {
  DecohereParams p;
  const auto& b = need(config, "", "decohere");
  p.c = need_complex(b, "/decohere", "c");
  if (std::abs(p.c) > 1.0 + 1e-12) fail("/decohere/c", "|c| must be <= 1");
  const auto n_max = opt_int(b, "/decohere", "n_max", 100);
  if (n_max < 1 || n_max > 100000) fail("/decohere/n_max", "n_max must be in [1, 1e5]");
  p.n_max = static_cast<int>(n_max);
  const auto en = opt_int(b, "/decohere", "explicit_n", 20);
  if (en < 0 || en > 24) fail("/decohere/explicit_n", "explicit_n must be in [0, 24]");
  p.explicit_n = static_cast<int>(en);
  return p;
}

struct ChainParams {
  cdouble alpha{0.0, 0.0};
  cdouble beta{0.0, 0.0};
};

ChainParams parse_chain(const json& config) {
  ChainParams p;
  const auto& b = need(config, "", "chain");
  p.alpha = need_complex(b, "/chain", "alpha");
  p.beta = need_complex(b, "/chain", "beta");
  if (std::abs(std::norm(p.alpha) + std::norm(p.beta) - 1.0) > 1e-9)
    fail("/chain/alpha", "|alpha|^2 + |beta|^2 must equal 1");
  return p;
}

// ------------------------------------------------------------- run pieces --

core::WaveField build_initial(const SolveParams& p) {
  if (p.ground_state) return tdse::ground_state(p.grid, p.pot);
  auto f = core::make_field(p.grid);
  if (p.slit_pair) {
    // Post-screen boundary condition: one coherent lobe per window.
    const double cl = p.x0 - 0.5 * p.separation;
    const double cr = p.x0 + 0.5 * p.separation;
    for (int i = 0; i < p.grid.n_points; ++i) {
      const double x = p.grid.x(i);
      const double ul = (x - cl) / p.lobe_sigma;
      const double ur = (x - cr) / p.lobe_sigma;
      f.psi[static_cast<std::size_t>(i)] =
          (std::exp(-0.5 * ul * ul) + std::exp(-0.5 * ur * ur)) *
          std::exp(cdouble{0.0, p.k0 * x});
    }
    return core::normalized(std::move(f));
  }
  const double norm_c = std::pow(std::numbers::pi * p.sigma0 * p.sigma0, -0.25);
  for (int i = 0; i < p.grid.n_points; ++i) {
    const double x = p.grid.x(i);
    const double u = (x - p.x0) / p.sigma0;
    f.psi[static_cast<std::size_t>(i)] =
        norm_c * std::exp(-0.5 * u * u) *
        std::exp(cdouble{0.0, p.k0 * x});
  }
  return core::normalized(std::move(f));
}

json field_stats(const tdse::RunResult& run) {
  json j;
  j["n_snapshots"] = run.snapshots.size();
  j["norm_drift"] = run.norm_drift;
  const double e0 = run.energy.front();
  double max_rel = 0.0;
  for (double e : run.energy)
    max_rel = std::max(max_rel, std::abs(e - e0) / std::max(1.0, std::abs(e0)));
  j["energy_drift_rel"] = max_rel;
  j["boundary_leak_final"] = run.boundary_leak.back();
  j["stability_warning"] = run.stability_warning;
  j["t_final"] = run.snapshots.back().t;
  return j;
}

int fringe_count(const core::WaveField& f, double x_from) {
  const auto dc = core::density(f);
  const int n = f.grid.n_points;
  double peak = 0.0;
  for (int i = 0; i < n; ++i)
    if (f.grid.x(i) > x_from) peak = std::max(peak, dc.rho[static_cast<std::size_t>(i)]);
  if (peak <= 0.0) return 0;
  int count = 0;
  for (int i = 1; i + 1 < n; ++i) {
    if (f.grid.x(i) <= x_from) continue;
    const double r = dc.rho[static_cast<std::size_t>(i)];
    if (r > dc.rho[static_cast<std::size_t>(i - 1)] &&
        r > dc.rho[static_cast<std::size_t>(i + 1)] && r >= 0.05 * peak)
      ++count;
  }
  return count;
}

void write_observables(const fs::path& path, const tdse::RunResult& run) {
  std::string text = "t,norm,energy,boundary_mass,x_mean\n";
  for (std::size_t i = 0; i < run.snapshots.size(); ++i) {
    const auto& f = run.snapshots[i];
    text += io::fmt(f.t);
    text += ',';
    text += io::fmt(core::norm(f));
    text += ',';
    text += io::fmt(run.energy[i]);
    text += ',';
    text += io::fmt(run.boundary_leak[i]);
    text += ',';
    text += io::fmt(core::expectation_x(f));
    text += '\n';
  }
  io::write_text(path, text);
}

// Observed counts binned on grid cells, expected from the field's cell
// weights (trapezoid), merged by the gof helper.
stats::Chi2Result chi2_vs_field(const std::vector<double>& samples,
                                const core::WaveField& f) {
  const int n = f.grid.n_points;
  const double dx = f.grid.dx();
  std::vector<double> observed(static_cast<std::size_t>(n), 0.0);
  for (double v : samples) {
    const auto i = static_cast<std::int64_t>(std::lround((v - f.grid.x_min) / dx));
    if (i < 0 || i >= n) continue;
    observed[static_cast<std::size_t>(i)] += 1.0;
  }
  std::vector<double> expected(static_cast<std::size_t>(n), 0.0);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double tw = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    expected[static_cast<std::size_t>(i)] =
        tw * std::norm(f.psi[static_cast<std::size_t>(i)]);
    total += expected[static_cast<std::size_t>(i)];
  }
  const auto n_samples = static_cast<double>(samples.size());
  for (auto& e : expected) e *= n_samples / total;
  return stats::chi_square_gof(observed, expected);
}

json chi2_json(const stats::Chi2Result& r) {
  return json{{"statistic", r.statistic},
              {"dof", r.dof},
              {"pvalue", r.pvalue},
              {"critical_alpha01", r.critical_alpha01},
              {"pass_alpha01", r.pass_alpha01}};
}

struct SolveOutput {
  SolveParams params;
  tdse::RunResult run;
  json summary;
};

SolveOutput execute_solve(const json& config, const fs::path& dir) {
  SolveOutput out;
  out.params = parse_solve(config);
  auto& p = out.params;

  json tuning;
  core::WaveField initial = build_initial(p);
  if (p.auto_height) {
    const auto tuned = tdse::tune_beam_splitter(initial, p.pot, p.cfg, p.pot.center);
    p.pot.height = tuned.height;
    tuning["tuned_height"] = tuned.height;
    tuning["transmitted_at_tuning"] = tuned.transmitted;
    tuning["probes"] = tuned.probes;
  }

  out.run = tdse::run_experiment(initial, p.pot, p.cfg);

  io::write_wavefield(dir / "psi_initial.csv", out.run.snapshots.front());
  io::write_wavefield(dir / "psi_final.csv", out.run.snapshots.back());
  write_observables(dir / "observables.csv", out.run);
  if (p.write_snapshots) {
    fs::create_directories(dir / "snapshots");
    char name[32];
    for (std::size_t i = 0; i < out.run.snapshots.size(); ++i) {
      std::snprintf(name, sizeof(name), "snap_%05zu.csv", i);
      io::write_wavefield(dir / "snapshots" / name, out.run.snapshots[i]);
    }
  }

  out.summary["potential"] = p.pot.kind_name();
  out.summary["method"] =
      p.cfg.method == tdse::Method::split_step ? "split_step" : "crank_nicolson";
  out.summary["fields"] = field_stats(out.run);
  if (!tuning.is_null()) out.summary["beam_splitter_tuning"] = tuning;
  if (p.pot.kind == tdse::PotentialSpec::Kind::double_slit)
    out.summary["fringes_past_screen"] = fringe_count(
        out.run.snapshots.back(),
        p.pot.center + 0.5 * p.pot.slit_separation + 0.5 * p.pot.slit_width +
            p.pot.thickness);
  if (p.slit_pair)
    out.summary["fringes_past_screen"] =
        fringe_count(out.run.snapshots.back(), p.grid.x_min - 1.0);
  if (p.pot.kind == tdse::PotentialSpec::Kind::beam_splitter ||
      p.pot.kind == tdse::PotentialSpec::Kind::gaussian_barrier)
    out.summary["transmitted_fraction"] =
        tdse::transmitted_fraction(out.run.snapshots.back(), p.pot.center);
  return out;
}

json run_solve(const json& config, const fs::path& dir, std::uint64_t) {
  return execute_solve(config, dir).summary;
}

json run_bohm(const json& config, const fs::path& dir, std::uint64_t seed) {
  const auto bp = parse_bohm(config);
  auto solved = execute_solve(config, dir);

  const bohm::FieldSequence seq(solved.run.snapshots);
  const auto x0 = bohm::sample_ensemble(solved.run.snapshots.front(),
                                        bp.n_trajectories, seed);
  const auto ensemble = bohm::integrate_ensemble(seq, x0);

  std::vector<bohm::Trajectory> recorded(
      ensemble.begin(),
      ensemble.begin() + std::min<std::size_t>(ensemble.size(),
                                               static_cast<std::size_t>(bp.paths_recorded)));
  io::write_trajectories(dir / "trajectories.csv", recorded);

  std::vector<double> finals;
  std::size_t truncated = 0;
  for (const auto& tr : ensemble) {
    if (tr.truncated) {
      ++truncated;
      continue;
    }
    finals.push_back(tr.positions.back());
  }
  io::write_samples(dir / "final_positions.csv", "x", finals);

  const auto& final_field = solved.run.snapshots.back();
  const double ks = bohm::equivariance_check(ensemble, final_field);
  const double ks_crit = stats::ks_critical_alpha01(finals.size());

  json summary = solved.summary;
  summary["bohm"] = {
      {"n_trajectories", bp.n_trajectories},
      {"truncated", truncated},
      {"equivariance_ks", ks},
      {"equivariance_critical_alpha01", ks_crit},
      {"equivariance_pass", ks < ks_crit},
      {"equivariance_pvalue", stats::ks_pvalue(ks, finals.size())},
      {"no_crossing_violations", bohm::no_crossing_violations(ensemble)},
      {"gof_vs_final_density", chi2_json(chi2_vs_field(finals, final_field))},
  };
  summary["samples_file"] = "final_positions.csv";
  return summary;
}

json run_jump(const json& config, const fs::path& dir, std::uint64_t seed) {
  const auto jp = parse_jump(config);
  auto solved = execute_solve(config, dir);

  jump::JumpProcess process;
  process.basis = jp.basis;
  process.rate = jp.rate;
  process.seed = seed;
  process.stream = 0;
  const auto record = jump::run_jump_process(solved.run.snapshots, process);
  io::write_jump_record(dir / "jumps.csv", record);

  const auto& final_field = solved.run.snapshots.back();
  const auto samples =
      jump::born_samples(final_field, jp.basis, static_cast<std::size_t>(jp.n_samples),
                         seed, std::uint64_t{1} << 32);
  io::write_samples(dir / "born_samples.csv",
                    jp.basis == jump::Basis::position ? "x" : "k", samples);

  json summary = solved.summary;
  json jj;
  jj["basis"] = jump::basis_name(jp.basis);
  jj["rate"] = jp.rate;
  jj["jump_count"] = record.times.size();
  if (record.times.size() >= 2) {
    const auto rep = jump::superluminal_stats(record, jp.superluminal_threshold);
    jj["superluminal"] = {{"max_speed", rep.max_speed},
                          {"mean_speed", rep.mean_speed},
                          {"threshold", rep.threshold},
                          {"fraction_exceeding", rep.fraction_exceeding}};
  }
  if (jp.basis == jump::Basis::position) {
    jj["born_gof"] = chi2_json(chi2_vs_field(samples, final_field));
  } else {
    const auto md = jump::momentum_density(final_field);
    std::vector<double> observed(md.k.size(), 0.0);
    const double dk = md.k[1] - md.k[0];
    for (double v : samples) {
      const auto i = static_cast<std::int64_t>(std::lround((v - md.k.front()) / dk));
      if (i >= 0 && i < static_cast<std::int64_t>(observed.size()))
        observed[static_cast<std::size_t>(i)] += 1.0;
    }
    std::vector<double> expected = md.density;
    const double total = stats::kahan_sum(expected);
    for (auto& e : expected) e *= static_cast<double>(samples.size()) / total;
    jj["born_gof"] = chi2_json(stats::chi_square_gof(observed, expected));
  }
  // Parseval: total probability identical in the two bases.
  {
    const auto md = jump::momentum_density(final_field);
    const double dk = md.k[1] - md.k[0];
    double k_mass = 0.0;
    for (double d : md.density) k_mass += d;
    k_mass *= dk;
    double x_mass = 0.0;
    for (const auto& a : final_field.psi) x_mass += std::norm(a);
    x_mass *= final_field.grid.dx();
    jj["parseval_error"] = std::abs(k_mass - x_mass);
  }
  summary["jump"] = jj;
  summary["samples_file"] = "born_samples.csv";
  return summary;
}

json correlation_json(const bell::CorrelationEstimate& c) {
  return json{{"e", c.e},
              {"se", c.se},
              {"n", c.n},
              {"counts", {c.counts[0], c.counts[1], c.counts[2], c.counts[3]}}};
}

json run_bell(const json& config, const fs::path& dir, std::uint64_t seed) {
  const auto bp = parse_bell(config);
  const auto state = bell::PhotonPairState::two_branch(bp.w_hh, 1.0 - bp.w_hh);
  const auto settings =
      bell::BellSettings::make(bp.angle_a, bp.angle_a_prime, bp.angle_b,
                               bp.angle_b_prime, static_cast<std::uint64_t>(bp.n_trials),
                               seed);

  const auto result = bell::chsh(state, settings);
  const auto lhv = bell::chsh_lhv(settings);
  const auto hidden = bell::hiddenness_check(state, settings, bp.jump_rate, bp.duration);
  const auto record =
      bell::pair_jump_process(state, bp.jump_rate, bp.duration, seed, 1);
  io::write_pair_record(dir / "pair_jumps.csv", record);

  const char* names[4] = {"ab", "ab'", "a'b", "a'b'"};
  const double angles[4][2] = {{bp.angle_a, bp.angle_b},
                               {bp.angle_a, bp.angle_b_prime},
                               {bp.angle_a_prime, bp.angle_b},
                               {bp.angle_a_prime, bp.angle_b_prime}};
  std::string text = "setting,angle_a,angle_b,n_pp,n_pm,n_mp,n_mm,e,se\n";
  for (int q = 0; q < 4; ++q) {
    const auto& term = result.terms[static_cast<std::size_t>(q)];
    text += names[q];
    text += ',';
    text += io::fmt(angles[q][0]);
    text += ',';
    text += io::fmt(angles[q][1]);
    for (const auto c : term.counts) {
      text += ',';
      text += std::to_string(c);
    }
    text += ',';
    text += io::fmt(term.e);
    text += ',';
    text += io::fmt(term.se);
    text += '\n';
  }
  io::write_text(dir / "counts.csv", text);

  std::uint64_t hh = 0;
  for (int lab : record.labels)
    if (lab == 0) ++hh;

  json summary;
  summary["state_w_hh"] = bp.w_hh;
  summary["s"] = result.s;
  summary["se"] = result.se;
  summary["insufficient_statistics"] = result.insufficient_statistics;
  summary["terms"] = {correlation_json(result.terms[0]), correlation_json(result.terms[1]),
                      correlation_json(result.terms[2]), correlation_json(result.terms[3])};
  summary["lhv"] = {{"s", lhv.s}, {"se", lhv.se}};
  summary["hiddenness"] = {{"s_with", hidden.with_jumps.s},
                           {"s_without", hidden.without_jumps.s},
                           {"difference", hidden.difference},
                           {"combined_se", hidden.combined_se},
                           {"consistent", hidden.consistent},
                           {"jump_count", hidden.jump_count}};
  summary["pair_jumps"] = {{"count", record.times.size()},
                           {"fraction_hh",
                            record.labels.empty()
                                ? 0.0
                                : static_cast<double>(hh) /
                                      static_cast<double>(record.labels.size())}};
  return summary;
}

json run_branches(const json& config, const fs::path& dir, std::uint64_t seed) {
  const auto bp = parse_branches(config);

  if (bp.n <= 10000)
    io::write_distribution(dir / "distribution.csv",
                           branches::distribution_table(bp.n, bp.p));

  const auto row = branches::counting_vs_born(bp.n, bp.p, bp.epsilon);
  const auto walk = branches::empirical_branch_walk(
      bp.n, bp.p, static_cast<std::uint64_t>(bp.n_runs), seed);

  std::string hist = "n_t,count\n";
  for (std::size_t k = 0; k < walk.histogram.size(); ++k) {
    hist += std::to_string(k);
    hist += ',';
    hist += std::to_string(walk.histogram[k]);
    hist += '\n';
  }
  io::write_text(dir / "walk_histogram.csv", hist);

  json summary;
  summary["n"] = bp.n;
  summary["p"] = bp.p;
  summary["epsilon"] = bp.epsilon;
  summary["counting_vs_born"] = {{"k_lo", row.k_lo},
                                 {"k_hi", row.k_hi},
                                 {"born_measure", row.born_measure},
                                 {"counting_measure", row.counting_measure},
                                 {"hoeffding_bound", row.hoeffding_bound}};
  if (bp.n >= 10) {
    const auto st = branches::stirling_typicality(bp.n);
    summary["stirling"] = {{"log2_exact", st.log2_exact},
                           {"log2_crude", st.log2_crude},
                           {"log2_refined", st.log2_refined},
                           {"refined_rel_error", st.refined_rel_error}};
  }
  summary["walk"] = {{"n_runs", walk.n_runs},
                     {"mean_fraction", walk.mean_fraction},
                     {"chi_square", walk.chi_square},
                     {"chi_square_critical", walk.chi_square_critical},
                     {"dof", walk.dof},
                     {"consistent", walk.consistent}};
  return summary;
}

json run_decohere(const json& config, const fs::path& dir, std::uint64_t) {
  const auto dp = parse_decohere(config);

  std::string text = "n,re_overlap,im_overlap,abs_overlap\n";
  int n_below_1e12 = -1;
  for (int n = 0; n <= dp.n_max; ++n) {
    const auto ov = hilbert::decoherence_overlap(dp.c, n);
    if (n_below_1e12 < 0 && std::abs(ov) < 1e-12) n_below_1e12 = n;
    text += std::to_string(n);
    text += ',';
    text += io::fmt(ov.real());
    text += ',';
    text += io::fmt(ov.imag());
    text += ',';
    text += io::fmt(std::abs(ov));
    text += '\n';
  }
  io::write_text(dir / "overlaps.csv", text);

  json summary;
  summary["c"] = {dp.c.real(), dp.c.imag()};
  summary["n_max"] = dp.n_max;
  if (n_below_1e12 >= 0) summary["first_n_below_1e-12"] = n_below_1e12;
  if (dp.explicit_n >= 0) {
    const auto direct = hilbert::explicit_environment_overlap(dp.c, dp.explicit_n);
    const auto product = hilbert::decoherence_overlap(dp.c, dp.explicit_n);
    summary["explicit_check"] = {{"n", dp.explicit_n},
                                 {"product_law", {product.real(), product.imag()}},
                                 {"direct", {direct.real(), direct.imag()}},
                                 {"error", std::abs(direct - product)}};
  }
  return summary;
}

json run_chain(const json& config, const fs::path& dir, std::uint64_t) {
  const auto cp = parse_chain(config);
  const auto state = hilbert::build_measurement_chain(cp.alpha, cp.beta);
  io::write_json(dir / "state.json", io::tensor_state_json(state));

  // The two pointer records as product states; their inner product is the
  // orthogonality the chain relies on.
  auto rec_a = hilbert::TensorState::make({2, 2}, {"pointer2", "pointer3"},
                                          {{"g", "e"}, {"g", "e"}});
  auto rec_b = rec_a;
  rec_a.amps[rec_a.index({0, 1})] = 1.0;  // |g, e>
  rec_b.amps[rec_b.index({1, 0})] = 1.0;  // |e, g>

  const auto schmidt_branch = hilbert::schmidt(state, {0});
  const auto demo = hilbert::factorization_ambiguity_demo(cp.alpha, cp.beta);

  json summary;
  summary["alpha"] = {cp.alpha.real(), cp.alpha.imag()};
  summary["beta"] = {cp.beta.real(), cp.beta.imag()};
  summary["norm"] = hilbert::norm(state);
  summary["existence"] = {
      {"prime", hilbert::measure_of_existence(state, {"prime", "*", "*"})},
      {"double_prime",
       hilbert::measure_of_existence(state, {"double_prime", "*", "*"})}};
  summary["pointer2_probabilities"] = hilbert::reduced_probabilities(state, 1);
  summary["record_orthogonality"] = std::abs(hilbert::inner(rec_a, rec_b));
  summary["schmidt_branch_vs_pointers"] = {
      {"rank", schmidt_branch.rank},
      {"entropy", schmidt_branch.entropy},
      {"singular_values", schmidt_branch.singular_values}};
  summary["factorization_demo"] = {
      {"me_you_rank", demo.me_you_cut.rank},
      {"me_you_entropy", demo.me_you_cut.entropy},
      {"cat_term_norms",
       {demo.product_term_norms[0], demo.product_term_norms[1],
        demo.product_term_norms[2], demo.product_term_norms[3]}},
      {"reassembly_error", demo.reassembly_error}};
  return summary;
}

// ---------------------------------------------------------------- compare --

std::optional<std::vector<double>> load_run_samples(const fs::path& dir,
                                                    const json& summary) {
  if (!summary.contains("samples_file")) return std::nullopt;
  const auto p = dir / summary.at("samples_file").get<std::string>();
  if (!fs::exists(p)) return std::nullopt;
  return io::read_samples(p);
}

double two_sample_ks(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    // Consume whole tie groups so equal values never register a gap.
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / static_cast<double>(a.size()) -
                             static_cast<double>(j) / static_cast<double>(b.size())));
  }
  return d;
}

}  // namespace

std::string project_version() { return "0.1.0"; }

json load_config(const fs::path& path) {
  if (!fs::exists(path)) throw ValidationError(path.string(), "config file not found");
  auto j = io::read_json(path);
  validate_config(j);
  return j;
}

void validate_config(const json& config) {
  if (!config.is_object()) fail("", "config must be a JSON object");
  const auto version = need_int(config, "", "schema_version");
  if (version != 1) fail("/schema_version", "unsupported schema version");
  const auto kind = need_str(config, "", "kind");
  const auto seed = need(config, "", "seed");
  if (!seed.is_number_integer() || seed.get<std::int64_t>() < 0)
    fail("/seed", "seed must be a non-negative integer");
  if (config.contains("output_dir") && !config.at("output_dir").is_string())
    fail("/output_dir", "expected a string");

  if (kind == "solve") {
    parse_solve(config);
  } else if (kind == "bohm") {
    parse_solve(config);
    parse_bohm(config);
  } else if (kind == "jump") {
    parse_solve(config);
    parse_jump(config);
  } else if (kind == "bell") {
    parse_bell(config);
  } else if (kind == "branches") {
    parse_branches(config);
  } else if (kind == "decohere") {
    parse_decohere(config);
  } else if (kind == "chain") {
    parse_chain(config);
  } else {
    fail("/kind", "unknown experiment kind '" + kind + "'");
  }
}

RunInfo run(json config, std::optional<std::uint64_t> seed_override,
            std::optional<fs::path> out_override) {
  if (seed_override) config["seed"] = *seed_override;
  validate_config(config);

  const auto kind = config.at("kind").get<std::string>();
  const auto seed = config.at("seed").get<std::uint64_t>();
  fs::path dir;
  if (out_override)
    dir = *out_override;
  else if (config.contains("output_dir"))
    dir = config.at("output_dir").get<std::string>();
  else
    dir = fs::path("runs") / kind;
  fs::create_directories(dir);

  const auto t_start = std::chrono::steady_clock::now();
  json summary;
  if (kind == "solve") summary = run_solve(config, dir, seed);
  else if (kind == "bohm") summary = run_bohm(config, dir, seed);
  else if (kind == "jump") summary = run_jump(config, dir, seed);
  else if (kind == "bell") summary = run_bell(config, dir, seed);
  else if (kind == "branches") summary = run_branches(config, dir, seed);
  else if (kind == "decohere") summary = run_decohere(config, dir, seed);
  else summary = run_chain(config, dir, seed);
  const auto elapsed = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - t_start)
                           .count();

  json full_summary;
  full_summary["kind"] = kind;
  full_summary["seed"] = seed;
  full_summary.update(summary);
  io::write_json(dir / "summary.json", full_summary);

  json manifest;
  manifest["version"] = project_version();
  manifest["kind"] = kind;
  manifest["seed"] = seed;
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(io::fnv1a(config.dump())));
  manifest["config_hash"] = hash;
  manifest["wall_time_seconds"] = elapsed;
  manifest["config"] = config;
  io::write_json(dir / "manifest.json", manifest);

  return RunInfo{dir, full_summary};
}

CompareReport compare_runs(const fs::path& dir_a, const fs::path& dir_b) {
  for (const auto& d : {dir_a, dir_b})
    if (!fs::exists(d / "summary.json"))
      throw IncompatibleRuns("no summary.json in " + d.string());
  const auto sum_a = io::read_json(dir_a / "summary.json");
  const auto sum_b = io::read_json(dir_b / "summary.json");

  CompareReport rep;
  rep.details["run_a"] = {{"dir", dir_a.string()}, {"kind", sum_a.at("kind")}};
  rep.details["run_b"] = {{"dir", dir_b.string()}, {"kind", sum_b.at("kind")}};

  const bool has_field_a = fs::exists(dir_a / "psi_final.csv");
  const bool has_field_b = fs::exists(dir_b / "psi_final.csv");
  const auto samples_a = load_run_samples(dir_a, sum_a);
  const auto samples_b = load_run_samples(dir_b, sum_b);

  bool compared_something = false;
  bool zero = true;

  std::optional<core::WaveField> field_a, field_b;
  if (has_field_a) field_a = io::read_wavefield(dir_a / "psi_final.csv");
  if (has_field_b) field_b = io::read_wavefield(dir_b / "psi_final.csv");
  if (field_a && field_b) {
    if (!(field_a->grid == field_b->grid))
      throw IncompatibleRuns("final fields live on different grids");
    double l2 = 0.0, max_abs = 0.0;
    for (std::size_t i = 0; i < field_a->psi.size(); ++i) {
      const double d = std::abs(field_a->psi[i] - field_b->psi[i]);
      l2 += d * d;
      max_abs = std::max(max_abs, d);
    }
    l2 = std::sqrt(l2 * field_a->grid.dx());
    rep.details["field_l2_diff"] = l2;
    rep.details["field_max_diff"] = max_abs;
    compared_something = true;
    zero = zero && max_abs == 0.0;
  }

  const core::WaveField* ref = field_a ? &*field_a : (field_b ? &*field_b : nullptr);
  if (samples_a && ref)
    rep.details["run_a"]["gof_vs_final_density"] =
        chi2_json(chi2_vs_field(*samples_a, *ref));
  if (samples_b && ref)
    rep.details["run_b"]["gof_vs_final_density"] =
        chi2_json(chi2_vs_field(*samples_b, *ref));

  if (samples_a && samples_b) {
    if (samples_a->empty() || samples_b->empty())
      throw IncompatibleRuns("a run has no samples to compare");
    const double d = two_sample_ks(*samples_a, *samples_b);
    const double n_eff =
        static_cast<double>(samples_a->size()) * static_cast<double>(samples_b->size()) /
        static_cast<double>(samples_a->size() + samples_b->size());
    rep.details["two_sample_ks"] = d;
    rep.details["two_sample_pvalue"] =
        stats::ks_pvalue(d, static_cast<std::size_t>(n_eff));
    compared_something = true;
    zero = zero && d == 0.0;
  }

  if (!compared_something)
    throw IncompatibleRuns("runs share no comparable artifacts");
  rep.zero_diffs = zero;
  rep.details["zero_diffs"] = rep.zero_diffs;
  return rep;
}

}  // namespace interp::experiment
