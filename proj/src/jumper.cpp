// Copyright (c) 2026 interp-lab developers.
// SPDX-License-Identifier: Apache-2.0
#include "interp/jumper.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "interp/fft.hpp"
#include "interp/parallel.hpp"

namespace interp::jump {

namespace {

// Inverse-CDF sampler over grid cells: cell i is drawn with probability
// weights[i]/total and the sampler returns values[i] exactly.
struct CellSampler {
  std::vector<double> values;
  std::vector<double> cum;  // inclusive cumulative weights
  double total = 0.0;

  CellSampler(std::vector<double> vals, const std::vector<double>& weights)
      : values(std::move(vals)) {
    cum.resize(weights.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      const double w = std::max(0.0, weights[i]);
      acc += w;
      cum[i] = acc;
    }
    total = acc;
    if (!(total > 0.0)) throw OutOfRange("sampling density has no mass");
  }

  double draw(rng::Stream& rng) const {
    const double u = rng.u01() * total;
    const auto it = std::upper_bound(cum.begin(), cum.end(), u);
    const auto i = std::min<std::size_t>(
        static_cast<std::size_t>(it - cum.begin()), cum.size() - 1);
    return values[i];
  }
};

std::vector<double> position_values(const core::Grid& g) {
  std::vector<double> xs(static_cast<std::size_t>(g.n_points));
  for (int i = 0; i < g.n_points; ++i) xs[static_cast<std::size_t>(i)] = g.x(i);
  return xs;
}

std::vector<double> position_weights(const core::WaveField& f) {
  const int n = f.grid.n_points;
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double tw = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    w[static_cast<std::size_t>(i)] = tw * std::norm(f.psi[static_cast<std::size_t>(i)]);
  }
  return w;
}

CellSampler make_sampler(const core::WaveField& f, Basis basis) {
  if (basis == Basis::position)
    return CellSampler(position_values(f.grid), position_weights(f));
  auto md = momentum_density(f);
  return CellSampler(std::move(md.k), md.density);
}

core::WaveField interpolate_field(const std::vector<core::WaveField>& snaps,
                                  double t) {
  if (t <= snaps.front().t) return snaps.front();
  if (t >= snaps.back().t) return snaps.back();
  std::size_t hi = 1;
  while (snaps[hi].t < t) ++hi;
  const auto& a = snaps[hi - 1];
  const auto& b = snaps[hi];
  const double w = (t - a.t) / (b.t - a.t);
  core::WaveField f = a;
  f.t = t;
  for (std::size_t i = 0; i < f.psi.size(); ++i)
    f.psi[i] = (1.0 - w) * a.psi[i] + w * b.psi[i];
  return f;
}

void check_snapshots(const std::vector<core::WaveField>& snaps) {
  if (snaps.empty()) throw OutOfRange("no snapshots");
  for (std::size_t i = 1; i < snaps.size(); ++i) {
    if (!(snaps[i].grid == snaps[0].grid))
      throw GridMismatch("snapshots on different grids");
    if (!(snaps[i].t > snaps[i - 1].t))
      throw OutOfRange("snapshot times must be strictly increasing");
  }
}

}  // namespace

std::string basis_name(Basis b) {
  return b == Basis::position ? "position" : "momentum";
}

Basis basis_from_name(const std::string& name) {
  if (name == "position") return Basis::position;
  if (name == "momentum") return Basis::momentum;
  throw UnknownLabel("unknown basis '" + name + "'");
}

MomentumDensity momentum_density(const core::WaveField& field) {
  const auto n = static_cast<std::size_t>(field.grid.n_points);
  if (!fft::is_pow2(n)) throw OutOfRange("momentum density needs a power-of-two grid");
  const double dx = field.grid.dx();
  const double dk = 2.0 * std::numbers::pi / (static_cast<double>(n) * dx);

  std::vector<core::cdouble> ft(field.psi);
  fft::Plan plan(n);
  plan.forward(ft);
  // psi_tilde_j = ft_j * dx / sqrt(2 pi), so sum |psi_tilde|^2 dk equals
  // sum |psi|^2 dx exactly (discrete Parseval).
  const double scale = dx * dx / (2.0 * std::numbers::pi);

  MomentumDensity md;
  md.k.resize(n);
  md.density.resize(n);
  const std::size_t half = n / 2;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = (j + half) % n;  // ascending k order
    const double kj = (static_cast<double>(src) -
                       (src >= half ? static_cast<double>(n) : 0.0)) *
                      dk;
    md.k[j] = kj;
    md.density[j] = scale * std::norm(ft[src]);
  }
  return md;
}

double jump_sample(const core::WaveField& field, Basis basis, rng::Stream& rng) {
  return make_sampler(field, basis).draw(rng);
}

std::size_t sample_label(const std::vector<double>& weights, rng::Stream& rng) {
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw OutOfRange("negative weight");
    total += w;
  }
  if (!(total > 0.0)) throw OutOfRange("weights sum to zero");
  const double u = rng.u01() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) return i;
  }
  return weights.size() - 1;
}

JumpRecord run_jump_process(const std::vector<core::WaveField>& snapshots,
                            const JumpProcess& process) {
  check_snapshots(snapshots);
  if (!(process.rate >= 0.0) || !std::isfinite(process.rate))
    throw OutOfRange("jump rate must be finite and >= 0");

  rng::Stream rng(process.seed, process.stream);
  const double t0 = snapshots.front().t;
  const double t_end = snapshots.back().t;

  JumpRecord rec;
  rec.basis = process.basis;
  rec.times.push_back(t0);
  rec.values.push_back(jump_sample(snapshots.front(), process.basis, rng));

  double t = t0;
  while (true) {
    t += rng.exponential(process.rate);
    if (!(t <= t_end)) break;
    const auto f = interpolate_field(snapshots, t);
    rec.times.push_back(t);
    rec.values.push_back(jump_sample(f, process.basis, rng));
  }
  return rec;
}

double value_at(const JumpRecord& record, double t) {
  if (record.times.empty()) throw TooFewJumps("empty record");
  if (t < record.times.front()) throw OutOfRange("time precedes the record");
  const auto it = std::upper_bound(record.times.begin(), record.times.end(), t);
  const auto i = static_cast<std::size_t>(it - record.times.begin()) - 1;
  return record.values[i];
}

SuperluminalReport superluminal_stats(const JumpRecord& record, double threshold) {
  if (record.times.size() < 2)
    throw TooFewJumps("need at least 2 jumps for velocities");
  SuperluminalReport rep;
  rep.threshold = threshold;
  double sum = 0.0;
  for (std::size_t i = 1; i < record.times.size(); ++i) {
    const double dt = record.times[i] - record.times[i - 1];
    if (!(dt > 0.0)) continue;  // coincident times carry no velocity
    const double v = std::abs(record.values[i] - record.values[i - 1]) / dt;
    rep.speeds.push_back(v);
    sum += v;
    rep.max_speed = std::max(rep.max_speed, v);
    if (v > threshold) rep.fraction_exceeding += 1.0;
  }
  if (rep.speeds.empty()) throw TooFewJumps("no positive inter-jump intervals");
  rep.mean_speed = sum / static_cast<double>(rep.speeds.size());
  rep.fraction_exceeding /= static_cast<double>(rep.speeds.size());
  return rep;
}

std::vector<double> born_samples(const core::WaveField& field, Basis basis,
                                 std::size_t n, std::uint64_t seed,
                                 std::uint64_t stream0) {
  const CellSampler sampler = make_sampler(field, basis);
  std::vector<double> out(n);
  parallel::parallel_for(n, [&](std::size_t i) {
    rng::Stream rng(seed, stream0 + i);
    out[i] = sampler.draw(rng);
  });
  return out;
}

std::vector<double> born_samples_serial(const core::WaveField& field, Basis basis,
                                        std::size_t n, std::uint64_t seed,
                                        std::uint64_t stream0) {
  const CellSampler sampler = make_sampler(field, basis);
  std::vector<double> out(n);
  parallel::serial_for(n, [&](std::size_t i) {
    rng::Stream rng(seed, stream0 + i);
    out[i] = sampler.draw(rng);
  });
  return out;
}

double lobe_overlap(const BranchJointState& joint) {
  if (!(joint.lobe_a.grid == joint.lobe_b.grid))
    throw GridMismatch("lobes on different grids");
  const double na = core::norm(joint.lobe_a);
  const double nb = core::norm(joint.lobe_b);
  if (!(na > 0.0) || !(nb > 0.0)) throw OutOfRange("lobe field has zero norm");
  const int n = joint.lobe_a.grid.n_points;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double tw = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    s += tw * std::abs(joint.lobe_a.psi[static_cast<std::size_t>(i)]) *
         std::abs(joint.lobe_b.psi[static_cast<std::size_t>(i)]);
  }
  return s * joint.lobe_a.grid.dx() / (na * nb);
}

namespace {

void check_joint(const BranchJointState& joint) {
  if (joint.rest_a.dims != joint.rest_b.dims)
    throw GridMismatch("rest states live on different tensor factors");
  if (lobe_overlap(joint) >= 1e-10)
    throw BranchesOverlap("lobe supports are not disjoint (overlap >= 1e-10)");
}

double density_at(const core::WaveField& f, double x) {
  const auto& g = f.grid;
  if (x < g.x_min || x > g.x_max) throw OutOfGrid("position outside the grid");
  const double s = (x - g.x_min) / g.dx();
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(s), f.psi.size() - 2);
  const double w = s - static_cast<double>(i);
  return (1.0 - w) * std::norm(f.psi[i]) + w * std::norm(f.psi[i + 1]);
}

double centroid(const core::WaveField& f) {
  const int n = f.grid.n_points;
  double mass = 0.0, mx = 0.0;
  for (int i = 0; i < n; ++i) {
    const double tw = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    const double r = tw * std::norm(f.psi[static_cast<std::size_t>(i)]);
    mass += r;
    mx += r * f.grid.x(i);
  }
  return mx / mass;
}

}  // namespace

BranchOccupancy branch_occupancy(const BranchJointState& joint, double x1) {
  check_joint(joint);
  const double da = density_at(joint.lobe_a, x1);
  const double db = density_at(joint.lobe_b, x1);
  BranchOccupancy occ;
  occ.electron_position = x1;
  occ.time = joint.lobe_a.t;
  const double floor_a = core::node_threshold(joint.lobe_a);
  const double floor_b = core::node_threshold(joint.lobe_b);
  if (da <= floor_a * floor_a && db <= floor_b * floor_b) {
    occ.branch =
        std::abs(x1 - centroid(joint.lobe_b)) < std::abs(x1 - centroid(joint.lobe_a))
            ? 1
            : 0;
  } else {
    occ.branch = db > da ? 1 : 0;
  }
  return occ;
}

double factorization_error(const BranchJointState& joint) {
  if (!(joint.lobe_a.grid == joint.lobe_b.grid))
    throw GridMismatch("lobes on different grids");
  if (joint.rest_a.dims != joint.rest_b.dims)
    throw GridMismatch("rest states live on different tensor factors");
  double err = 0.0;
  for (std::size_t q = 0; q < joint.rest_a.amps.size(); ++q) {
    const auto a = joint.rest_a.amps[q];
    const auto b = joint.rest_b.amps[q];
    for (std::size_t i = 0; i < joint.lobe_a.psi.size(); ++i) {
      const auto amp = joint.lobe_a.psi[i] * a + joint.lobe_b.psi[i] * b;
      const double d1 = std::norm(amp);
      const double d2 = std::norm(joint.lobe_a.psi[i]) * std::norm(a) +
                        std::norm(joint.lobe_b.psi[i]) * std::norm(b);
      err = std::max(err, std::abs(d1 - d2));
    }
  }
  return err;
}

std::vector<JointSample> sample_joint(const BranchJointState& joint, std::size_t n,
                                      std::uint64_t seed, std::uint64_t stream0) {
  check_joint(joint);
  const auto xs = position_values(joint.lobe_a.grid);
  const std::size_t d = joint.rest_a.amps.size();
  const int np = joint.lobe_a.grid.n_points;

  // Per discrete index: weight and a position sampler over the combined
  // branch amplitude psi_a * a_X + psi_b * b_X.
  std::vector<double> rest_weights(d, 0.0);
  std::vector<CellSampler> samplers;
  std::vector<std::size_t> sampler_of(d, SIZE_MAX);
  for (std::size_t q = 0; q < d; ++q) {
    const auto a = joint.rest_a.amps[q];
    const auto b = joint.rest_b.amps[q];
    std::vector<double> w(static_cast<std::size_t>(np));
    double total = 0.0;
    for (int i = 0; i < np; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      const double tw = (i == 0 || i == np - 1) ? 0.5 : 1.0;
      w[ii] = tw * std::norm(joint.lobe_a.psi[ii] * a + joint.lobe_b.psi[ii] * b);
      total += w[ii];
    }
    rest_weights[q] = total;
    if (total > 0.0) {
      sampler_of[q] = samplers.size();
      samplers.emplace_back(xs, w);
    }
  }

  double wsum = 0.0;
  std::vector<double> rest_cum(d);
  for (std::size_t q = 0; q < d; ++q) {
    wsum += rest_weights[q];
    rest_cum[q] = wsum;
  }
  if (!(wsum > 0.0)) throw OutOfRange("joint state has no mass");

  std::vector<JointSample> out(n);
  parallel::parallel_for(n, [&](std::size_t m) {
    rng::Stream rng(seed, stream0 + m);
    const double u = rng.u01() * wsum;
    auto it = std::upper_bound(rest_cum.begin(), rest_cum.end(), u);
    auto q = std::min<std::size_t>(static_cast<std::size_t>(it - rest_cum.begin()),
                                   d - 1);
    while (sampler_of[q] == SIZE_MAX && q > 0) --q;  // guard zero-weight cells
    out[m].rest_index = q;
    out[m].x = samplers[sampler_of[q]].draw(rng);
  });
  return out;
}

}  // namespace interp::jump
