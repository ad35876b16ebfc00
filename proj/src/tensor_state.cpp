// Copyright (c) 2026 interp-lab developers.
// SPDX-License-Identifier: Apache-2.0
#include "interp/tensor_state.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <cstddef>

namespace interp::hilbert {

namespace {

constexpr std::size_t kMaxTotalDim = std::size_t{1} << 24;

void check_shape(const TensorState& s) {
  if (s.dims.empty()) throw OutOfRange("state has no subsystems");
  if (s.names.size() != s.dims.size() || s.labels.size() != s.dims.size())
    throw OutOfRange("names/labels size does not match dims");
  std::size_t total = 1;
  for (std::size_t k = 0; k < s.dims.size(); ++k) {
    if (s.dims[k] < 2) throw OutOfRange("subsystem dim must be >= 2");
    if (s.labels[k].size() != static_cast<std::size_t>(s.dims[k]))
      throw OutOfRange("label count does not match subsystem dim");
    total *= static_cast<std::size_t>(s.dims[k]);
    if (total > kMaxTotalDim) throw OutOfRange("total dimension exceeds 2^24");
  }
  if (s.amps.size() != total) throw OutOfRange("amplitude count does not match dims");
}

std::vector<std::size_t> strides_of(const std::vector<int>& dims) {
  std::vector<std::size_t> st(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;)
    st[k - 1] = st[k] * static_cast<std::size_t>(dims[k]);
  return st;
}

}  // namespace

std::size_t TensorState::total_dim() const {
  std::size_t total = 1;
  for (int d : dims) total *= static_cast<std::size_t>(d);
  return total;
}

std::size_t TensorState::index(const std::vector<int>& dg) const {
  if (dg.size() != dims.size()) throw OutOfRange("digit count does not match dims");
  std::size_t idx = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (dg[k] < 0 || dg[k] >= dims[k]) throw OutOfRange("basis digit out of range");
    idx = idx * static_cast<std::size_t>(dims[k]) + static_cast<std::size_t>(dg[k]);
  }
  return idx;
}

std::vector<int> TensorState::digits(std::size_t index) const {
  std::vector<int> dg(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    dg[k] = static_cast<int>(index % static_cast<std::size_t>(dims[k]));
    index /= static_cast<std::size_t>(dims[k]);
  }
  return dg;
}

int TensorState::label_index(int subsystem, const std::string& label) const {
  if (subsystem < 0 || static_cast<std::size_t>(subsystem) >= dims.size())
    throw OutOfRange("subsystem index out of range");
  const auto& ls = labels[static_cast<std::size_t>(subsystem)];
  auto it = std::find(ls.begin(), ls.end(), label);
  if (it == ls.end())
    throw UnknownLabel("no label '" + label + "' on subsystem '" +
                       names[static_cast<std::size_t>(subsystem)] + "'");
  return static_cast<int>(it - ls.begin());
}

TensorState TensorState::make(std::vector<int> dims, std::vector<std::string> names,
                              std::vector<std::vector<std::string>> labels) {
  TensorState s;
  s.dims = std::move(dims);
  s.names = std::move(names);
  s.labels = std::move(labels);
  std::size_t total = 1;
  for (int d : s.dims) {
    if (d < 2) throw OutOfRange("subsystem dim must be >= 2");
    total *= static_cast<std::size_t>(d);
    if (total > kMaxTotalDim) throw OutOfRange("total dimension exceeds 2^24");
  }
  s.amps.assign(total, cdouble{0.0, 0.0});
  check_shape(s);
  return s;
}

double norm(const TensorState& s) {
  double acc = 0.0;
  for (const auto& a : s.amps) acc += std::norm(a);
  return std::sqrt(acc);
}

TensorState normalized(TensorState s) {
  const double n = norm(s);
  if (n <= 0.0) throw OutOfRange("cannot normalize a zero state");
  for (auto& a : s.amps) a /= n;
  return s;
}

cdouble inner(const TensorState& a, const TensorState& b) {
  if (a.dims != b.dims) throw GridMismatch("states live on different tensor factors");
  cdouble acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.amps.size(); ++i)
    acc += std::conj(a.amps[i]) * b.amps[i];
  return acc;
}

TensorState kron(const TensorState& a, const TensorState& b) {
  TensorState s;
  s.dims = a.dims;
  s.dims.insert(s.dims.end(), b.dims.begin(), b.dims.end());
  s.names = a.names;
  s.names.insert(s.names.end(), b.names.begin(), b.names.end());
  s.labels = a.labels;
  s.labels.insert(s.labels.end(), b.labels.begin(), b.labels.end());
  std::size_t total = 1;
  for (int d : s.dims) {
    total *= static_cast<std::size_t>(d);
    if (total > kMaxTotalDim) throw OutOfRange("total dimension exceeds 2^24");
  }
  s.amps.resize(total);
  const std::size_t nb = b.amps.size();
  for (std::size_t i = 0; i < a.amps.size(); ++i)
    for (std::size_t j = 0; j < nb; ++j) s.amps[i * nb + j] = a.amps[i] * b.amps[j];
  return s;
}

TensorState apply_unitary(const TensorState& s, const std::vector<int>& subsystems,
                          const std::vector<cdouble>& u) {
  check_shape(s);
  if (subsystems.empty()) throw OutOfRange("no subsystems selected");
  std::vector<char> seen(s.dims.size(), 0);
  std::size_t d_sel = 1;
  for (int k : subsystems) {
    if (k < 0 || static_cast<std::size_t>(k) >= s.dims.size())
      throw OutOfRange("subsystem index out of range");
    if (seen[static_cast<std::size_t>(k)]) throw OutOfRange("subsystem listed twice");
    seen[static_cast<std::size_t>(k)] = 1;
    d_sel *= static_cast<std::size_t>(s.dims[static_cast<std::size_t>(k)]);
  }
  if (u.size() != d_sel * d_sel) throw OutOfRange("matrix size does not match selection");
  if (d_sel > 4096) throw OutOfRange("selected block larger than 4096");

  // Unitarity: max |(U'U - I)_{ij}| <= 1e-12.
  for (std::size_t i = 0; i < d_sel; ++i) {
    for (std::size_t j = 0; j < d_sel; ++j) {
      cdouble acc{0.0, 0.0};
      for (std::size_t k = 0; k < d_sel; ++k)
        acc += std::conj(u[k * d_sel + i]) * u[k * d_sel + j];
      const cdouble want = (i == j) ? cdouble{1.0, 0.0} : cdouble{0.0, 0.0};
      if (std::abs(acc - want) > 1e-12)
        throw NotUnitary("matrix is not unitary to 1e-12");
    }
  }

  const auto strides = strides_of(s.dims);

  // Offsets of the selected block's basis states, digits ordered as listed.
  std::vector<std::size_t> sel_offsets(d_sel, 0);
  for (std::size_t a = 0; a < d_sel; ++a) {
    std::size_t rem = a;
    for (std::size_t q = subsystems.size(); q-- > 0;) {
      const auto k = static_cast<std::size_t>(subsystems[q]);
      const auto dk = static_cast<std::size_t>(s.dims[k]);
      sel_offsets[a] += (rem % dk) * strides[k];
      rem /= dk;
    }
  }

  // Complement odometer.
  std::vector<std::size_t> comp;
  for (std::size_t k = 0; k < s.dims.size(); ++k)
    if (!seen[k]) comp.push_back(k);

  TensorState out = s;
  std::vector<int> odo(comp.size(), 0);
  std::vector<cdouble> block(d_sel), mixed(d_sel);
  while (true) {
    std::size_t base = 0;
    for (std::size_t q = 0; q < comp.size(); ++q)
      base += static_cast<std::size_t>(odo[q]) * strides[comp[q]];
    for (std::size_t a = 0; a < d_sel; ++a) block[a] = s.amps[base + sel_offsets[a]];
    for (std::size_t i = 0; i < d_sel; ++i) {
      cdouble acc{0.0, 0.0};
      for (std::size_t j = 0; j < d_sel; ++j) acc += u[i * d_sel + j] * block[j];
      mixed[i] = acc;
    }
    for (std::size_t a = 0; a < d_sel; ++a) out.amps[base + sel_offsets[a]] = mixed[a];

    std::size_t q = comp.size();
    while (q-- > 0) {
      if (++odo[q] < s.dims[comp[q]]) break;
      odo[q] = 0;
      if (q == 0) return out;
    }
    if (comp.empty()) return out;
  }
}

TensorState rotate_basis(const TensorState& s, const BasisRotation& r) {
  return apply_unitary(s, r.subsystems, r.matrix);
}

std::vector<cdouble> hadamard2() {
  const double r = 1.0 / std::sqrt(2.0);
  return {cdouble{r, 0}, cdouble{r, 0}, cdouble{r, 0}, cdouble{-r, 0}};
}

double measure_of_existence(const TensorState& s,
                            const std::vector<std::string>& pattern) {
  check_shape(s);
  if (pattern.size() != s.dims.size())
    throw OutOfRange("pattern length does not match subsystem count");
  std::vector<int> want(s.dims.size(), -1);
  for (std::size_t k = 0; k < pattern.size(); ++k)
    if (pattern[k] != "*")
      want[k] = s.label_index(static_cast<int>(k), pattern[k]);

  double acc = 0.0;
  for (std::size_t i = 0; i < s.amps.size(); ++i) {
    if (s.amps[i] == cdouble{0.0, 0.0}) continue;
    const auto dg = s.digits(i);
    bool match = true;
    for (std::size_t k = 0; k < dg.size(); ++k)
      if (want[k] >= 0 && dg[k] != want[k]) { match = false; break; }
    if (match) acc += std::norm(s.amps[i]);
  }
  return acc;
}

std::vector<double> reduced_probabilities(const TensorState& s, int subsystem) {
  check_shape(s);
  if (subsystem < 0 || static_cast<std::size_t>(subsystem) >= s.dims.size())
    throw OutOfRange("subsystem index out of range");
  const auto k = static_cast<std::size_t>(subsystem);
  const auto strides = strides_of(s.dims);
  std::vector<double> p(static_cast<std::size_t>(s.dims[k]), 0.0);
  for (std::size_t i = 0; i < s.amps.size(); ++i)
    p[(i / strides[k]) % static_cast<std::size_t>(s.dims[k])] += std::norm(s.amps[i]);
  return p;
}

SchmidtReport schmidt(const TensorState& s, const std::vector<int>& left_subsystems) {
  check_shape(s);
  if (left_subsystems.empty() || left_subsystems.size() >= s.dims.size())
    throw OutOfRange("bipartition must leave subsystems on both sides");
  std::vector<char> is_left(s.dims.size(), 0);
  for (int k : left_subsystems) {
    if (k < 0 || static_cast<std::size_t>(k) >= s.dims.size())
      throw OutOfRange("subsystem index out of range");
    if (is_left[static_cast<std::size_t>(k)]) throw OutOfRange("subsystem listed twice");
    is_left[static_cast<std::size_t>(k)] = 1;
  }

  std::vector<std::size_t> left, right;
  for (std::size_t k = 0; k < s.dims.size(); ++k)
    (is_left[k] ? left : right).push_back(k);
  std::size_t dl = 1, dr = 1;
  for (auto k : left) dl *= static_cast<std::size_t>(s.dims[k]);
  for (auto k : right) dr *= static_cast<std::size_t>(s.dims[k]);

  const auto strides = strides_of(s.dims);
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(dl), static_cast<Eigen::Index>(dr));
  for (std::size_t i = 0; i < s.amps.size(); ++i) {
    std::size_t row = 0, col = 0;
    for (auto k : left)
      row = row * static_cast<std::size_t>(s.dims[k]) +
            (i / strides[k]) % static_cast<std::size_t>(s.dims[k]);
    for (auto k : right)
      col = col * static_cast<std::size_t>(s.dims[k]) +
            (i / strides[k]) % static_cast<std::size_t>(s.dims[k]);
    m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = s.amps[i];
  }

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  SchmidtReport rep;
  rep.singular_values.assign(svd.singularValues().data(),
                             svd.singularValues().data() + svd.singularValues().size());
  for (double v : rep.singular_values) {
    if (v > 1e-12) ++rep.rank;
    const double p = v * v;
    if (p > 0.0) rep.entropy -= p * std::log(p);
  }
  return rep;
}

TensorState build_measurement_chain(cdouble alpha, cdouble beta) {
  auto s = TensorState::make({2, 2, 2}, {"branch", "pointer2", "pointer3"},
                             {{"prime", "double_prime"}, {"g", "e"}, {"g", "e"}});
  s.amps[s.index({0, 0, 1})] = alpha;  // |prime, g, e>
  s.amps[s.index({1, 1, 0})] = beta;   // |double_prime, e, g>
  return s;
}

cdouble decoherence_overlap(cdouble c, int n) {
  if (n < 0) throw OutOfRange("environment count must be >= 0");
  cdouble acc{1.0, 0.0};
  for (int q = 0; q < n; ++q) acc *= c;
  return acc;
}

cdouble explicit_environment_overlap(cdouble c, int n) {
  if (n < 0 || n > 24) throw OutOfRange("explicit construction supports 0 <= n <= 24");
  if (std::abs(c) > 1.0 + 1e-12) throw OutOfRange("|c| must be <= 1");
  if (n == 0) return cdouble{1.0, 0.0};

  // Environment qubit pair: |e0> = (1,0), |e1> = (c, sqrt(1-|c|^2)) so that
  // <e0|e1> = c exactly.
  const cdouble e1_0 = c;
  const cdouble e1_1 = cdouble{std::sqrt(std::max(0.0, 1.0 - std::norm(c))), 0.0};

  const std::size_t total = std::size_t{1} << n;
  std::vector<cdouble> a(total), b(total);
  a[0] = cdouble{1.0, 0.0};  // product of |e0>
  for (std::size_t i = 0; i < total; ++i) {
    cdouble amp{1.0, 0.0};
    for (int q = 0; q < n; ++q)
      amp *= ((i >> q) & 1u) ? e1_1 : e1_0;
    b[i] = amp;
  }
  cdouble acc{0.0, 0.0};
  for (std::size_t i = 0; i < total; ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

FactorizationReport factorization_ambiguity_demo(cdouble alpha, cdouble beta) {
  auto s = TensorState::make({2, 2, 2}, {"system", "me", "you"},
                             {{"0", "1"}, {"me0", "me1"}, {"you0", "you1"}});
  s.amps[s.index({0, 0, 0})] = alpha;
  s.amps[s.index({1, 1, 1})] = beta;

  FactorizationReport rep;
  rep.me_you_cut = schmidt(s, {0, 1});

  // Cat basis for {system+me}: |+-> = (|0,me0> +- |1,me1>)/sqrt(2), and for
  // {you}: |+-> = (|you0> +- |you1>)/sqrt(2). Expanding the state over the
  // four cat-product terms gives coefficients (a+b)/2, (a-b)/2 pairings.
  const cdouble cpp = 0.5 * (alpha + beta), cpm = 0.5 * (alpha - beta);
  // |cat+>|+> and |cat->|-> carry (a+b)/2 each... build them explicitly.
  auto term = [&](int sm_sign, int you_sign, cdouble coef) {
    TensorState t = s;
    std::fill(t.amps.begin(), t.amps.end(), cdouble{0.0, 0.0});
    const double r = 0.5;  // (1/sqrt2)*(1/sqrt2)
    t.amps[t.index({0, 0, 0})] = coef * r;
    t.amps[t.index({0, 0, 1})] = coef * r * static_cast<double>(you_sign);
    t.amps[t.index({1, 1, 0})] = coef * r * static_cast<double>(sm_sign);
    t.amps[t.index({1, 1, 1})] = coef * r * static_cast<double>(sm_sign * you_sign);
    return t;
  };
  TensorState terms[4] = {term(1, 1, cpp), term(1, -1, cpm),
                          term(-1, 1, cpm), term(-1, -1, cpp)};
  TensorState sum = s;
  std::fill(sum.amps.begin(), sum.amps.end(), cdouble{0.0, 0.0});
  for (int q = 0; q < 4; ++q) {
    rep.product_term_norms[q] = norm(terms[q]);
    for (std::size_t i = 0; i < sum.amps.size(); ++i)
      sum.amps[i] += terms[q].amps[i];
  }
  double err = 0.0;
  for (std::size_t i = 0; i < sum.amps.size(); ++i)
    err += std::norm(sum.amps[i] - s.amps[i]);
  rep.reassembly_error = std::sqrt(err);
  return rep;
}

}  // namespace interp::hilbert
