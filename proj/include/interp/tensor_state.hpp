// Copyright (c) 2026 interp-lab developers.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <string>
#include <vector>

#include "interp/errors.hpp"

namespace interp::hilbert {

using cdouble = std::complex<double>;

// Dense state over a tensor product of small subsystems, row-major (the last
// subsystem varies fastest). Subsystems carry label strings so callers can
// address basis states by name.
struct TensorState {
  std::vector<int> dims;
  std::vector<std::string> names;                // one per subsystem
  std::vector<std::vector<std::string>> labels;  // labels[k].size() == dims[k]
  std::vector<cdouble> amps;

  std::size_t total_dim() const;
  std::size_t index(const std::vector<int>& digits) const;
  std::vector<int> digits(std::size_t index) const;
  int label_index(int subsystem, const std::string& label) const;  // UnknownLabel

  static TensorState make(std::vector<int> dims, std::vector<std::string> names,
                          std::vector<std::vector<std::string>> labels);
};

double norm(const TensorState& s);
TensorState normalized(TensorState s);
cdouble inner(const TensorState& a, const TensorState& b);

// Kronecker product (a first, then b).
TensorState kron(const TensorState& a, const TensorState& b);

// Apply a D x D unitary (row-major) to the listed subsystems (D = product of
// their dims, digits ordered as listed). Throws NotUnitary if U'U != I to
// 1e-12, OutOfRange on bad subsystem indices.
TensorState apply_unitary(const TensorState& s, const std::vector<int>& subsystems,
                          const std::vector<cdouble>& u);

struct BasisRotation {
  std::vector<int> subsystems;
  std::vector<cdouble> matrix;  // row-major, square over the selected dims
};

TensorState rotate_basis(const TensorState& s, const BasisRotation& r);

std::vector<cdouble> hadamard2();

// Probability of the partial basis assignment `pattern`: one entry per
// subsystem, a label string or "*" wildcard. This is the squared projection
// of the state onto the matching basis subspace.
double measure_of_existence(const TensorState& s,
                            const std::vector<std::string>& pattern);

// Marginal probabilities of one subsystem.
std::vector<double> reduced_probabilities(const TensorState& s, int subsystem);

struct SchmidtReport {
  std::vector<double> singular_values;  // descending
  int rank = 0;                         // values above 1e-12
  double entropy = 0.0;                 // -sum p ln p over squared values
};

// Schmidt decomposition across the bipartition (left_subsystems | rest).
SchmidtReport schmidt(const TensorState& s, const std::vector<int>& left_subsystems);

// Two-outcome measurement chain: amplitude alpha on |branch0, g, e> and
// beta on |branch1, e, g> (orthogonal pointer records).
TensorState build_measurement_chain(cdouble alpha, cdouble beta);

// Overlap of two branch records after n environment qubits have scattered,
// each pair of environment states having inner product c: returns c^n.
cdouble decoherence_overlap(cdouble c, int n);

// Same quantity from the explicit 2^n-dimensional product states, by direct
// inner product (n <= 24).
cdouble explicit_environment_overlap(cdouble c, int n);

struct FactorizationReport {
  SchmidtReport me_you_cut;   // across {system+Me} | {You}
  double product_term_norms[4] = {0, 0, 0, 0};  // norms of the 4 cat-product terms
  double reassembly_error = 0.0;  // || sum of cat-product terms - state ||
};

// Two-observer state alpha|0, me0, you0> + beta|1, me1, you1>: reports the
// Schmidt data across the Me|You cut and the norms of the four terms of the
// cat-basis product rewriting (which reassemble the state exactly but are
// not a tensor factorization).
FactorizationReport factorization_ambiguity_demo(cdouble alpha, cdouble beta);

}  // namespace interp::hilbert
