// Copyright 2026 The decotop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DECOTOP_QUANTUM_HPP
#define DECOTOP_QUANTUM_HPP

#include "decotop/dense.hpp"
#include "decotop/lattice.hpp"
#include "decotop/statmech.hpp"

namespace decotop::quantum {

// Dense small-system oracle on the 2d torus. Edge qubits occupy bits
// [0, n_e); the parent graph state adds one vertex qubit per site at bits
// [n_e, n_e + n_v).

// Stabilizer generators of the parent graph state: S_v = X_v prod_{e in v} Z_e
// and S_e = X_e prod_{v in e} Z_v (expectation +1 on the state).
std::vector<PauliString> cluster_stabilizers(const lattice::Torus2D &lat);

// Toric stabilizers plus the two non-contractible X loops fixing the sector:
// Z stars, X plaquettes, W_x, W_y.
std::vector<PauliString> toric_stabilizers(const lattice::Torus2D &lat);

// Pure stabilizer state from its (complete) generator list, built as a
// projector product.
DenseVec stabilizer_state(int qubits, const std::vector<PauliString> &gens);

DenseVec cluster_ground_state(const lattice::Torus2D &lat);
DenseVec toric_ground_state(const lattice::Torus2D &lat);
// <x_v = 1| applied to a cluster-space state: keeps edge qubits.
DenseVec project_vertices_plus(const lattice::Torus2D &lat, const DenseVec &cluster_state);

// E[rho] for phase flips at rate p on the given edge qubits.
DenseMatrix apply_channel(const DenseMatrix &rho, double p, uint32_t edge_mask);

// Max elementwise deviation between the decohered parent state and its
// closed-form thermal expression at tanh(beta) = 1 - 2p. A non-negative
// corrupt_stabilizer index flips that generator's sign in the closed form
// (fault-injection hook for the verify suite).
double gibbs_form_check(const lattice::Torus2D &lat, double p, int corrupt_stabilizer = -1);

struct SpectralCheck {
    double max_deviation;        // channel output vs weighted-eigenstate sum
    double eigenvalue_deviation;  // spectrum vs normalized sector weights
};
SpectralCheck spectral_check(const lattice::Torus2D &lat, double p);

// |psi> = rho^{1/2} |z = 1>, dense route (edge qubits <= 13).
DenseVec sqrt_rho_state_dense(const lattice::Torus2D &lat, double p);
// Same state from the amplitude formula: X-basis amplitudes proportional to
// sqrt(Z_{x}) of the attached 2d Ising sample, transformed to the Z basis.
DenseVec sqrt_rho_state_amplitude(const lattice::Torus2D &lat, double p);

// Decohered density matrix of the toric state at rate p (trace 1).
DenseMatrix decohered_toric_state(const lattice::Torus2D &lat, double p);

// Z string on the edges of a cycle / X string likewise.
PauliString z_string(const lattice::Cycle &cycle);
PauliString x_string(const lattice::Cycle &cycle);

uint32_t region_mask(const lattice::Bipartition &bp);

// Ensemble member of the alternative (non-optimal) decomposition for a given
// z-basis label, built densely through the parent-state representation.
DenseVec nonoptimal_member_dense(const lattice::Torus2D &lat, double p, uint32_t z_mask);

}  // namespace decotop::quantum

#endif
