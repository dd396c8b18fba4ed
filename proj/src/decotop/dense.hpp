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

#ifndef DECOTOP_DENSE_HPP
#define DECOTOP_DENSE_HPP

#include <cstdint>
#include <vector>

namespace decotop::quantum {

// Everything this oracle touches is real: stabilizers are X/Z strings and
// phase-flip channels keep matrices real in the computational basis. A Pauli
// string is sign * X^x Z^z, whose matrix elements are all +/-1.
struct PauliString {
    uint32_t x = 0;
    uint32_t z = 0;
    int sign = +1;

    static PauliString xs(uint32_t mask) { return {mask, 0, +1}; }
    static PauliString zs(uint32_t mask) { return {0, mask, +1}; }

    PauliString times(const PauliString &o) const;
    bool commutes(const PauliString &o) const;
    bool is_identity() const { return x == 0 && z == 0 && sign == +1; }
};

constexpr int kMaxDenseQubits = 13;

struct DenseVec {
    int nq = 0;
    std::vector<double> a;

    explicit DenseVec(int qubits);
    static DenseVec basis_state(int qubits, uint32_t index);

    size_t dim() const { return a.size(); }
    double norm2() const;
    void normalize();
    void apply(const PauliString &p);
    // (c_id * I + c_p * P) |v>
    void apply_factor(const PauliString &p, double c_id, double c_p);
};

double inner(const DenseVec &u, const DenseVec &v);
double fidelity(const DenseVec &u, const DenseVec &v);

// In-place Walsh-Hadamard on every qubit with 2^{-n/2} normalization: maps
// X-basis amplitude vectors (index bit = 1 where x_i = -1) to Z-basis ones.
void hadamard_all(DenseVec &v);

struct DenseMatrix {
    int nq = 0;
    size_t n = 0;  // dimension
    std::vector<double> a;

    explicit DenseMatrix(int qubits);
    static DenseMatrix identity(int qubits);
    static DenseMatrix outer(const DenseVec &v);

    double &at(size_t r, size_t c) { return a[r * n + c]; }
    double at(size_t r, size_t c) const { return a[r * n + c]; }

    double trace() const;
    void scale(double f);
    void normalize_trace();
    void add_scaled(const DenseMatrix &o, double f);
    void accumulate_outer(const DenseVec &v, double w);

    // M <- P M and M <- M P.
    void left_mul_pauli(const PauliString &p);
    void right_mul_pauli(const PauliString &p);
    // M <- (c_id I + c_p P) M; requires the factor to be applied from the left.
    void apply_factor_left(const PauliString &p, double c_id, double c_p);

    double max_abs_diff(const DenseMatrix &o) const;
    double max_abs() const;
    bool is_symmetric(double tol) const;
};

DenseMatrix matmul(const DenseMatrix &a, const DenseMatrix &b);

// Composite phase-flip channel on the listed qubits: every matrix element
// picks up (1-2p) per flipped qubit on which row and column differ.
void apply_phase_flip_channel(DenseMatrix &rho, double p, uint32_t qubit_mask);

// rho^{T_A} over the qubits in `mask`.
DenseMatrix partial_transpose(const DenseMatrix &rho, uint32_t mask);

// Reduced state on the qubits in `keep_mask` (ascending bit order).
DenseMatrix partial_trace_keep(const DenseMatrix &rho, uint32_t keep_mask);
DenseMatrix reduced_density_from_state(const DenseVec &psi, uint32_t keep_mask);

// Jacobi eigen decomposition for symmetric matrices (dim <= 4096).
struct EigenSym {
    std::vector<double> values;
    DenseMatrix vectors;  // columns
};
EigenSym eigen_symmetric(const DenseMatrix &m);

// Hermitian square root with eigenvalue clamp at zero (PSD noise below
// 1e-12 discarded).
DenseMatrix sqrt_psd(const DenseMatrix &m);

double pauli_expectation(const DenseVec &psi, const PauliString &p);
double pauli_expectation(const DenseMatrix &rho, const PauliString &p);

double renyi2_entropy(const DenseVec &psi, uint32_t region_mask);
double log_negativity(const DenseMatrix &rho, uint32_t region_mask);
double min_eigenvalue(const DenseMatrix &rho);
// tr[(rho^{T_A})^k]
double pt_moment(const DenseMatrix &rho, uint32_t region_mask, int k);
double matrix_moment(const DenseMatrix &rho, int k);

}  // namespace decotop::quantum

#endif
