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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "decotop/quantum.hpp"

using namespace decotop;
using namespace decotop::quantum;

namespace {

lattice::Torus2D lat22() { return lattice::build_torus_2d(2, 2); }

}  // namespace

TEST_CASE("pauli algebra") {
    PauliString x = PauliString::xs(0b01);
    PauliString z = PauliString::zs(0b01);
    CHECK(!x.commutes(z));
    CHECK(x.commutes(PauliString::zs(0b10)));
    // (X Z)(X Z) = -I on one qubit.
    PauliString xz = x.times(z);
    PauliString sq = xz.times(xz);
    CHECK(sq.x == 0);
    CHECK(sq.z == 0);
    CHECK(sq.sign == -1);
}

TEST_CASE("dense matrix pauli actions agree with explicit matrices") {
    DenseMatrix m(2);
    for (size_t i = 0; i < 16; i++) {
        m.a[i] = (double)(i * 7 % 11) - 5;
    }
    PauliString p;
    p.x = 0b01;
    p.z = 0b10;
    DenseMatrix left = m;
    left.left_mul_pauli(p);
    DenseMatrix right = m;
    right.right_mul_pauli(p);
    for (size_t r = 0; r < 4; r++) {
        for (size_t c = 0; c < 4; c++) {
            double sign_r = (r >> 1) & 1 ? -1 : 1;  // (-1)^{z.(r^x)}, z = bit 1, x = bit 0
            CHECK(left.at(r, c) == doctest::Approx(sign_r * m.at(r ^ 1, c)));
            double sign_c = (c >> 1) & 1 ? -1 : 1;
            CHECK(right.at(r, c) == doctest::Approx(sign_c * m.at(r, c ^ 1)));
        }
    }
}

TEST_CASE("channel on a single qubit: bloch x shrinks by 1 - 2p") {
    DenseMatrix rho(1);
    rho.at(0, 0) = rho.at(0, 1) = rho.at(1, 0) = rho.at(1, 1) = 0.5;  // |+><+|
    apply_phase_flip_channel(rho, 0.2, 0b1);
    CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-14));
    double x_component = 2 * rho.at(0, 1);
    CHECK(x_component == doctest::Approx(0.6).epsilon(1e-14));
}

TEST_CASE("channel preserves trace and hermiticity, decreases purity") {
    lattice::Torus2D lat = lat22();
    DenseVec toric = toric_ground_state(lat);
    DenseMatrix rho = DenseMatrix::outer(toric);
    rho.normalize_trace();
    DenseMatrix out = apply_channel(rho, 0.0, 0xff);
    CHECK(out.max_abs_diff(rho) == doctest::Approx(0.0));
    DenseMatrix half = apply_channel(rho, 0.5, 0xff);
    CHECK(half.trace() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(half.is_symmetric(1e-12));
    double purity0 = matrix_moment(rho, 2);
    double purity5 = matrix_moment(half, 2);
    CHECK(purity5 < purity0 - 0.1);
    // p = 0.5 kills every coherence between strings differing on any edge.
    for (size_t r = 0; r < half.n; r++) {
        for (size_t c = 0; c < half.n; c++) {
            if (r != c) {
                CHECK(std::abs(half.at(r, c)) < 1e-14);
            }
        }
    }
}

TEST_CASE("cluster state is stabilized and projects onto the code state") {
    lattice::Torus2D lat = lat22();
    DenseVec cluster = cluster_ground_state(lat);
    for (const PauliString &s : cluster_stabilizers(lat)) {
        CHECK(pauli_expectation(cluster, s) == doctest::Approx(1.0).epsilon(1e-12));
    }
    DenseVec projected = project_vertices_plus(lat, cluster);
    DenseVec toric = toric_ground_state(lat);
    CHECK(fidelity(projected, toric) == doctest::Approx(1.0).epsilon(1e-10));
    for (int dir = 0; dir < 2; dir++) {
        PauliString w = x_string(lattice::primal_loop_2d(lat, dir));
        CHECK(pauli_expectation(toric, w) == doctest::Approx(1.0).epsilon(1e-12));
    }
    for (const PauliString &s : toric_stabilizers(lat)) {
        CHECK(pauli_expectation(toric, s) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("gibbs form holds at p = 0, 0.2, 0.5; corrupted form is caught") {
    lattice::Torus2D lat = lat22();
    CHECK(gibbs_form_check(lat, 0.0) < 1e-12);
    CHECK(gibbs_form_check(lat, 0.2) < 1e-10);
    CHECK(gibbs_form_check(lat, 0.5) < 1e-10);
    CHECK(gibbs_form_check(lat, 0.2, lat.n_vertices()) > 1e-6);
}

TEST_CASE("spectral form and eigenvalues") {
    lattice::Torus2D lat = lat22();
    CHECK(spectral_check(lat, 0.0).max_deviation < 1e-10);
    SpectralCheck c = spectral_check(lat, 0.1);
    CHECK(c.max_deviation < 1e-10);
    CHECK(c.eigenvalue_deviation < 1e-10);
}

TEST_CASE("sqrt-rho state limits and backend agreement") {
    lattice::Torus2D lat = lat22();
    DenseVec amp0 = sqrt_rho_state_amplitude(lat, 0.0);
    CHECK(fidelity(amp0, toric_ground_state(lat)) == doctest::Approx(1.0).epsilon(1e-12));
    DenseVec amp5 = sqrt_rho_state_amplitude(lat, 0.5);
    DenseVec z1 = DenseVec::basis_state(lat.n_edges(), 0);
    CHECK(fidelity(amp5, z1) == doctest::Approx(1.0).epsilon(1e-12));
    DenseVec dense = sqrt_rho_state_dense(lat, 0.15);
    DenseVec amp = sqrt_rho_state_amplitude(lat, 0.15);
    CHECK(std::abs(1 - fidelity(dense, amp)) < 1e-10);
}

TEST_CASE("renyi2 and negativity on product and bell states") {
    DenseVec prod2(2);
    prod2.a[0] = 0.6;
    prod2.a[2] = 0.8;
    CHECK(renyi2_entropy(prod2, 0b01) == doctest::Approx(0.0).epsilon(1e-12));
    DenseMatrix rho_prod = DenseMatrix::outer(prod2);
    rho_prod.normalize_trace();
    CHECK(log_negativity(rho_prod, 0b01) == doctest::Approx(0.0).epsilon(1e-10));

    DenseVec bell(2);
    bell.a[0] = bell.a[3] = 1 / std::sqrt(2.0);
    DenseMatrix rho_bell = DenseMatrix::outer(bell);
    rho_bell.normalize_trace();
    CHECK(log_negativity(rho_bell, 0b01) == doctest::Approx(std::log(2.0)).epsilon(1e-10));
    CHECK(renyi2_entropy(bell, 0b01) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("toric code entanglement on the plaquette region") {
    lattice::Torus2D lat = lat22();
    DenseVec toric = toric_ground_state(lat);
    lattice::Bipartition region = lattice::rect_region_2d(lat, 0, 0, 1, 1);
    uint32_t mask = region_mask(region);
    REQUIRE(lattice::region_boundary_size_2d(lat, region) == 4);
    CHECK(renyi2_entropy(toric, mask) == doctest::Approx(3 * std::log(2.0)).epsilon(1e-10));
    // The pure-state log negativity carries the same (|dA| - 1) log 2,
    // including the topological -log 2.
    DenseMatrix rho = DenseMatrix::outer(toric);
    rho.normalize_trace();
    CHECK(log_negativity(rho, mask) == doctest::Approx(3 * std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("sqrt_psd squares back; channel output stays PSD") {
    lattice::Torus2D lat = lat22();
    DenseMatrix rho = decohered_toric_state(lat, 0.2);
    DenseMatrix root = sqrt_psd(rho);
    DenseMatrix sq = matmul(root, root);
    CHECK(sq.max_abs_diff(rho) < 1e-11);
    for (double p : {0.05, 0.25, 0.45}) {
        CHECK(min_eigenvalue(decohered_toric_state(lat, p)) > -1e-10);
    }
}

TEST_CASE("partial trace consistency") {
    lattice::Torus2D lat = lat22();
    DenseVec toric = toric_ground_state(lat);
    DenseMatrix rho = DenseMatrix::outer(toric);
    rho.normalize_trace();
    uint32_t keep = 0b1011;
    DenseMatrix a = partial_trace_keep(rho, keep);
    DenseMatrix b = reduced_density_from_state(toric, keep);
    CHECK(a.max_abs_diff(b) < 1e-12);
    CHECK(a.trace() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("partial transpose is an involution and preserves trace") {
    lattice::Torus2D lat = lat22();
    DenseMatrix rho = decohered_toric_state(lat, 0.17);
    DenseMatrix pt = partial_transpose(rho, 0b0110);
    CHECK(pt.trace() == doctest::Approx(rho.trace()).epsilon(1e-12));
    DenseMatrix back = partial_transpose(pt, 0b0110);
    CHECK(back.max_abs_diff(rho) == doctest::Approx(0.0));
    CHECK(pt_moment(rho, 0b0110, 2) == doctest::Approx(matrix_moment(rho, 2)).epsilon(1e-12));
}

TEST_CASE("dense budget guard") {
    CHECK_THROWS_AS(DenseMatrix(14), std::invalid_argument);
}
