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

#include "decotop/quantum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace decotop::quantum {

namespace {

uint32_t edges_mask(const lattice::Torus2D &lat) {
    return (uint32_t{1} << lat.n_edges()) - 1;
}

int parity32(uint32_t v) { return std::popcount(v) & 1; }

}  // namespace

std::vector<PauliString> cluster_stabilizers(const lattice::Torus2D &lat) {
    int ne = lat.n_edges();
    std::vector<PauliString> gens;
    for (int v = 0; v < lat.n_vertices(); v++) {
        PauliString s;
        s.x = uint32_t{1} << (ne + v);
        for (int e : lat.star_edges(v)) {
            s.z |= uint32_t{1} << e;
        }
        gens.push_back(s);
    }
    for (int e = 0; e < ne; e++) {
        PauliString s;
        s.x = uint32_t{1} << e;
        for (int v : lat.edge_vertices(e)) {
            s.z |= uint32_t{1} << (ne + v);
        }
        gens.push_back(s);
    }
    return gens;
}

std::vector<PauliString> toric_stabilizers(const lattice::Torus2D &lat) {
    std::vector<PauliString> gens;
    for (int v = 0; v < lat.n_vertices(); v++) {
        PauliString s;
        for (int e : lat.star_edges(v)) {
            s.z |= uint32_t{1} << e;
        }
        gens.push_back(s);
    }
    for (int p = 0; p < lat.n_plaquettes(); p++) {
        PauliString s;
        for (int e : lat.plaquette_edges(p)) {
            s.x |= uint32_t{1} << e;
        }
        gens.push_back(s);
    }
    for (int dir = 0; dir < 2; dir++) {
        gens.push_back(x_string(lattice::primal_loop_2d(lat, dir)));
    }
    return gens;
}

DenseVec stabilizer_state(int qubits, const std::vector<PauliString> &gens) {
    DenseMatrix p = DenseMatrix::identity(qubits);
    for (const PauliString &g : gens) {
        p.apply_factor_left(g, 0.5, 0.5);
    }
    // The projector has rank 1 for a complete generator list; take its best
    // column as the state.
    size_t best = 0;
    for (size_t r = 1; r < p.n; r++) {
        if (p.at(r, r) > p.at(best, best)) {
            best = r;
        }
    }
    if (p.at(best, best) <= 0) {
        throw std::runtime_error("stabilizer_state: generators have no joint +1 state");
    }
    DenseVec v(qubits);
    for (size_t r = 0; r < p.n; r++) {
        v.a[r] = p.at(r, best);
    }
    v.normalize();
    return v;
}

DenseVec cluster_ground_state(const lattice::Torus2D &lat) {
    return stabilizer_state(lat.n_edges() + lat.n_vertices(), cluster_stabilizers(lat));
}

DenseVec toric_ground_state(const lattice::Torus2D &lat) {
    return stabilizer_state(lat.n_edges(), toric_stabilizers(lat));
}

DenseVec project_vertices_plus(const lattice::Torus2D &lat, const DenseVec &cluster_state) {
    int ne = lat.n_edges(), nv = lat.n_vertices();
    DenseVec out(ne);
    double f = std::pow(2.0, -0.5 * nv);
    for (uint32_t be = 0; be < (uint32_t{1} << ne); be++) {
        double s = 0;
        for (uint32_t bv = 0; bv < (uint32_t{1} << nv); bv++) {
            s += cluster_state.a[be | (bv << ne)];
        }
        out.a[be] = f * s;
    }
    return out;
}

DenseMatrix apply_channel(const DenseMatrix &rho, double p, uint32_t edge_mask) {
    DenseMatrix out = rho;
    apply_phase_flip_channel(out, p, edge_mask);
    return out;
}

double gibbs_form_check(const lattice::Torus2D &lat, double p, int corrupt_stabilizer) {
    int ne = lat.n_edges(), nv = lat.n_vertices();
    auto gens = cluster_stabilizers(lat);
    if (corrupt_stabilizer >= 0) {
        gens[corrupt_stabilizer % gens.size()].sign *= -1;
    }
    DenseVec psi_c = cluster_ground_state(lat);
    DenseMatrix lhs = DenseMatrix::outer(psi_c);
    apply_phase_flip_channel(lhs, p, edges_mask(lat));
    lhs.normalize_trace();

    statmech::NishimoriBeta nb = statmech::nishimori_beta_of(p);
    DenseMatrix rhs = DenseMatrix::identity(ne + nv);
    for (int v = 0; v < nv; v++) {
        rhs.apply_factor_left(gens[v], 0.5, 0.5);
    }
    for (int e = 0; e < ne; e++) {
        const PauliString &se = gens[nv + e];
        if (nb.infinite) {
            rhs.apply_factor_left(se, 0.5, 0.5);
        } else {
            rhs.apply_factor_left(se, std::cosh(nb.beta), std::sinh(nb.beta));
        }
    }
    rhs.normalize_trace();
    return lhs.max_abs_diff(rhs);
}

namespace {

// Normalized weights over all edge-sign configurations, proportional to the
// attached Ising partition function at the Nishimori temperature.
std::vector<double> sector_weights(const lattice::Torus2D &lat, double p) {
    auto model = statmech::ising2d_model(lat);
    int ne = lat.n_edges();
    std::vector<statmech::LogPartition> lps(size_t{1} << ne);
    statmech::DisorderSample s;
    s.model = model;
    s.p = p;
    statmech::NishimoriBeta nb = statmech::nishimori_beta_of(p);
    s.beta = nb.beta;
    s.beta_inf = nb.infinite;
    for (uint32_t x = 0; x < (uint32_t{1} << ne); x++) {
        s.sign.assign(ne, +1);
        for (int e = 0; e < ne; e++) {
            if ((x >> e) & 1) {
                s.sign[e] = -1;
            }
        }
        lps[x] = statmech::exact_logZ(s);
    }
    std::vector<double> w(size_t{1} << ne, 0.0);
    if (nb.infinite) {
        double e0 = lps[0].ground_energy;
        for (auto &lp : lps) {
            e0 = std::max(e0, lp.ground_energy);
        }
        for (size_t x = 0; x < w.size(); x++) {
            w[x] = lps[x].ground_energy == e0 ? std::exp(lps[x].log_degeneracy) : 0.0;
        }
    } else {
        double mx = lps[0].log_z;
        for (auto &lp : lps) {
            mx = std::max(mx, lp.log_z);
        }
        for (size_t x = 0; x < w.size(); x++) {
            w[x] = std::exp(lps[x].log_z - mx);
        }
    }
    double tot = 0;
    for (double v : w) {
        tot += v;
    }
    for (double &v : w) {
        v /= tot;
    }
    return w;
}

DenseVec gauss_projected_x_state(const lattice::Torus2D &lat, uint32_t x_mask) {
    int ne = lat.n_edges();
    DenseVec v(ne);
    double f = std::pow(2.0, -0.5 * ne);
    for (uint32_t b = 0; b < (uint32_t{1} << ne); b++) {
        v.a[b] = f * (parity32(x_mask & b) ? -1.0 : 1.0);
    }
    for (int vx = 0; vx < lat.n_vertices(); vx++) {
        PauliString star;
        for (int e : lat.star_edges(vx)) {
            star.z |= uint32_t{1} << e;
        }
        v.apply_factor(star, 0.5, 0.5);
    }
    return v;
}

}  // namespace

DenseMatrix decohered_toric_state(const lattice::Torus2D &lat, double p) {
    DenseVec psi0 = toric_ground_state(lat);
    DenseMatrix rho = DenseMatrix::outer(psi0);
    apply_phase_flip_channel(rho, p, edges_mask(lat));
    rho.normalize_trace();
    return rho;
}

SpectralCheck spectral_check(const lattice::Torus2D &lat, double p) {
    int ne = lat.n_edges();
    DenseMatrix lhs = decohered_toric_state(lat, p);
    std::vector<double> w = sector_weights(lat, p);

    DenseMatrix rhs(ne);
    std::vector<double> expected_eigs;
    std::vector<uint8_t> seen(size_t{1} << ne, 0);
    for (uint32_t x = 0; x < (uint32_t{1} << ne); x++) {
        if (seen[x]) {
            continue;
        }
        // One projected eigenstate per gauge orbit; the weight is the orbit's
        // total share.
        double orbit_weight = 0;
        for (uint32_t sigma = 0; sigma < (uint32_t{1} << lat.n_vertices()); sigma++) {
            uint32_t y = x;
            for (int v = 0; v < lat.n_vertices(); v++) {
                if ((sigma >> v) & 1) {
                    for (int e : lat.star_edges(v)) {
                        y ^= uint32_t{1} << e;
                    }
                }
            }
            if (!seen[y]) {
                seen[y] = 1;
                orbit_weight += w[y];
            }
        }
        expected_eigs.push_back(orbit_weight);
        if (orbit_weight > 0) {
            DenseVec omega = gauss_projected_x_state(lat, x);
            omega.normalize();
            rhs.accumulate_outer(omega, orbit_weight);
        }
    }
    rhs.normalize_trace();

    SpectralCheck out{};
    out.max_deviation = lhs.max_abs_diff(rhs);

    EigenSym es = eigen_symmetric(lhs);
    std::vector<double> got = es.values;
    std::sort(got.begin(), got.end(), std::greater<>());
    std::vector<double> want = expected_eigs;
    want.resize(got.size(), 0.0);
    std::sort(want.begin(), want.end(), std::greater<>());
    double dev = 0;
    for (size_t i = 0; i < got.size(); i++) {
        dev = std::max(dev, std::abs(got[i] - want[i]));
    }
    out.eigenvalue_deviation = dev;
    return out;
}

DenseVec sqrt_rho_state_dense(const lattice::Torus2D &lat, double p) {
    DenseMatrix rho = decohered_toric_state(lat, p);
    DenseMatrix root = sqrt_psd(rho);
    // |z = 1> is basis index 0, so the state is the first column of rho^{1/2}.
    DenseVec out(lat.n_edges());
    for (size_t r = 0; r < root.n; r++) {
        out.a[r] = root.at(r, 0);
    }
    out.normalize();
    return out;
}

DenseVec sqrt_rho_state_amplitude(const lattice::Torus2D &lat, double p) {
    int ne = lat.n_edges();
    std::vector<double> w = sector_weights(lat, p);
    DenseVec v(ne);
    for (size_t x = 0; x < w.size(); x++) {
        v.a[x] = std::sqrt(w[x]);
    }
    hadamard_all(v);  // to the Z basis
    v.normalize();
    return v;
}

PauliString z_string(const lattice::Cycle &cycle) {
    PauliString s;
    for (int e : cycle.edges) {
        s.z |= uint32_t{1} << e;
    }
    return s;
}

PauliString x_string(const lattice::Cycle &cycle) {
    PauliString s;
    for (int e : cycle.edges) {
        s.x |= uint32_t{1} << e;
    }
    return s;
}

uint32_t region_mask(const lattice::Bipartition &bp) {
    uint32_t m = 0;
    for (size_t e = 0; e < bp.in_a.size(); e++) {
        if (bp.in_a[e]) {
            m |= uint32_t{1} << e;
        }
    }
    return m;
}

DenseVec nonoptimal_member_dense(const lattice::Torus2D &lat, double p, uint32_t z_mask) {
    statmech::NishimoriBeta nb = statmech::nishimori_beta_of(p);
    if (nb.infinite) {
        throw std::invalid_argument("nonoptimal_member_dense: p = 0 not supported");
    }
    int ne = lat.n_edges(), nv = lat.n_vertices();
    auto gens = cluster_stabilizers(lat);
    // x_v is fixed by the z labels: x_v = prod_{e in v} z_e.
    uint32_t xv_neg = 0;
    for (int v = 0; v < nv; v++) {
        int prod = 1;
        for (int e : lat.star_edges(v)) {
            if ((z_mask >> e) & 1) {
                prod = -prod;
            }
        }
        if (prod < 0) {
            xv_neg |= uint32_t{1} << v;
        }
    }
    DenseVec full(ne + nv);
    double f = std::pow(2.0, -0.5 * nv);
    for (uint32_t bv = 0; bv < (uint32_t{1} << nv); bv++) {
        full.a[z_mask | (bv << ne)] = f * (parity32(xv_neg & bv) ? -1.0 : 1.0);
    }
    double ch = std::cosh(nb.beta / 2), sh = std::sinh(nb.beta / 2);
    for (int e = 0; e < ne; e++) {
        full.apply_factor(gens[nv + e], ch, sh);
    }
    return project_vertices_plus(lat, full);
}

}  // namespace decotop::quantum
