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

#include "decotop/observables.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "decotop/rng.hpp"

namespace decotop::obs {

using lattice::Bipartition;
using lattice::Cycle;
using lattice::Torus2D;
using lattice::Torus3D;
using statmech::DisorderSample;
using statmech::ModelKind;
using statmech::TermModel;

namespace {

double logsumexp(const std::vector<double> &v) {
    double mx = -std::numeric_limits<double>::infinity();
    for (double x : v) {
        mx = std::max(mx, x);
    }
    double acc = 0;
    for (double x : v) {
        acc += std::exp(x - mx);
    }
    return mx + std::log(acc);
}

// One edge-sign representative per (flux, logical) sector of the 2d torus:
// defects are pushed north (east on the last row) in a row-major sweep, then
// the logical labels are set by non-contractible dual-loop flips.
std::vector<int8_t> sector_representative_2d(const Torus2D &lat, uint32_t flux_bits, bool lx_neg,
                                             bool ly_neg) {
    int np = lat.n_plaquettes();
    std::vector<int8_t> flux(np, +1);
    int parity = 0;
    for (int i = 0; i < np - 1; i++) {
        if ((flux_bits >> i) & 1) {
            flux[i] = -1;
            parity ^= 1;
        }
    }
    flux[np - 1] = parity ? -1 : +1;

    std::vector<int8_t> sign(lat.n_edges(), +1);
    auto plaq_flux = [&](int x, int y) {
        int8_t f = +1;
        for (int e : lat.plaquette_edges(lat.plaquette(x, y))) {
            f *= sign[e];
        }
        return f;
    };
    for (int y = 0; y < lat.ly; y++) {
        for (int x = 0; x < lat.lx; x++) {
            if (x == lat.lx - 1 && y == lat.ly - 1) {
                continue;
            }
            if (plaq_flux(x, y) != flux[lat.plaquette(x, y)]) {
                int e = (y < lat.ly - 1) ? lat.h_edge(x, y + 1) : lat.v_edge(x + 1, y);
                sign[e] = -sign[e];
            }
        }
    }
    lattice::BinaryConfig cfg{sign};
    lattice::FluxAndLogical fl = lattice::flux_of(cfg, lat);
    if ((fl.logical_x < 0) != lx_neg) {
        for (int e : lattice::dual_loop_2d(lat, 1).edges) {
            sign[e] = -sign[e];
        }
    }
    if ((fl.logical_y < 0) != ly_neg) {
        for (int e : lattice::dual_loop_2d(lat, 0).edges) {
            sign[e] = -sign[e];
        }
    }
    return sign;
}

OrderParameterResult order_parameter_from_logz(const std::vector<double> &log_z,
                                               const std::vector<double> &log_z_twisted,
                                               const char *method) {
    std::vector<double> num(log_z.size());
    for (size_t i = 0; i < log_z.size(); i++) {
        num[i] = 0.5 * (log_z[i] + log_z_twisted[i]);
    }
    double log_den = logsumexp(log_z);
    double log_num = logsumexp(num);
    OrderParameterResult out;
    out.estimate.mean = std::exp(log_num - log_den);
    out.estimate.std_err = 0;
    out.estimate.n = (long)log_z.size();
    out.estimate.method = method;
    double mean_df = 0;
    for (size_t i = 0; i < log_z.size(); i++) {
        mean_df += std::exp(log_z[i] - log_den) * (log_z[i] - log_z_twisted[i]);
    }
    out.mean_df = mean_df;
    out.jensen_floor = std::exp(-mean_df / 2);
    return out;
}

OrderParameterResult trivial_limit(double value, const char *method) {
    OrderParameterResult out;
    out.estimate.mean = value;
    out.estimate.std_err = 0;
    out.estimate.n = 1;
    out.estimate.method = method;
    out.mean_df = value == 1.0 ? 0.0 : std::numeric_limits<double>::infinity();
    out.jensen_floor = value;
    return out;
}

}  // namespace

OrderParameterResult thooft_2d_exact(double p, int size) {
    if (size < 2 || size > 4) {
        throw std::invalid_argument("thooft_2d_exact: size must be 2..4");
    }
    if (p == 0.5) {
        return trivial_limit(1.0, "exact-enumeration");
    }
    if (p == 0) {
        // At beta = inf only the frustration-free sector carries weight and a
        // non-contractible dual flip strictly lowers the attainable energy.
        return trivial_limit(0.0, "exact-enumeration");
    }
    Torus2D lat = lattice::build_torus_2d(size, size);
    auto model = statmech::ising2d_model(lat);
    statmech::NishimoriBeta nb = statmech::nishimori_beta_of(p);
    int np = lat.n_plaquettes();
    size_t n_flux = size_t{1} << (np - 1);
    std::vector<double> lz, lzt;
    lz.reserve(n_flux * 4);
    lzt.reserve(n_flux * 4);
    DisorderSample s;
    s.model = model;
    s.p = p;
    s.beta = nb.beta;
    s.beta_inf = false;
    for (size_t f = 0; f < n_flux; f++) {
        for (int sector = 0; sector < 4; sector++) {
            s.sign = sector_representative_2d(lat, (uint32_t)f, sector & 1, sector & 2);
            statmech::TwistedPair tp = statmech::transfer_logZ_2d_twisted_pair(s);
            lz.push_back(tp.log_z);
            lzt.push_back(tp.log_z_twisted);
        }
    }
    return order_parameter_from_logz(lz, lzt, "exact-enumeration");
}

OrderParameterResult thooft_2d_sampled(double p, int size, int n_samples, uint64_t seed) {
    if (size > 16) {
        throw std::invalid_argument("thooft_2d_sampled: width over 16");
    }
    if (p == 0.5 || p == 0) {
        return trivial_limit(p == 0.5 ? 1.0 : 0.0, "transfer");
    }
    Torus2D lat = lattice::build_torus_2d(size, size);
    auto model = statmech::ising2d_model(lat);
    double sum = 0, sum2 = 0, dfsum = 0;
    for (int i = 0; i < n_samples; i++) {
        DisorderSample s = statmech::sample_nishimori(model, p, derive_seed(seed, i));
        statmech::TwistedPair tp = statmech::transfer_logZ_2d_twisted_pair(s);
        double df = tp.log_z - tp.log_z_twisted;
        double v = std::exp(-df / 2);
        sum += v;
        sum2 += v * v;
        dfsum += df;
    }
    OrderParameterResult out;
    out.estimate.mean = sum / n_samples;
    out.estimate.std_err =
        std::sqrt(std::max(0.0, (sum2 / n_samples - out.estimate.mean * out.estimate.mean) /
                                    std::max(1, n_samples - 1)));
    out.estimate.n = n_samples;
    out.estimate.method = "transfer";
    out.mean_df = dfsum / n_samples;
    out.jensen_floor = std::exp(-out.mean_df / 2);
    return out;
}

namespace {

Cycle twist_cycle_3d(const Torus3D &lat, ModelKind kind) {
    switch (kind) {
        case ModelKind::gauge_ising3d:
        case ModelKind::plaquette_ising3d:
            return lattice::primal_loop_3d(lat, 2);
        case ModelKind::ising3d:
            return lattice::dual_membrane_3d(lat, 2);
        default:
            throw std::invalid_argument("twist_cycle_3d: 3d kinds only");
    }
}

std::shared_ptr<const TermModel> model_3d(const Torus3D &lat, ModelKind kind) {
    switch (kind) {
        case ModelKind::gauge_ising3d:
            return statmech::gauge_ising3d_model(lat);
        case ModelKind::plaquette_ising3d:
            return statmech::plaquette_ising3d_model(lat);
        case ModelKind::ising3d:
            return statmech::ising3d_model(lat);
        default:
            throw std::invalid_argument("model_3d: 3d kinds only");
    }
}

Gf2Basis full_coordinate_basis(int nbits) {
    Gf2Basis b(nbits);
    for (int i = 0; i < nbits; i++) {
        BitVec u(nbits);
        u.set(i, true);
        b.add(u);
    }
    return b;
}

}  // namespace

OrderParameterResult wilson_3d_exact(double p, int size, ModelKind kind) {
    if (p == 0.5) {
        return trivial_limit(1.0, "exact-enumeration");
    }
    Torus3D lat = lattice::build_torus_3d(size, size, size);
    auto model = model_3d(lat, kind);
    Cycle twist = twist_cycle_3d(lat, kind);
    if (p == 0) {
        DisorderSample s = statmech::ferro_sample(model, 0);
        s.beta_inf = true;
        statmech::LogPartition z0 = statmech::exact_logZ(s);
        statmech::LogPartition zt = statmech::exact_logZ_flipped(s, twist.edges);
        if (zt.ground_energy >= z0.ground_energy) {
            throw std::logic_error("wilson_3d_exact: twist does not cost energy");
        }
        return trivial_limit(0.0, "exact-enumeration");
    }
    // One representative per coset of the spin-flip span = per disorder sector.
    Gf2Basis span(model->n_terms);
    for (int sp = 0; sp < model->n_spins; sp++) {
        BitVec v(model->n_terms);
        for (int t : model->spin_terms[sp]) {
            v.flip(t);
        }
        span.add(v);
    }
    if (model->n_terms - span.rank() > 20) {
        throw std::invalid_argument("wilson_3d_exact: sector count over budget");
    }
    std::vector<BitVec> reps = span.coset_reps_within(full_coordinate_basis(model->n_terms));
    statmech::NishimoriBeta nb = statmech::nishimori_beta_of(p);
    DisorderSample s;
    s.model = model;
    s.p = p;
    s.beta = nb.beta;
    s.beta_inf = false;
    std::vector<double> lz, lzt;
    lz.reserve(reps.size());
    lzt.reserve(reps.size());
    for (const BitVec &rep : reps) {
        s.sign.assign(model->n_terms, +1);
        for (int t = 0; t < model->n_terms; t++) {
            if (rep.get(t)) {
                s.sign[t] = -1;
            }
        }
        lz.push_back(statmech::exact_logZ(s).log_z);
        lzt.push_back(statmech::exact_logZ_flipped(s, twist.edges).log_z);
    }
    return order_parameter_from_logz(lz, lzt, "exact-enumeration");
}

OrderParameterResult wilson_3d_sampled(double p, int size, ModelKind kind, int n_samples,
                                       uint64_t seed) {
    if (p == 0.5 || p == 0) {
        return trivial_limit(p == 0.5 ? 1.0 : 0.0, "mc-disorder");
    }
    Torus3D lat = lattice::build_torus_3d(size, size, size);
    auto model = model_3d(lat, kind);
    Cycle twist = twist_cycle_3d(lat, kind);
    double sum = 0, sum2 = 0, dfsum = 0;
    for (int i = 0; i < n_samples; i++) {
        DisorderSample s = statmech::sample_nishimori(model, p, derive_seed(seed, i));
        double df =
            statmech::exact_logZ(s).log_z - statmech::exact_logZ_flipped(s, twist.edges).log_z;
        double v = std::exp(-df / 2);
        sum += v;
        sum2 += v * v;
        dfsum += df;
    }
    OrderParameterResult out;
    out.estimate.mean = sum / n_samples;
    out.estimate.std_err =
        std::sqrt(std::max(0.0, (sum2 / n_samples - out.estimate.mean * out.estimate.mean) /
                                    std::max(1, n_samples - 1)));
    out.estimate.n = n_samples;
    out.estimate.method = "mc-disorder";
    out.mean_df = dfsum / n_samples;
    out.jensen_floor = std::exp(-out.mean_df / 2);
    return out;
}

// ---------------------------------------------------------------------------
// Dual-ensemble correlator identity (2d and 3d).
// ---------------------------------------------------------------------------

namespace {

// Spins on dual cells with per-configuration wall masks; homology sectors are
// summed on both sides so the identity is exact on the torus.
struct DualEnsemble {
    int n_edges = 0;
    int n_spin_configs = 0;
    std::vector<uint64_t> wall;
    std::vector<uint64_t> sectors;
    uint64_t path = 0;
    double coupling_k = 0;
    std::vector<double> weight_tab;
    std::vector<int8_t> spin_sign;

    void prepare(double p) {
        statmech::NishimoriBeta nb = statmech::nishimori_beta_of(p);
        if (nb.infinite || p >= 0.5) {
            throw std::invalid_argument("dual ensemble: need 0 < p < 0.5");
        }
        coupling_k = statmech::domain_wall_coupling(nb.beta);
        weight_tab.resize(n_edges + 1);
        for (int k = 0; k <= n_edges; k++) {
            weight_tab[k] = std::exp(-2 * coupling_k * k);
        }
        spin_sign.resize(n_spin_configs);
        for (int s = 0; s < n_spin_configs; s++) {
            spin_sign[s] = std::popcount(wall[s] & path) & 1 ? -1 : +1;
        }
    }

    std::pair<double, double> z_and_num(uint64_t e_mask) const {
        double z = 0, num = 0;
        for (uint64_t h : sectors) {
            uint64_t base = e_mask ^ h;
            double hsign = std::popcount(h & path) & 1 ? -1.0 : 1.0;
            for (int s = 0; s < n_spin_configs; s++) {
                double w = weight_tab[std::popcount(base ^ wall[s])];
                z += w;
                num += hsign * spin_sign[s] * w;
            }
        }
        return {z, num};
    }
};

DualEnsemble dual_ensemble_2d(const Torus2D &lat, std::pair<int, int> endpoints) {
    DualEnsemble de;
    de.n_edges = lat.n_edges();
    de.n_spin_configs = 1 << lat.n_plaquettes();
    de.wall.resize(de.n_spin_configs);
    for (int s = 0; s < de.n_spin_configs; s++) {
        uint64_t w = 0;
        for (int e = 0; e < lat.n_edges(); e++) {
            auto [pa, pb] = lat.edge_plaquettes(e);
            if ((((s >> pa) ^ (s >> pb)) & 1) != 0) {
                w |= uint64_t{1} << e;
            }
        }
        de.wall[s] = w;
    }
    uint64_t hx = 0, hy = 0;
    for (int e : lattice::primal_loop_2d(lat, 0).edges) {
        hx |= uint64_t{1} << e;
    }
    for (int e : lattice::primal_loop_2d(lat, 1).edges) {
        hy |= uint64_t{1} << e;
    }
    de.sectors = {0, hx, hy, hx ^ hy};
    // Dual path between the endpoint plaquettes: east, then north.
    int ax = endpoints.first % lat.lx, ay = endpoints.first / lat.lx;
    int bx = endpoints.second % lat.lx, by = endpoints.second / lat.lx;
    uint64_t path = 0;
    int x = ax, y = ay;
    while (x != bx) {
        path ^= uint64_t{1} << lat.v_edge(x + 1, y);
        x = (x + 1) % lat.lx;
    }
    while (y != by) {
        path ^= uint64_t{1} << lat.h_edge(x, y + 1);
        y = (y + 1) % lat.ly;
    }
    de.path = path;
    return de;
}

DualEnsemble dual_ensemble_3d(const Torus3D &lat, std::pair<int, int> endpoints) {
    DualEnsemble de;
    de.n_edges = lat.n_edges();
    de.n_spin_configs = 1 << lat.n_vertices();
    de.wall.resize(de.n_spin_configs);
    for (int s = 0; s < de.n_spin_configs; s++) {
        uint64_t w = 0;
        for (int e = 0; e < lat.n_edges(); e++) {
            auto [va, vb] = lat.edge_vertices(e);
            if ((((s >> va) ^ (s >> vb)) & 1) != 0) {
                w |= uint64_t{1} << e;
            }
        }
        de.wall[s] = w;
    }
    // Sector offsets: coset representatives of the wall (cut) space inside
    // the space of edge sets meeting every face evenly.
    std::vector<BitVec> constraints;
    for (int f = 0; f < lat.n_faces(); f++) {
        BitVec c(lat.n_edges());
        for (int e : lat.face_edges(f)) {
            c.flip(e);
        }
        constraints.push_back(c);
    }
    Gf2Basis even_space = null_space(lat.n_edges(), constraints);
    Gf2Basis cut_space(lat.n_edges());
    for (int v = 0; v < lat.n_vertices(); v++) {
        BitVec c(lat.n_edges());
        for (int e : lat.star_edges(v)) {
            c.flip(e);
        }
        cut_space.add(c);
    }
    for (const BitVec &rep : cut_space.coset_reps_within(even_space)) {
        uint64_t m = 0;
        for (int e = 0; e < lat.n_edges(); e++) {
            if (rep.get(e)) {
                m |= uint64_t{1} << e;
            }
        }
        de.sectors.push_back(m);
    }
    // Primal path between the endpoint vertices: east, north, then up.
    auto [ax, ay, az] = lat.cell_xyz(endpoints.first);
    auto [bx, by, bz] = lat.cell_xyz(endpoints.second);
    uint64_t path = 0;
    int x = ax, y = ay, z = az;
    while (x != bx) {
        path ^= uint64_t{1} << lat.edge(0, x, y, z);
        x = (x + 1) % lat.lx;
    }
    while (y != by) {
        path ^= uint64_t{1} << lat.edge(1, x, y, z);
        y = (y + 1) % lat.ly;
    }
    while (z != bz) {
        path ^= uint64_t{1} << lat.edge(2, x, y, z);
        z = (z + 1) % lat.lz;
    }
    de.path = path;
    return de;
}

// Disorder rate q of the dual-coupling model: e^{-2K} = q / (1 - q).
double dual_disorder_rate(double coupling_k) {
    double r = std::exp(-2 * coupling_k);
    return r / (1 + r);
}

AnyonAvgResult anyon_avg_exact_full(const DualEnsemble &de) {
    double lhs_num = 0, lhs_den = 0, rhs_num = 0, rhs_den = 0;
    double q = dual_disorder_rate(de.coupling_k);
    double lq = q / (1 - q);
    std::vector<double> iid_tab(de.n_edges + 1);
    iid_tab[0] = 1;
    for (int k = 1; k <= de.n_edges; k++) {
        iid_tab[k] = iid_tab[k - 1] * lq;
    }
    for (uint64_t e_mask = 0; e_mask < (uint64_t{1} << de.n_edges); e_mask++) {
        auto [z, num] = de.z_and_num(e_mask);
        double t = num / z;
        lhs_num += z * t * t;
        lhs_den += z;
        double w = iid_tab[std::popcount(e_mask)];
        rhs_num += w * t;
        rhs_den += w;
    }
    AnyonAvgResult out;
    out.ensemble_lhs = lhs_num / lhs_den;
    out.rbim_rhs.mean = rhs_num / rhs_den;
    out.rbim_rhs.std_err = 0;
    out.rbim_rhs.n = (long)(uint64_t{1} << de.n_edges);
    out.rbim_rhs.method = "exact-enumeration";
    out.diff = out.ensemble_lhs - out.rbim_rhs.mean;
    return out;
}

double anyon_lhs_by_sectors(const DualEnsemble &de, const std::vector<uint64_t> &reps) {
    double lhs_num = 0, lhs_den = 0;
    for (uint64_t rep : reps) {
        auto [z, num] = de.z_and_num(rep);
        double t = num / z;
        lhs_num += z * t * t;
        lhs_den += z;
    }
    return lhs_num / lhs_den;
}

Estimate anyon_rhs_sampled(const DualEnsemble &de, int n_samples, uint64_t seed) {
    double q = dual_disorder_rate(de.coupling_k);
    double sum = 0, sum2 = 0;
    for (int i = 0; i < n_samples; i++) {
        Xoshiro256pp rng(derive_seed(seed, i));
        uint64_t e_mask = 0;
        for (int e = 0; e < de.n_edges; e++) {
            if (rng.uniform() < q) {
                e_mask |= uint64_t{1} << e;
            }
        }
        auto [z, num] = de.z_and_num(e_mask);
        double t = num / z;
        sum += t;
        sum2 += t * t;
    }
    Estimate est;
    est.mean = sum / n_samples;
    est.std_err = std::sqrt(
        std::max(0.0, (sum2 / n_samples - est.mean * est.mean) / std::max(1, n_samples - 1)));
    est.n = n_samples;
    est.method = "mc-disorder";
    return est;
}

// Representatives of edge-sign classes modulo the full wall space (gauge
// moves plus homology offsets) for the reduced exact lhs.
std::vector<uint64_t> class_reps(int n_edges, Gf2Basis &space) {
    if (n_edges - space.rank() > 20) {
        throw std::invalid_argument("anyon lhs: class count over budget");
    }
    std::vector<uint64_t> out;
    Gf2Basis b(n_edges);
    for (int i = 0; i < n_edges; i++) {
        BitVec u(n_edges);
        u.set(i, true);
        b.add(u);
    }
    for (const BitVec &rep : space.coset_reps_within(b)) {
        uint64_t m = 0;
        for (int e = 0; e < n_edges; e++) {
            if (rep.get(e)) {
                m |= uint64_t{1} << e;
            }
        }
        out.push_back(m);
    }
    return out;
}

}  // namespace

std::pair<int, int> separated_plaquettes(const Torus2D &lat) {
    return {lat.plaquette(0, 0), lat.plaquette(lat.lx / 2, lat.ly / 2)};
}

std::pair<int, int> separated_vertices(const Torus3D &lat) {
    return {lat.vertex(0, 0, 0), lat.vertex(lat.lx / 2, lat.ly / 2, lat.lz / 2)};
}

AnyonAvgResult anyon_avg_2d_exact(double p, int size, std::pair<int, int> endpoints) {
    if (size > 3) {
        throw std::invalid_argument("anyon_avg_2d_exact: full enumeration capped at size 3");
    }
    Torus2D lat = lattice::build_torus_2d(size, size);
    DualEnsemble de = dual_ensemble_2d(lat, endpoints);
    de.prepare(p);
    return anyon_avg_exact_full(de);
}

AnyonAvgResult anyon_avg_2d_mixed(double p, int size, std::pair<int, int> endpoints, int n_samples,
                                  uint64_t seed) {
    if (size > 4) {
        throw std::invalid_argument("anyon_avg_2d_mixed: size capped at 4");
    }
    Torus2D lat = lattice::build_torus_2d(size, size);
    DualEnsemble de = dual_ensemble_2d(lat, endpoints);
    de.prepare(p);
    Gf2Basis space(lat.n_edges());
    for (int s = 0; s < de.n_spin_configs; s++) {
        BitVec v(lat.n_edges());
        for (int e = 0; e < lat.n_edges(); e++) {
            if ((de.wall[s] >> e) & 1) {
                v.flip(e);
            }
        }
        if (!space.add(v)) {
            continue;
        }
    }
    for (uint64_t h : de.sectors) {
        BitVec v(lat.n_edges());
        for (int e = 0; e < lat.n_edges(); e++) {
            if ((h >> e) & 1) {
                v.flip(e);
            }
        }
        space.add(v);
    }
    AnyonAvgResult out;
    out.ensemble_lhs = anyon_lhs_by_sectors(de, class_reps(lat.n_edges(), space));
    out.rbim_rhs = anyon_rhs_sampled(de, n_samples, seed);
    out.diff = out.ensemble_lhs - out.rbim_rhs.mean;
    return out;
}

AnyonAvgResult anyon_avg_3d(double p, int size, std::pair<int, int> endpoints, int n_samples,
                            uint64_t seed) {
    if (size > 2) {
        throw std::invalid_argument("anyon_avg_3d: size capped at 2");
    }
    Torus3D lat = lattice::build_torus_3d(size, size, size);
    DualEnsemble de = dual_ensemble_3d(lat, endpoints);
    de.prepare(p);
    Gf2Basis space(lat.n_edges());
    for (int v = 0; v < lat.n_vertices(); v++) {
        BitVec c(lat.n_edges());
        for (int e : lat.star_edges(v)) {
            c.flip(e);
        }
        space.add(c);
    }
    for (uint64_t h : de.sectors) {
        BitVec c(lat.n_edges());
        for (int e = 0; e < lat.n_edges(); e++) {
            if ((h >> e) & 1) {
                c.flip(e);
            }
        }
        space.add(c);
    }
    AnyonAvgResult out;
    out.ensemble_lhs = anyon_lhs_by_sectors(de, class_reps(lat.n_edges(), space));
    out.rbim_rhs = anyon_rhs_sampled(de, n_samples, seed);
    out.diff = out.ensemble_lhs - out.rbim_rhs.mean;
    return out;
}

// ---------------------------------------------------------------------------
// Bond-swap Renyi-2.
// ---------------------------------------------------------------------------

Renyi2Result renyi2_swap(double p, const Torus2D &lat, const Bipartition &region) {
    int ne = lat.n_edges(), nv = lat.n_vertices();

    if (p == 0) {
        // Frozen-sector pair count: both copies and both bond-swapped copies
        // must stay frustration-free. The surviving fraction is the kernel of
        // a linear map, so count by GF(2) rank rather than by enumeration:
        // with V the pure-gauge wall space, tr(rho_A^2) = 2^{-rank} where the
        // rank is that of {star & A, star & B} modulo V.
        Gf2Basis wall_space = lattice::gauge_group_2d(lat);
        Gf2Basis quotient = wall_space;
        int rank = 0;
        for (int v = 0; v < nv; v++) {
            BitVec in_a_part(ne), in_b_part(ne);
            for (int e : lat.star_edges(v)) {
                (region.in_a[e] ? in_a_part : in_b_part).flip(e);
            }
            rank += quotient.add(in_a_part);
            rank += quotient.add(in_b_part);
        }
        Renyi2Result out;
        out.s2 = rank * std::log(2.0);
        out.tr_rho_a2 = std::exp(-out.s2);
        return out;
    }

    if (ne > 20) {
        throw std::invalid_argument("renyi2_swap: size capped at 3");
    }
    uint32_t amask = 0;
    for (int e = 0; e < ne; e++) {
        if (region.in_a[e]) {
            amask |= uint32_t{1} << e;
        }
    }
    uint32_t bmask = ~amask & ((uint32_t{1} << ne) - 1);

    statmech::NishimoriBeta nb = statmech::nishimori_beta_of(p);
    auto model = statmech::ising2d_model(lat);
    std::vector<double> lz(size_t{1} << ne);
    {
        DisorderSample s;
        s.model = model;
        s.p = p;
        s.beta = nb.beta;
        s.beta_inf = false;
        for (uint32_t x = 0; x < (uint32_t{1} << ne); x++) {
            s.sign.assign(ne, +1);
            for (int e = 0; e < ne; e++) {
                if ((x >> e) & 1) {
                    s.sign[e] = -1;
                }
            }
            lz[x] = statmech::exact_logZ(s).log_z;
        }
    }
    // The quadruple weight is invariant when the same vertex gauge hits both
    // copies, so the first copy runs over sector representatives only.
    Gf2Basis gauge = lattice::gauge_group_2d(lat);
    Gf2Basis ambient(ne);
    for (int e = 0; e < ne; e++) {
        BitVec u(ne);
        u.set(e, true);
        ambient.add(u);
    }
    std::vector<BitVec> reps = gauge.coset_reps_within(ambient);
    double mx = -std::numeric_limits<double>::infinity();
    for (double v : lz) {
        mx = std::max(mx, v);
    }
    double num = 0, den = 0;
    for (const BitVec &rep : reps) {
        uint32_t x = 0;
        for (int e = 0; e < ne; e++) {
            if (rep.get(e)) {
                x |= uint32_t{1} << e;
            }
        }
        for (uint32_t y = 0; y < (uint32_t{1} << ne); y++) {
            uint32_t m1 = (y & amask) | (x & bmask);
            uint32_t m2 = (x & amask) | (y & bmask);
            num += std::exp(0.5 * (lz[x] + lz[y] + lz[m1] + lz[m2]) - 2 * mx);
            den += std::exp(lz[x] + lz[y] - 2 * mx);
        }
    }
    Renyi2Result out;
    out.tr_rho_a2 = num / den;
    out.s2 = -std::log(out.tr_rho_a2);
    return out;
}

// ---------------------------------------------------------------------------
// Replica-moment negativity.
// ---------------------------------------------------------------------------

namespace {

void wht(std::vector<double> &v) {
    size_t n = v.size();
    for (size_t len = 1; len < n; len <<= 1) {
        for (size_t i = 0; i < n; i += 2 * len) {
            for (size_t j = i; j < i + len; j++) {
                double x = v[j], y = v[j + len];
                v[j] = x + y;
                v[j + len] = x - y;
            }
        }
    }
}

double ipow(double base, int k) {
    double r = 1;
    for (int i = 0; i < k; i++) {
        r *= base;
    }
    return r;
}

}  // namespace

NegativityMomentResult negativity_moment_2d_rho2(double p, const Torus2D &lat,
                                                 const Bipartition &region, int two_n) {
    if (two_n < 2 || two_n % 2 != 0) {
        throw std::invalid_argument("negativity_moment_2d_rho2: even moment order >= 2 required");
    }
    int ne = lat.n_edges(), nv = lat.n_vertices();
    double k = statmech::loop_fugacity_coupling(p);
    // Loop group: even-degree edge sets on the torus, all homology classes.
    std::vector<BitVec> constraints;
    for (int v = 0; v < nv; v++) {
        BitVec c(ne);
        for (int e : lat.star_edges(v)) {
            c.flip(e);
        }
        constraints.push_back(c);
    }
    Gf2Basis loops = null_space(ne, constraints);
    int d = loops.rank();
    if (d > 16) {
        throw std::invalid_argument("negativity_moment_2d_rho2: loop group over budget");
    }
    size_t n = size_t{1} << d;
    std::vector<uint32_t> mask(n, 0);
    for (size_t c = 1; c < n; c++) {
        int b = std::countr_zero(c);
        uint32_t bm = 0;
        for (int e = 0; e < ne; e++) {
            if (loops.rows[b].get(e)) {
                bm |= uint32_t{1} << e;
            }
        }
        mask[c] = mask[c & (c - 1)] ^ bm;
    }
    std::vector<double> w(n);
    for (size_t c = 0; c < n; c++) {
        w[c] = std::exp(-k * std::popcount(mask[c]));
    }
    // Squared-state coefficients: the self-convolution of w over the group.
    std::vector<double> f(n, 0.0);
    for (size_t a = 0; a < n; a++) {
        for (size_t c = 0; c < n; c++) {
            f[c] += w[a] * w[a ^ c];
        }
    }
    std::vector<double> fh = f;
    wht(fh);
    double s0 = 0;
    for (size_t c = 0; c < n; c++) {
        s0 += ipow(fh[c], two_n);
    }
    s0 /= (double)n;

    // Split subgroup: loops whose restriction to region A is itself closed.
    uint32_t amask = 0;
    for (int e = 0; e < ne; e++) {
        if (region.in_a[e]) {
            amask |= uint32_t{1} << e;
        }
    }
    std::vector<uint32_t> star(nv, 0);
    for (int v = 0; v < nv; v++) {
        for (int e : lat.star_edges(v)) {
            star[v] |= uint32_t{1} << e;
        }
    }
    Gf2Basis split(d);
    std::vector<size_t> h_gens;
    for (size_t c = 0; c < n; c++) {
        uint32_t restricted = mask[c] & amask;
        bool closed = true;
        for (int v = 0; v < nv && closed; v++) {
            closed = (std::popcount(restricted & star[v]) & 1) == 0;
        }
        if (!closed) {
            continue;
        }
        BitVec cv(d);
        for (int b = 0; b < d; b++) {
            if ((c >> b) & 1) {
                cv.set(b, true);
            }
        }
        if (split.add(cv)) {
            h_gens.push_back(c);
        }
    }
    int dh = split.rank();
    std::vector<size_t> h_elems(size_t{1} << dh, 0);
    for (size_t j = 1; j < h_elems.size(); j++) {
        h_elems[j] = h_elems[j & (j - 1)] ^ h_gens[std::countr_zero(j)];
    }
    double sa = 0;
    std::vector<double> g(size_t{1} << dh);
    for (const BitVec &repv : split.coset_reps_within(full_coordinate_basis(d))) {
        size_t rep = 0;
        for (int b = 0; b < d; b++) {
            if (repv.get(b)) {
                rep |= size_t{1} << b;
            }
        }
        for (size_t j = 0; j < g.size(); j++) {
            g[j] = f[rep ^ h_elems[j]];
        }
        wht(g);
        double acc = 0;
        for (double v : g) {
            acc += ipow(v, two_n);
        }
        sa += acc / (double)g.size();
    }

    NegativityMomentResult out;
    // Normalized moments tr[(rho^2)^{2n}] / (tr rho^2)^{2n}; the shared
    // prefactor is c^{2n-1} with c = 2^{nv-1-ne}.
    double log_c = (nv - 1 - ne) * std::log(2.0);
    double log_f0 = std::log(f[0]);
    out.log_moment = (two_n - 1) * log_c + std::log(s0) - two_n * log_f0;
    out.log_moment_pt = (two_n - 1) * log_c + std::log(sa) - two_n * log_f0;
    out.log_ratio = std::log(sa) - std::log(s0);
    out.negativity = two_n == 2 ? 0.0 : out.log_ratio / (2.0 - two_n);
    return out;
}

NegativityMomentResult negativity_moment_3d(double p, const Torus3D &lat,
                                            const Bipartition &region, int two_n) {
    auto base = statmech::ising3d_model(lat);
    double k = statmech::loop_fugacity_coupling(p);
    std::vector<int> boundary = region.boundary_vertices_3d(lat);
    statmech::FlavoredLogZ z0 = statmech::flavored_logZ(*base, k, two_n, nullptr);
    statmech::FlavoredLogZ za = statmech::flavored_logZ(*base, k, two_n, &boundary);
    NegativityMomentResult out;
    // tr(rho^{2n}) = Z_{2n} exp(-K n N_e) / (N_G^{2n} 2^{2n}), N_G = 2^{nv-1}.
    double log_ng = (lat.n_vertices() - 1) * std::log(2.0);
    double norm = -k * (two_n / 2.0) * lat.n_edges() - two_n * log_ng - two_n * std::log(2.0);
    out.log_moment = z0.log_z + norm;
    out.log_moment_pt = za.log_z + norm;
    out.log_ratio = za.log_z - z0.log_z;
    out.negativity = two_n == 2 ? 0.0 : out.log_ratio / (2.0 - two_n);
    return out;
}

// ---------------------------------------------------------------------------
// Sector-overlap pseudo free energy.
// ---------------------------------------------------------------------------

OverlapResult overlap_f_alpha(double p, int size, double alpha) {
    if (alpha <= 0) {
        throw std::invalid_argument("overlap_f_alpha: alpha must be positive");
    }
    if (size < 2 || size > 4) {
        throw std::invalid_argument("overlap_f_alpha: size must be 2..4");
    }
    Torus2D lat = lattice::build_torus_2d(size, size);
    auto model = statmech::ising2d_model(lat);
    statmech::NishimoriBeta nb = statmech::nishimori_beta_of(p);
    if (nb.infinite) {
        throw std::invalid_argument("overlap_f_alpha: p = 0 not supported");
    }
    int np = lat.n_plaquettes();
    size_t n_flux = size_t{1} << (np - 1);
    std::vector<double> lz;
    lz.reserve(n_flux * 4);
    DisorderSample s;
    s.model = model;
    s.p = p;
    s.beta = nb.beta;
    s.beta_inf = false;
    for (size_t f = 0; f < n_flux; f++) {
        for (int sector = 0; sector < 4; sector++) {
            s.sign = sector_representative_2d(lat, (uint32_t)f, sector & 1, sector & 2);
            lz.push_back(statmech::transfer_logZ_2d(s).log_z);
        }
    }
    double log_orbit = (lat.n_vertices() - 1) * std::log(2.0);
    double log_sum = logsumexp(lz) + log_orbit;
    double mean_log = 0;
    {
        double den = logsumexp(lz);
        for (double v : lz) {
            mean_log += std::exp(v - den) * v;
        }
    }
    OverlapResult out;
    out.log_sum_z = log_sum;
    out.mean_log_z = mean_log;
    if (alpha == 1.0) {
        out.f_alpha = log_sum - mean_log;
        return out;
    }
    std::vector<double> scaled(lz.size());
    for (size_t i = 0; i < lz.size(); i++) {
        scaled[i] = alpha * lz[i];
    }
    double log_sum_alpha = logsumexp(scaled) + log_orbit;
    out.f_alpha = (log_sum_alpha - alpha * log_sum) / (1 - alpha);
    return out;
}

}  // namespace decotop::obs
