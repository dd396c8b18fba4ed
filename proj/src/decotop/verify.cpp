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

#include "decotop/verify.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "decotop/observables.hpp"
#include "decotop/quantum.hpp"

namespace decotop::runner {

namespace {

using lattice::Torus2D;
using quantum::DenseMatrix;
using quantum::DenseVec;
using quantum::PauliString;

struct Battery {
    const VerifyOptions &opt;
    std::vector<CheckResult> results;

    bool wanted(const std::string &name) const {
        return opt.filter.empty() || name.find(opt.filter) != std::string::npos;
    }

    void record(const std::string &name, const std::string &params, double deviation,
                double threshold) {
        results.push_back({name, params, deviation, threshold, deviation <= threshold});
    }
};

std::string fmt_p(double p) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "p=%g", p);
    return buf;
}

void check_gibbs(Battery &b) {
    if (!b.wanted("gibbs")) {
        return;
    }
    Torus2D lat = lattice::build_torus_2d(2, 2);
    int corrupt = b.opt.inject_fault == "gibbs" ? lat.n_vertices() : -1;
    for (double p : {0.0, 0.2, 0.5}) {
        b.record("gibbs", fmt_p(p), quantum::gibbs_form_check(lat, p, corrupt), 1e-10);
    }
}

void check_spectral(Battery &b) {
    if (!b.wanted("spectral")) {
        return;
    }
    Torus2D lat = lattice::build_torus_2d(2, 2);
    for (double p : {0.05, 0.1, 0.2, 0.3}) {
        quantum::SpectralCheck sc = quantum::spectral_check(lat, p);
        double dev = sc.max_deviation;
        if (b.opt.inject_fault == "spectral") {
            dev += 1.0;
        }
        b.record("spectral", fmt_p(p), dev, 1e-10);
        b.record("spectral-eigenvalues", fmt_p(p), sc.eigenvalue_deviation, 1e-10);
    }
}

void check_sqrt_state(Battery &b) {
    if (!b.wanted("sqrt-state")) {
        return;
    }
    Torus2D lat = lattice::build_torus_2d(2, 2);
    for (double p : {0.15, 0.3}) {
        DenseVec dense = quantum::sqrt_rho_state_dense(lat, p);
        DenseVec amp = quantum::sqrt_rho_state_amplitude(lat, p);
        b.record("sqrt-state", fmt_p(p), std::abs(1 - quantum::fidelity(dense, amp)), 1e-10);
    }
    // Limits: pure sector state at p = 0, the all-up product state at p = 0.5.
    DenseVec amp0 = quantum::sqrt_rho_state_amplitude(lat, 0.0);
    b.record("sqrt-state-limit", "p=0",
             std::abs(1 - quantum::fidelity(amp0, quantum::toric_ground_state(lat))), 1e-10);
    DenseVec amp5 = quantum::sqrt_rho_state_amplitude(lat, 0.5);
    DenseVec z1 = DenseVec::basis_state(lat.n_edges(), 0);
    b.record("sqrt-state-limit", "p=0.5", std::abs(1 - quantum::fidelity(amp5, z1)), 1e-10);
}

void check_thooft_state(Battery &b) {
    if (!b.wanted("thooft-state")) {
        return;
    }
    Torus2D lat = lattice::build_torus_2d(2, 2);
    PauliString t = quantum::z_string(lattice::dual_loop_2d(lat, 1));
    for (double p : {0.05, 0.1, 0.2, 0.3}) {
        DenseVec psi = quantum::sqrt_rho_state_dense(lat, p);
        double dense_val = quantum::pauli_expectation(psi, t);
        double ratio = obs::thooft_2d_exact(p, 2).estimate.mean;
        b.record("thooft-state", fmt_p(p), std::abs(dense_val - ratio), 1e-10);
    }
}

void check_renyi2(Battery &b) {
    if (!b.wanted("renyi2")) {
        return;
    }
    Torus2D lat = lattice::build_torus_2d(2, 2);
    lattice::Bipartition region = lattice::rect_region_2d(lat, 0, 0, 1, 1);
    uint32_t amask = quantum::region_mask(region);
    for (double p : {0.1, 0.25}) {
        obs::Renyi2Result swap = obs::renyi2_swap(p, lat, region);
        DenseVec psi = quantum::sqrt_rho_state_dense(lat, p);
        double dense_s2 = quantum::renyi2_entropy(psi, amask);
        b.record("renyi2-swap", fmt_p(p), std::abs(swap.s2 - dense_s2), 1e-10);
    }
    obs::Renyi2Result frozen = obs::renyi2_swap(0.0, lat, region);
    double expect = (lattice::region_boundary_size_2d(lat, region) - 1) * std::log(2.0);
    b.record("renyi2-frozen", "p=0", std::abs(frozen.s2 - expect), 1e-10);
}

void check_anyon(Battery &b) {
    if (!b.wanted("anyon")) {
        return;
    }
    Torus2D lat = lattice::build_torus_2d(2, 2);
    auto endpoints = obs::separated_plaquettes(lat);
    for (double p : {0.1, 0.25}) {
        obs::AnyonAvgResult r = obs::anyon_avg_2d_exact(p, 2, endpoints);
        b.record("anyon-identity", fmt_p(p), std::abs(r.diff), 1e-10);
    }
    // Dense cross-check of the ensemble side through the parent-state route.
    double p = 0.2;
    obs::AnyonAvgResult r = obs::anyon_avg_2d_exact(p, 2, endpoints);
    // Dual path between the two plaquettes, as used by the ensemble.
    int ax = endpoints.first % lat.lx, ay = endpoints.first / lat.lx;
    int bx = endpoints.second % lat.lx, by = endpoints.second / lat.lx;
    lattice::Cycle path;
    {
        int x = ax, y = ay;
        while (x != bx) {
            path.edges.push_back(lat.v_edge(x + 1, y));
            x = (x + 1) % lat.lx;
        }
        while (y != by) {
            path.edges.push_back(lat.h_edge(x, y + 1));
            y = (y + 1) % lat.ly;
        }
    }
    PauliString tc = quantum::z_string(path);
    double num = 0, den = 0;
    for (uint32_t z = 0; z < (uint32_t{1} << lat.n_edges()); z++) {
        DenseVec member = quantum::nonoptimal_member_dense(lat, p, z);
        double w = member.norm2();
        double t = quantum::pauli_expectation(member, tc);
        num += w * t * t;
        den += w;
    }
    b.record("anyon-dense", fmt_p(p), std::abs(num / den - r.ensemble_lhs), 1e-10);
}

void check_negativity(Battery &b) {
    if (!b.wanted("negativity")) {
        return;
    }
    Torus2D lat = lattice::build_torus_2d(2, 2);
    lattice::Bipartition region = lattice::rect_region_2d(lat, 0, 0, 1, 1);
    uint32_t amask = quantum::region_mask(region);
    for (double p : {0.0, 0.1, 0.3}) {
        obs::NegativityMomentResult r = obs::negativity_moment_2d_rho2(p, lat, region, 2);
        DenseMatrix rho = quantum::decohered_toric_state(lat, p);
        DenseMatrix rho2 = quantum::matmul(rho, rho);
        double tr2 = rho2.trace();
        double dense_pt = quantum::pt_moment(rho2, amask, 2) / (tr2 * tr2);
        double dense_plain = quantum::matrix_moment(rho2, 2) / (tr2 * tr2);
        b.record("negativity-moment-pt", fmt_p(p),
                 std::abs(std::exp(r.log_moment_pt) - dense_pt), 1e-8);
        b.record("negativity-moment", fmt_p(p), std::abs(std::exp(r.log_moment) - dense_plain),
                 1e-8);
        b.record("negativity-ratio", fmt_p(p),
                 std::abs(std::exp(r.log_ratio) - dense_pt / dense_plain), 1e-8);
    }
}

void check_loop_commute(Battery &b) {
    if (!b.wanted("loop-commute")) {
        return;
    }
    Torus2D lat = lattice::build_torus_2d(2, 2);
    DenseMatrix rho = quantum::decohered_toric_state(lat, 0.13);
    // Exhaust the closed-loop X group: plaquettes plus both logical loops.
    std::vector<PauliString> gens;
    for (int pq = 0; pq < lat.n_plaquettes() - 1; pq++) {
        PauliString s;
        for (int e : lat.plaquette_edges(pq)) {
            s.x |= uint32_t{1} << e;
        }
        gens.push_back(s);
    }
    gens.push_back(quantum::x_string(lattice::primal_loop_2d(lat, 0)));
    gens.push_back(quantum::x_string(lattice::primal_loop_2d(lat, 1)));
    double worst = 0;
    for (uint32_t c = 0; c < (uint32_t{1} << gens.size()); c++) {
        PauliString g;
        for (size_t i = 0; i < gens.size(); i++) {
            if ((c >> i) & 1) {
                g = g.times(gens[i]);
            }
        }
        DenseMatrix left = rho;
        left.left_mul_pauli(g);
        DenseMatrix right = rho;
        right.right_mul_pauli(g);
        worst = std::max(worst, left.max_abs_diff(right));
    }
    b.record("loop-commute", "p=0.13, 32 loops", worst, 1e-12);
}

void check_amplitude_norm(Battery &b) {
    if (!b.wanted("amplitude-norm")) {
        return;
    }
    // 3x3 amplitude-path item: the summed sector weights obey the closed form
    // sum_x Z_x = 2^{N_v} (2 cosh beta)^{N_e}, probing every sign pattern.
    for (double p : {0.1, 0.3}) {
        obs::OverlapResult r = obs::overlap_f_alpha(p, 3, 2.0);
        double beta = statmech::nishimori_beta_of(p).beta;
        double closed = 9 * std::log(2.0) + 18 * std::log(2 * std::cosh(beta));
        b.record("amplitude-norm", fmt_p(p), std::abs(r.log_sum_z - closed), 1e-9);
    }
}

void check_channel_psd(Battery &b) {
    if (!b.wanted("channel-psd")) {
        return;
    }
    Torus2D lat = lattice::build_torus_2d(2, 2);
    for (double p : {0.05, 0.2, 0.4, 0.5}) {
        DenseMatrix rho = quantum::decohered_toric_state(lat, p);
        double mineig = quantum::min_eigenvalue(rho);
        b.record("channel-psd", fmt_p(p), std::max(0.0, -mineig), 1e-10);
    }
}

void check_states(Battery &b) {
    if (!b.wanted("states")) {
        return;
    }
    Torus2D lat = lattice::build_torus_2d(2, 2);
    DenseVec cluster = quantum::cluster_ground_state(lat);
    double worst = 0;
    for (const PauliString &s : quantum::cluster_stabilizers(lat)) {
        worst = std::max(worst, std::abs(1 - quantum::pauli_expectation(cluster, s)));
    }
    b.record("states-cluster-stabilizers", "2x2", worst, 1e-10);
    DenseVec projected = quantum::project_vertices_plus(lat, cluster);
    DenseVec toric = quantum::toric_ground_state(lat);
    b.record("states-projection", "2x2", std::abs(1 - quantum::fidelity(projected, toric)),
             1e-10);
    double w = 0;
    for (int dir = 0; dir < 2; dir++) {
        PauliString wl = quantum::x_string(lattice::primal_loop_2d(lat, dir));
        w = std::max(w, std::abs(1 - quantum::pauli_expectation(toric, wl)));
    }
    b.record("states-wilson", "2x2", w, 1e-10);
}

}  // namespace

std::vector<CheckResult> run_verify(const VerifyOptions &options) {
    Battery b{options, {}};
    check_states(b);
    check_gibbs(b);
    check_spectral(b);
    check_sqrt_state(b);
    check_thooft_state(b);
    check_renyi2(b);
    check_anyon(b);
    check_negativity(b);
    check_loop_commute(b);
    check_amplitude_norm(b);
    check_channel_psd(b);
    return b.results;
}

std::string render_verify_report(const std::vector<CheckResult> &results) {
    std::ostringstream os;
    for (const CheckResult &r : results) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%-4s %-26s %-10s dev=%.3e (tol %.0e)\n",
                      r.pass ? "ok" : "FAIL", r.name.c_str(), r.params.c_str(), r.deviation,
                      r.threshold);
        os << buf;
    }
    int passed = 0;
    for (const CheckResult &r : results) {
        passed += r.pass;
    }
    os << passed << "/" << results.size() << " checks passed\n";
    return os.str();
}

std::string verify_report_json(const std::vector<CheckResult> &results) {
    nlohmann::json j = nlohmann::json::array();
    for (const CheckResult &r : results) {
        j.push_back({{"check-name", r.name},
                     {"params", r.params},
                     {"deviation", r.deviation},
                     {"threshold", r.threshold},
                     {"pass", r.pass}});
    }
    return j.dump(2) + "\n";
}

bool all_pass(const std::vector<CheckResult> &results) {
    for (const CheckResult &r : results) {
        if (!r.pass) {
            return false;
        }
    }
    return true;
}

}  // namespace decotop::runner
