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
#include <filesystem>

#include "decotop/mc.hpp"
#include "decotop/rng.hpp"
#include "decotop/statmech.hpp"
#include "decotop/transfer.hpp"

using namespace decotop;
using namespace decotop::statmech;

namespace {

// Test-side oracle: atanh by its power series, independent of std::atanh and
// of the bisection in nishimori_beta_of.
double atanh_series(double x) {
    double acc = 0, term = x;
    for (int k = 0; k < 2000; k++) {
        acc += term / (2 * k + 1);
        term *= x * x;
    }
    return acc;
}

// Test-side oracle: brute-force log Z by looping over every spin set.
double brute_logz(const DisorderSample &s) {
    const TermModel &m = *s.model;
    REQUIRE(m.n_spins <= 24);
    long double z = 0;
    for (uint32_t c = 0; c < (uint32_t{1} << m.n_spins); c++) {
        double e = 0;
        for (int t = 0; t < m.n_terms; t++) {
            int prod = s.sign[t];
            for (int sp : m.term_spins[t]) {
                if ((c >> sp) & 1) {
                    prod = -prod;
                }
            }
            e += prod;
        }
        z += std::exp((long double)(s.beta * e));
    }
    return (double)std::log(z);
}

double brute_correlation(const DisorderSample &s, int a, int b) {
    const TermModel &m = *s.model;
    long double z = 0, num = 0;
    for (uint32_t c = 0; c < (uint32_t{1} << m.n_spins); c++) {
        double e = 0;
        for (int t = 0; t < m.n_terms; t++) {
            int prod = s.sign[t];
            for (int sp : m.term_spins[t]) {
                if ((c >> sp) & 1) {
                    prod = -prod;
                }
            }
            e += prod;
        }
        long double w = std::exp((long double)(s.beta * e));
        int sab = (((c >> a) ^ (c >> b)) & 1) ? -1 : 1;
        z += w;
        num += sab * w;
    }
    return (double)(num / z);
}

}  // namespace

TEST_CASE("nishimori beta") {
    CHECK(nishimori_beta_of(0.5).beta == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(nishimori_beta_of(0.0).infinite);
    NishimoriBeta nb = nishimori_beta_of(0.109);
    CHECK(std::abs(nb.beta - atanh_series(0.782)) < 1e-10);
    CHECK_THROWS_AS(nishimori_beta_of(0.6), std::invalid_argument);
    CHECK_THROWS_AS(nishimori_beta_of(-0.1), std::invalid_argument);
}

TEST_CASE("coupling conversions") {
    // e^-K = tanh(beta/2) and e^-K = 1 - 2p respectively.
    CHECK(std::exp(-domain_wall_coupling(1.3)) == doctest::Approx(std::tanh(0.65)).epsilon(1e-14));
    CHECK(std::exp(-loop_fugacity_coupling(0.2)) == doctest::Approx(0.6).epsilon(1e-14));
}

TEST_CASE("nishimori sampling") {
    lattice::Torus2D lat = lattice::build_torus_2d(4, 4);
    auto model = ising2d_model(lat);
    DisorderSample s0 = sample_nishimori(model, 0.0, 9);
    CHECK(s0.beta_inf);
    for (int8_t v : s0.sign) {
        CHECK(v == +1);
    }
    DisorderSample s5 = sample_nishimori(model, 0.5, 9);
    CHECK(s5.beta == doctest::Approx(0.0));
    DisorderSample a = sample_nishimori(model, 0.2, 1234);
    DisorderSample b = sample_nishimori(model, 0.2, 1234);
    CHECK(a.sign == b.sign);
    DisorderSample c = sample_nishimori(model, 0.2, 1235);
    CHECK(a.sign != c.sign);
    CHECK_THROWS_AS(sample_nishimori(model, 0.7, 1), std::invalid_argument);
    // Empirical rate sanity at p = 0.25 over many terms.
    int neg = 0, tot = 0;
    for (int k = 0; k < 200; k++) {
        DisorderSample s = sample_nishimori(model, 0.25, 100 + k);
        for (int8_t v : s.sign) {
            neg += v < 0;
            tot++;
        }
    }
    double rate = (double)neg / tot;
    CHECK(std::abs(rate - 0.25) < 3 * std::sqrt(0.25 * 0.75 / tot));
}

TEST_CASE("exact logZ at beta = 0 and against the brute-force oracle") {
    lattice::Torus2D lat = lattice::build_torus_2d(2, 2);
    auto model = ising2d_model(lat);
    DisorderSample s = ferro_sample(model, 0.0);
    CHECK(exact_logZ(s).log_z == doctest::Approx(4 * std::log(2.0)).epsilon(1e-12));

    // 2x2 ferromagnet at beta = 1: the oracle sums all 16 spin sets directly.
    DisorderSample f = ferro_sample(model, 1.0);
    CHECK(exact_logZ(f).log_z == doctest::Approx(brute_logz(f)).epsilon(1e-12));

    // A disordered sample too.
    DisorderSample d = sample_nishimori(model, 0.3, 42);
    CHECK(exact_logZ(d).log_z == doctest::Approx(brute_logz(d)).epsilon(1e-12));
}

TEST_CASE("exact logZ matches brute force on every model kind") {
    Xoshiro256pp rng(5);
    lattice::Torus2D lat2 = lattice::build_torus_2d(3, 3);
    lattice::Torus3D lat3 = lattice::build_torus_3d(2, 2, 2);
    std::vector<std::shared_ptr<const TermModel>> models = {
        ising2d_model(lat2), dual_ising2d_model(lat2), ising3d_model(lat3),
        plaquette_ising3d_model(lat3)};
    for (const auto &m : models) {
        for (int trial = 0; trial < 3; trial++) {
            DisorderSample s = sample_nishimori(m, 0.2, rng.next());
            REQUIRE(exact_logZ(s).log_z == doctest::Approx(brute_logz(s)).epsilon(1e-11));
        }
    }
    // The face-spin kind has 24 spins at L = 2; spot check one sample.
    DisorderSample g = sample_nishimori(gauge_ising3d_model(lat3), 0.15, 77);
    CHECK(exact_logZ(g).log_z == doctest::Approx(brute_logz(g)).epsilon(1e-11));
}

TEST_CASE("logZ is gauge invariant for every model kind") {
    Xoshiro256pp rng(11);
    lattice::Torus2D lat2 = lattice::build_torus_2d(3, 3);
    lattice::Torus3D lat3 = lattice::build_torus_3d(2, 2, 2);
    std::vector<std::shared_ptr<const TermModel>> models = {
        ising2d_model(lat2), dual_ising2d_model(lat2), ising3d_model(lat3),
        gauge_ising3d_model(lat3), plaquette_ising3d_model(lat3)};
    for (const auto &m : models) {
        for (int trial = 0; trial < 500; trial++) {
            DisorderSample s = sample_nishimori(m, 0.25, rng.next());
            double before = exact_logZ(s).log_z;
            int spin = (int)rng.below(m->n_spins);
            for (int t : m->spin_terms[spin]) {
                s.sign[t] = -s.sign[t];
            }
            double after = exact_logZ(s).log_z;
            REQUIRE(std::abs(before - after) < 1e-12 * std::max(1.0, std::abs(before)));
        }
    }
}

TEST_CASE("spin budget enforced") {
    lattice::Torus3D lat = lattice::build_torus_3d(3, 3, 3);
    DisorderSample s = ferro_sample(ising3d_model(lat), 0.5);  // 27 spins: fine
    CHECK_NOTHROW(exact_logZ(s));
    lattice::Torus3D big = lattice::build_torus_3d(2, 2, 4);
    DisorderSample g = ferro_sample(gauge_ising3d_model(big), 0.5);  // 48 face spins
    CHECK_THROWS_AS(exact_logZ(g), std::invalid_argument);
}

TEST_CASE("transfer matrix agrees with exact enumeration") {
    lattice::Torus2D lat = lattice::build_torus_2d(4, 4);
    auto model = ising2d_model(lat);
    for (int k = 0; k < 200; k++) {
        DisorderSample s = sample_nishimori(model, 0.1, 1000 + k);
        double a = exact_logZ(s).log_z;
        double b = transfer_logZ_2d(s).log_z;
        REQUIRE(std::abs(a - b) < 1e-10 * std::abs(a));
    }
    DisorderSample z = ferro_sample(model, 0.0);
    CHECK(transfer_logZ_2d(z).log_z == doctest::Approx(16 * std::log(2.0)).epsilon(1e-12));

    lattice::Torus2D lat8 = lattice::build_torus_2d(8, 8);
    DisorderSample f = ferro_sample(ising2d_model(lat8), 0.4407);
    double lz = transfer_logZ_2d(f).log_z;
    CHECK(std::isfinite(lz));
    CHECK(lz > -0.4407 * lat8.n_edges());
}

TEST_CASE("transfer twisted pair equals sign-flipped enumeration") {
    lattice::Torus2D lat = lattice::build_torus_2d(3, 3);
    auto model = ising2d_model(lat);
    for (int k = 0; k < 20; k++) {
        DisorderSample s = sample_nishimori(model, 0.2, 17 + k);
        TwistedPair tp = transfer_logZ_2d_twisted_pair(s);
        REQUIRE(tp.log_z == doctest::Approx(exact_logZ(s).log_z).epsilon(1e-11));
        // The wrap twist is gauge equivalent to the y-winding dual loop.
        lattice::Cycle dual = lattice::dual_loop_2d(lat, 1);
        REQUIRE(tp.log_z_twisted ==
                doctest::Approx(exact_logZ_flipped(s, dual.edges).log_z).epsilon(1e-11));
    }
}

TEST_CASE("domain wall free energy") {
    lattice::Torus2D lat = lattice::build_torus_2d(4, 4);
    auto model = ising2d_model(lat);
    // beta = 0: no cost.
    DisorderSample z = ferro_sample(model, 0.0);
    CHECK(domain_wall_dF(z, lattice::dual_loop_2d(lat, 1)).delta_f ==
          doctest::Approx(0.0).epsilon(1e-12));
    // Contractible twist: gauge removable, exactly zero plus a warning flag.
    lattice::Cycle contractible;
    contractible.contractible = true;
    contractible.edges = {lat.star_edges(5)[0], lat.star_edges(5)[1], lat.star_edges(5)[2],
                          lat.star_edges(5)[3]};
    DisorderSample s = sample_nishimori(model, 0.2, 3);
    DomainWallFreeEnergy r = domain_wall_dF(s, contractible);
    CHECK(r.gauge_removable);
    CHECK(r.delta_f == 0.0);
    // Ferromagnet at large beta: dF approaches 2 beta L from below (the
    // interface binds log-degeneracy corrections).
    for (double beta : {1.5, 2.0}) {
        DisorderSample f = ferro_sample(model, beta);
        DomainWallFreeEnergy df = domain_wall_dF(f, lattice::dual_loop_2d(lat, 1));
        CHECK(!df.gauge_removable);
        double ratio = df.delta_f / (2 * beta * lat.lx);
        CHECK(ratio > 0.8);
        CHECK(ratio < 1.0);
    }
    double r15 = domain_wall_dF(ferro_sample(model, 1.5), lattice::dual_loop_2d(lat, 1)).delta_f /
                 (2 * 1.5 * lat.lx);
    double r20 = domain_wall_dF(ferro_sample(model, 2.0), lattice::dual_loop_2d(lat, 1)).delta_f /
                 (2 * 2.0 * lat.lx);
    CHECK(r20 > r15);
}

TEST_CASE("spin correlation") {
    lattice::Torus2D lat = lattice::build_torus_2d(4, 4);
    auto model = ising2d_model(lat);
    DisorderSample f = ferro_sample(model, 0.3);
    CHECK(exact_spin_correlation(f, 3, 3) == 1.0);
    CHECK(exact_spin_correlation(f, 0, 5) ==
          doctest::Approx(brute_correlation(f, 0, 5)).epsilon(1e-11));
    DisorderSample d = sample_nishimori(model, 0.15, 21);
    CHECK(exact_spin_correlation(d, 1, 10) ==
          doctest::Approx(brute_correlation(d, 1, 10)).epsilon(1e-11));
    // Frozen ferromagnet: all pairs perfectly correlated.
    DisorderSample frozen = ferro_sample(model, 0.0);
    frozen.beta_inf = true;
    CHECK(exact_spin_correlation(frozen, 0, 9) == doctest::Approx(1.0));
}

TEST_CASE("direct enumeration cross-checks the image path") {
    lattice::Torus2D lat = lattice::build_torus_2d(3, 3);
    auto model = ising2d_model(lat);
    DisorderSample s = sample_nishimori(model, 0.2, 10);
    DirectEnumeration d = exact_direct_enumeration(s);
    CHECK(d.log_z == doctest::Approx(exact_logZ(s).log_z).epsilon(1e-12));
    CHECK(d.mean_energy == doctest::Approx(exact_mean_energy(s)).epsilon(1e-11));
}

TEST_CASE("metropolis kernel satisfies detailed balance exactly") {
    // For any frozen state and proposed flip, the acceptance ratio equals the
    // Boltzmann ratio.
    for (double beta : {0.1, 0.7, 2.3}) {
        for (double de : {-4.0, -2.0, 0.0, 2.0, 4.0}) {
            double fwd = metropolis_acceptance(beta, de);
            double bwd = metropolis_acceptance(beta, -de);
            CHECK(fwd / bwd == doctest::Approx(std::exp(beta * de)).epsilon(1e-12));
        }
    }
}

TEST_CASE("mc at beta = 0 accepts everything and has zero mean magnetization") {
    lattice::Torus2D lat = lattice::build_torus_2d(4, 4);
    DisorderSample s = ferro_sample(ising2d_model(lat), 0.0);
    McConfig cfg;
    cfg.sweeps = 3000;
    cfg.thermalization = 200;
    cfg.stride = 1;
    cfg.seed = 5;
    McResult r = mc_run(s, cfg, {{0, 1}});
    CHECK(r.acceptance_rate == 1.0);
    // <m> is zero by symmetry; the recorded |m| of 16 free spins has mean
    // ~3.2; checking the correlation instead, which must vanish within 3 sigma.
    CHECK(std::abs(r.correlations[0].mean) < 3 * r.correlations[0].std_err + 1e-9);
}

TEST_CASE("mc energy, |m| and correlators match exact enumeration (3 sigma)") {
    lattice::Torus2D lat = lattice::build_torus_2d(4, 4);
    auto model = ising2d_model(lat);
    DisorderSample s = sample_nishimori(model, 0.1, 31);
    McConfig cfg;
    cfg.sweeps = 6000;
    cfg.thermalization = 1000;
    cfg.stride = 2;
    cfg.seed = 77;
    McResult r = mc_run(s, cfg, {{0, 5}});
    CHECK(r.thermalized);
    double exact_e = exact_mean_energy(s);
    REQUIRE(r.energy.std_err > 0);
    CHECK(std::abs(r.energy.mean - exact_e) < 3 * r.energy.std_err);
    double exact_c = exact_spin_correlation(s, 0, 5);
    CHECK(std::abs(r.correlations[0].mean - exact_c) < 3 * r.correlations[0].std_err + 1e-9);
    DirectEnumeration d = exact_direct_enumeration(s);
    CHECK(std::abs(r.abs_magnetization.mean - d.mean_abs_magnetization) <
          3 * r.abs_magnetization.std_err + 1e-9);
}

TEST_CASE("plaquette-spin correlation through the generic pair-model path") {
    lattice::Torus2D lat = lattice::build_torus_2d(3, 3);
    auto dual = dual_ising2d_model(lat);
    DisorderSample s = sample_nishimori(dual, 0.2, 6);
    CHECK(exact_spin_correlation(s, 0, 4) ==
          doctest::Approx(brute_correlation(s, 0, 4)).epsilon(1e-11));
}

TEST_CASE("mc with replica exchange matches exact enumeration") {
    lattice::Torus2D lat = lattice::build_torus_2d(4, 4);
    auto model = ising2d_model(lat);
    DisorderSample s = sample_nishimori(model, 0.05, 13);  // beta ~ 1.47, sluggish
    McConfig cfg;
    cfg.sweeps = 6000;
    cfg.thermalization = 1000;
    cfg.stride = 2;
    cfg.seed = 99;
    cfg.betas = {0.4, 0.8, s.beta};
    std::sort(cfg.betas.begin(), cfg.betas.end());
    McResult r = mc_run(s, cfg, {});
    CHECK(r.exchange_rate > 0.05);
    double exact_e = exact_mean_energy(s);
    CHECK(std::abs(r.energy.mean - exact_e) < 3 * r.energy.std_err);
}

TEST_CASE("a frozen chain is flagged non-thermalized; tempering unfreezes it") {
    lattice::Torus3D lat = lattice::build_torus_3d(2, 2, 2);
    DisorderSample s = sample_nishimori(plaquette_ising3d_model(lat), 0.15, 321);
    McConfig cfg;
    cfg.sweeps = 2000;
    cfg.thermalization = 400;
    cfg.stride = 2;
    cfg.seed = 1;
    McResult stuck = mc_run(s, cfg, {});
    CHECK(!stuck.thermalized);
    cfg.sweeps = 8000;
    cfg.thermalization = 1500;
    cfg.betas = {s.beta / 8, s.beta / 4, s.beta / 2, 3 * s.beta / 4, s.beta};
    McResult pt = mc_run(s, cfg, {});
    CHECK(pt.thermalized);
    REQUIRE(pt.energy.std_err > 0);
    CHECK(std::abs(pt.energy.mean - exact_mean_energy(s)) < 3 * pt.energy.std_err);
}

TEST_CASE("mc validates its config") {
    lattice::Torus2D lat = lattice::build_torus_2d(2, 2);
    DisorderSample s = ferro_sample(ising2d_model(lat), 0.5);
    McConfig bad;
    bad.sweeps = 100;
    bad.thermalization = 100;
    CHECK_THROWS_AS(mc_run(s, bad, {}), std::invalid_argument);
    McConfig unordered;
    unordered.sweeps = 100;
    unordered.thermalization = 10;
    unordered.betas = {0.5, 0.5};
    CHECK_THROWS_AS(mc_run(s, unordered, {}), std::invalid_argument);
}

TEST_CASE("nishimori identity: [<ss>] = [<ss>^2] within 3 sigma on 4x4") {
    lattice::Torus2D lat = lattice::build_torus_2d(4, 4);
    auto model = ising2d_model(lat);
    double p = 0.12;
    int n = 2000;
    double d_sum = 0, d_sq = 0;
    for (int k = 0; k < n; k++) {
        DisorderSample s = sample_nishimori(model, p, derive_seed(4242, k));
        double c = exact_spin_correlation(s, 0, 10);
        double d = c - c * c;
        d_sum += d;
        d_sq += d * d;
    }
    double mean = d_sum / n;
    double err = std::sqrt((d_sq / n - mean * mean) / (n - 1));
    CHECK(std::abs(mean) < 3 * err);
}

TEST_CASE("mean dF larger at weak disorder (3 sigma)") {
    lattice::Torus2D lat = lattice::build_torus_2d(4, 4);
    auto model = ising2d_model(lat);
    auto mean_df = [&](double p, uint64_t seed) {
        int n = 400;
        double sum = 0, sq = 0;
        for (int k = 0; k < n; k++) {
            DisorderSample s = sample_nishimori(model, p, derive_seed(seed, k));
            TwistedPair tp = transfer_logZ_2d_twisted_pair(s);
            double df = tp.log_z - tp.log_z_twisted;
            sum += df;
            sq += df * df;
        }
        double m = sum / n;
        return std::make_pair(m, std::sqrt((sq / n - m * m) / (n - 1)));
    };
    auto [m_low, e_low] = mean_df(0.02, 1);
    auto [m_high, e_high] = mean_df(0.25, 2);
    CHECK(m_low - m_high > 3 * std::hypot(e_low, e_high));
}

TEST_CASE("flavored logZ free limit and surface-sum oracle") {
    lattice::Torus3D lat = lattice::build_torus_3d(2, 2, 2);
    auto base = ising3d_model(lat);
    // K = 0: all 2n x Nv spins free.
    FlavoredLogZ free = flavored_logZ(*base, 0.0, 2, nullptr);
    CHECK(free.log_z == doctest::Approx(16 * std::log(2.0)).epsilon(1e-12));

    // Surface-sum oracle at 2n = 2: enumerate the per-flavor domain-wall
    // (closed-surface) configurations directly and resum.
    double p = 0.12;
    double k = loop_fugacity_coupling(p);
    int nv = lat.n_vertices(), ne = lat.n_edges();
    std::vector<uint32_t> wall(size_t{1} << nv, 0);
    for (uint32_t c = 0; c < (uint32_t{1} << nv); c++) {
        uint32_t m = 0;
        for (int e = 0; e < ne; e++) {
            auto [u, v] = lat.edge_vertices(e);
            if ((((c >> u) ^ (c >> v)) & 1) != 0) {
                m |= uint32_t{1} << e;
            }
        }
        wall[c] = m;
    }
    // Each closed surface corresponds to two spin configurations; the sum
    // over surfaces is the spin sum halved per flavor.
    long double surface_sum = 0;
    for (uint32_t c1 = 0; c1 < (uint32_t{1} << nv); c1++) {
        for (uint32_t c2 = 0; c2 < (uint32_t{1} << nv); c2++) {
            int defects = 2 * std::popcount(wall[c1] ^ wall[c2]);
            surface_sum += std::exp((long double)(-k * defects));
        }
    }
    surface_sum /= 4;  // two global flips
    double n_g = std::pow(2.0, nv - 1);
    long double tr_rho2_surface = surface_sum / (n_g * n_g);
    FlavoredLogZ z2 = flavored_logZ(*base, k, 2, nullptr);
    // tr(rho^2) = Z_2 exp(-K N_e) / (N_G^2 2^2).
    long double tr_rho2_spin =
        std::exp((long double)(z2.log_z - k * ne - 2 * std::log(n_g) - 2 * std::log(2.0)));
    CHECK((double)tr_rho2_spin == doctest::Approx((double)tr_rho2_surface).epsilon(1e-10));
}

TEST_CASE("flavored logZ boundary constraint: free and frozen limits") {
    lattice::Torus3D lat = lattice::build_torus_3d(2, 2, 2);
    auto base = ising3d_model(lat);
    lattice::Bipartition bp = lattice::box_region_3d(lat, 1, 1, 1);
    std::vector<int> boundary = bp.boundary_vertices_3d(lat);
    REQUIRE(boundary.size() == 3);
    // Two flavors carry no constrained flavor, so the constraint is free.
    FlavoredLogZ z0 = flavored_logZ(*base, 0.0, 2, nullptr);
    FlavoredLogZ za = flavored_logZ(*base, 0.0, 2, &boundary);
    CHECK(z0.log_z - za.log_z == doctest::Approx(0.0).epsilon(1e-12));
    // Four flavors exceed the 2n x vertices budget on the 3d base.
    CHECK_THROWS_AS(flavored_logZ(*base, 0.5, 4, nullptr), std::invalid_argument);

    // Four-flavor limits on a 2d base graph (4 vertices, within budget).
    lattice::Torus2D lat2 = lattice::build_torus_2d(2, 2);
    auto base2 = ising2d_model(lat2);
    lattice::Bipartition bp2 = lattice::rect_region_2d(lat2, 0, 0, 1, 1);
    std::vector<int> boundary2 = bp2.boundary_vertices_2d(lat2);
    REQUIRE(boundary2.size() == 4);
    // K = 0 counting: each of the two constrained flavors costs |dA| - 1 bits.
    FlavoredLogZ f0 = flavored_logZ(*base2, 0.0, 4, nullptr);
    FlavoredLogZ fa = flavored_logZ(*base2, 0.0, 4, &boundary2);
    CHECK(f0.log_z - fa.log_z ==
          doctest::Approx(2 * (boundary2.size() - 1) * std::log(2.0)).epsilon(1e-10));
    // K = infinity: ground manifolds coincide, the excess free energy -> 0.
    FlavoredLogZ g0 = flavored_logZ(*base2, std::numeric_limits<double>::infinity(), 4, nullptr);
    FlavoredLogZ ga =
        flavored_logZ(*base2, std::numeric_limits<double>::infinity(), 4, &boundary2);
    CHECK(g0.log_degeneracy == doctest::Approx(ga.log_degeneracy).epsilon(1e-12));
}

TEST_CASE("sample persistence round trip") {
    lattice::Torus3D lat = lattice::build_torus_3d(2, 2, 2);
    auto model = gauge_ising3d_model(lat);
    DisorderSample s = sample_nishimori(model, 0.17, 2024);
    std::string path = (std::filesystem::temp_directory_path() / "decotop_sample.bin").string();
    save_sample(s, path);
    DisorderSample r = load_sample(path);
    CHECK(r.model->kind == s.model->kind);
    CHECK(r.sign == s.sign);
    CHECK(r.p == s.p);
    CHECK(r.seed == s.seed);
    CHECK(r.beta == doctest::Approx(s.beta).epsilon(1e-14));
    // The stored seed regenerates the identical sample.
    DisorderSample again = sample_nishimori(r.model, r.p, r.seed);
    CHECK(again.sign == r.sign);
}

TEST_CASE("thermodynamic-integration dF tracks the exact value (approximate)") {
    lattice::Torus2D lat = lattice::build_torus_2d(4, 4);
    auto model = ising2d_model(lat);
    DisorderSample s = sample_nishimori(model, 0.15, 4321);
    lattice::Cycle dual = lattice::dual_loop_2d(lat, 1);
    double exact = domain_wall_dF(s, dual).delta_f;
    McConfig cfg;
    cfg.sweeps = 4000;
    cfg.thermalization = 800;
    cfg.stride = 2;
    cfg.seed = 11;
    Estimate ti = mc_free_energy_ti(s, dual.edges, cfg, 9);
    CHECK(ti.method == "mc-ti-approximate");
    REQUIRE(ti.std_err > 0);
    // Approximate: statistical noise plus trapezoid bias; stay within a loose
    // but meaningful band.
    CHECK(std::abs(ti.mean - exact) < std::max(0.25, 5 * ti.std_err));
}

TEST_CASE("twist removability detection") {
    lattice::Torus2D lat = lattice::build_torus_2d(3, 3);
    auto model = ising2d_model(lat);
    std::vector<int> star(lat.star_edges(4).begin(), lat.star_edges(4).end());
    CHECK(twist_is_gauge_removable(*model, star));
    CHECK(!twist_is_gauge_removable(*model, lattice::dual_loop_2d(lat, 0).edges));
}
