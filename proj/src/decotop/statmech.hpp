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

#ifndef DECOTOP_STATMECH_HPP
#define DECOTOP_STATMECH_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "decotop/lattice.hpp"

namespace decotop::statmech {

enum class ModelKind {
    ising2d,            // spins on vertices, couplings on edges
    dual_ising2d,       // spins on plaquettes, couplings on edges
    ising3d,            // spins on vertices, couplings on edges
    gauge_ising3d,      // spins on faces, term per edge over its 4 faces
    plaquette_ising3d,  // spins on cubes, term per edge over its 4 cubes
};

std::string model_name(ModelKind kind);

// A disordered model instance: +/-1 couplings, one term per lattice edge in
// every kind above, energy E = sum_t sign_t * prod_{i in t} s_i and
// Boltzmann weight exp(beta * E).
struct TermModel {
    ModelKind kind;
    int n_spins = 0;
    int n_terms = 0;
    std::vector<std::vector<int>> term_spins;
    std::vector<std::vector<int>> spin_terms;
    int lx = 0, ly = 0, lz = 0;

    void finalize();  // fills spin_terms; validates arity
};

std::shared_ptr<const TermModel> ising2d_model(const lattice::Torus2D &lat);
std::shared_ptr<const TermModel> dual_ising2d_model(const lattice::Torus2D &lat);
std::shared_ptr<const TermModel> ising3d_model(const lattice::Torus3D &lat);
std::shared_ptr<const TermModel> gauge_ising3d_model(const lattice::Torus3D &lat);
std::shared_ptr<const TermModel> plaquette_ising3d_model(const lattice::Torus3D &lat);

// --- coupling conversions; two distinct dualities coexist, keep them named ---

struct NishimoriBeta {
    double beta = 0;
    bool infinite = false;
};

// Solves tanh(beta) = 1 - 2p by bisection (1e-12); p = 0 flags beta = inf.
NishimoriBeta nishimori_beta_of(double p);
double nishimori_p_of(double beta);

// K with e^-K = tanh(beta/2): coupling of the domain-wall (dual) ensembles.
double domain_wall_coupling(double beta);
// K with e^-K = 1 - 2p: coupling of the loop/replica ensembles.
double loop_fugacity_coupling(double p);

// --- disorder samples ---

struct DisorderSample {
    std::shared_ptr<const TermModel> model;
    std::vector<int8_t> sign;  // per term
    double p = 0;
    double beta = 0;
    bool beta_inf = false;
    uint64_t seed = 0;
};

// Each term sign is independently -1 with probability p; beta is set on the
// Nishimori line. Deterministic under seed.
DisorderSample sample_nishimori(std::shared_ptr<const TermModel> model, double p, uint64_t seed);

// All-ferromagnetic sample at explicit beta (no disorder).
DisorderSample ferro_sample(std::shared_ptr<const TermModel> model, double beta);

// Same signs, different temperature.
DisorderSample with_beta(const DisorderSample &s, double beta, bool beta_inf = false);

// --- log partition values ---

struct LogPartition {
    double log_z = 0;          // finite-beta value
    bool beta_inf = false;     // when set, Z ~ degeneracy * exp(beta * ground_energy)
    double ground_energy = 0;  // max of E over configurations
    double log_degeneracy = 0;
};

// Exact log Z by enumerating the image of the spin-flip map (never the raw
// spin set); spin count capped at 28.
LogPartition exact_logZ(const DisorderSample &sample);

// log Z with the listed term signs flipped.
LogPartition exact_logZ_flipped(const DisorderSample &sample, const std::vector<int> &flip_terms);

struct DomainWallFreeEnergy {
    double delta_f = 0;
    bool gauge_removable = false;  // contractible twist; delta_f forced to 0
};

LogPartition twisted_logZ(const DisorderSample &sample, const lattice::Cycle &cycle);
DomainWallFreeEnergy domain_wall_dF(const DisorderSample &sample, const lattice::Cycle &cycle);

// <s_a s_b> under the sample's Boltzmann measure (pair-interaction models).
double exact_spin_correlation(const DisorderSample &sample, int a, int b);

double exact_mean_energy(const DisorderSample &sample);

// Direct spin-set enumeration (<= 20 spins): independent of the image-based
// path; also reports observables the image sum cannot reach.
struct DirectEnumeration {
    double log_z;
    double mean_energy;
    double mean_abs_magnetization;
};
DirectEnumeration exact_direct_enumeration(const DisorderSample &sample);

// Is the term-sign flip pattern removable by spin gauge moves?
bool twist_is_gauge_removable(const TermModel &model, const std::vector<int> &flip_terms);

// Binary persistence: a small header {model, dims, p, seed,
// convention-version} followed by the bit-packed sign array.
void save_sample(const DisorderSample &sample, const std::string &path);
// The model is rebuilt from the stored kind and dims.
DisorderSample load_sample(const std::string &path);

// --- replica (flavored) model ---

// 2n coupled flavors of vertex spins on the pair-interaction graph `base`:
//   -H = (K/2) sum_edges sum_s tau_e(s) * tau_e(s+1),  tau_e(s) = s^(s)_u s^(s)_v,
// cyclic in s. With a boundary constraint, odd flavors must match flavor 1 on
// the boundary vertices up to one overall sign each, and even flavors must
// match flavor 2 likewise. Budget: two_n * n_spins <= 24.
struct FlavoredLogZ {
    double log_z = 0;
    bool k_inf = false;
    double log_degeneracy = 0;  // ground-state count when k_inf
};

FlavoredLogZ flavored_logZ(const TermModel &base, double coupling_k, int two_n,
                           const std::vector<int> *boundary_vertices);

}  // namespace decotop::statmech

#endif
