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

#include "decotop/statmech.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "decotop/rng.hpp"

namespace decotop::statmech {

std::string model_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::ising2d:
            return "ising2d";
        case ModelKind::dual_ising2d:
            return "dual_ising2d";
        case ModelKind::ising3d:
            return "ising3d";
        case ModelKind::gauge_ising3d:
            return "gauge_ising3d";
        case ModelKind::plaquette_ising3d:
            return "plaquette_ising3d";
    }
    return "?";
}

void TermModel::finalize() {
    spin_terms.assign(n_spins, {});
    for (int t = 0; t < n_terms; t++) {
        for (int s : term_spins[t]) {
            if (s < 0 || s >= n_spins) {
                throw std::logic_error("TermModel: spin index out of range");
            }
            spin_terms[s].push_back(t);
        }
    }
}

std::shared_ptr<const TermModel> ising2d_model(const lattice::Torus2D &lat) {
    auto m = std::make_shared<TermModel>();
    m->kind = ModelKind::ising2d;
    m->n_spins = lat.n_vertices();
    m->n_terms = lat.n_edges();
    m->lx = lat.lx;
    m->ly = lat.ly;
    m->term_spins.resize(m->n_terms);
    for (int e = 0; e < lat.n_edges(); e++) {
        auto [u, v] = lat.edge_vertices(e);
        m->term_spins[e] = {u, v};
    }
    m->finalize();
    return m;
}

std::shared_ptr<const TermModel> dual_ising2d_model(const lattice::Torus2D &lat) {
    auto m = std::make_shared<TermModel>();
    m->kind = ModelKind::dual_ising2d;
    m->n_spins = lat.n_plaquettes();
    m->n_terms = lat.n_edges();
    m->lx = lat.lx;
    m->ly = lat.ly;
    m->term_spins.resize(m->n_terms);
    for (int e = 0; e < lat.n_edges(); e++) {
        auto [p, q] = lat.edge_plaquettes(e);
        m->term_spins[e] = {p, q};
    }
    m->finalize();
    return m;
}

std::shared_ptr<const TermModel> ising3d_model(const lattice::Torus3D &lat) {
    auto m = std::make_shared<TermModel>();
    m->kind = ModelKind::ising3d;
    m->n_spins = lat.n_vertices();
    m->n_terms = lat.n_edges();
    m->lx = lat.lx;
    m->ly = lat.ly;
    m->lz = lat.lz;
    m->term_spins.resize(m->n_terms);
    for (int e = 0; e < lat.n_edges(); e++) {
        auto [u, v] = lat.edge_vertices(e);
        m->term_spins[e] = {u, v};
    }
    m->finalize();
    return m;
}

std::shared_ptr<const TermModel> gauge_ising3d_model(const lattice::Torus3D &lat) {
    auto m = std::make_shared<TermModel>();
    m->kind = ModelKind::gauge_ising3d;
    m->n_spins = lat.n_faces();
    m->n_terms = lat.n_edges();
    m->lx = lat.lx;
    m->ly = lat.ly;
    m->lz = lat.lz;
    m->term_spins.resize(m->n_terms);
    for (int e = 0; e < lat.n_edges(); e++) {
        auto fs = lat.edge_faces(e);
        m->term_spins[e] = {fs[0], fs[1], fs[2], fs[3]};
    }
    m->finalize();
    return m;
}

std::shared_ptr<const TermModel> plaquette_ising3d_model(const lattice::Torus3D &lat) {
    auto m = std::make_shared<TermModel>();
    m->kind = ModelKind::plaquette_ising3d;
    m->n_spins = lat.n_cubes();
    m->n_terms = lat.n_edges();
    m->lx = lat.lx;
    m->ly = lat.ly;
    m->lz = lat.lz;
    m->term_spins.resize(m->n_terms);
    for (int e = 0; e < lat.n_edges(); e++) {
        auto cs = lat.edge_cubes(e);
        m->term_spins[e] = {cs[0], cs[1], cs[2], cs[3]};
    }
    m->finalize();
    return m;
}

NishimoriBeta nishimori_beta_of(double p) {
    if (p < 0 || p > 0.5) {
        throw std::invalid_argument("nishimori_beta_of: need 0 <= p <= 0.5");
    }
    if (p == 0) {
        return {0, true};
    }
    double target = 1 - 2 * p;
    double lo = 0, hi = 1;
    while (std::tanh(hi) < target) {
        hi *= 2;
    }
    while (hi - lo > 1e-12) {
        double mid = 0.5 * (lo + hi);
        (std::tanh(mid) < target ? lo : hi) = mid;
    }
    return {0.5 * (lo + hi), false};
}

double nishimori_p_of(double beta) {
    return 0.5 * (1 - std::tanh(beta));
}

double domain_wall_coupling(double beta) {
    return -std::log(std::tanh(beta / 2));
}

double loop_fugacity_coupling(double p) {
    if (p < 0 || p >= 0.5) {
        throw std::invalid_argument("loop_fugacity_coupling: need 0 <= p < 0.5");
    }
    return -std::log(1 - 2 * p);
}

DisorderSample sample_nishimori(std::shared_ptr<const TermModel> model, double p, uint64_t seed) {
    if (p < 0 || p > 0.5) {
        throw std::invalid_argument("sample_nishimori: need 0 <= p <= 0.5");
    }
    DisorderSample s;
    s.model = std::move(model);
    s.sign.assign(s.model->n_terms, +1);
    Xoshiro256pp rng(seed);
    for (int t = 0; t < s.model->n_terms; t++) {
        if (rng.uniform() < p) {
            s.sign[t] = -1;
        }
    }
    s.p = p;
    NishimoriBeta nb = nishimori_beta_of(p);
    s.beta = nb.beta;
    s.beta_inf = nb.infinite;
    s.seed = seed;
    return s;
}

DisorderSample ferro_sample(std::shared_ptr<const TermModel> model, double beta) {
    DisorderSample s;
    s.model = std::move(model);
    s.sign.assign(s.model->n_terms, +1);
    s.p = 0;
    s.beta = beta;
    s.beta_inf = false;
    s.seed = 0;
    return s;
}

DisorderSample with_beta(const DisorderSample &s, double beta, bool beta_inf) {
    DisorderSample out = s;
    out.beta = beta;
    out.beta_inf = beta_inf;
    return out;
}

namespace {

constexpr char kSampleMagic[8] = {'d', 'c', 't', 'p', 's', 'm', 'p', '1'};

std::shared_ptr<const TermModel> rebuild_model(ModelKind kind, int lx, int ly, int lz) {
    if (kind == ModelKind::ising2d || kind == ModelKind::dual_ising2d) {
        lattice::Torus2D lat = lattice::build_torus_2d(lx, ly);
        return kind == ModelKind::ising2d ? ising2d_model(lat) : dual_ising2d_model(lat);
    }
    lattice::Torus3D lat = lattice::build_torus_3d(lx, ly, lz);
    switch (kind) {
        case ModelKind::ising3d:
            return ising3d_model(lat);
        case ModelKind::gauge_ising3d:
            return gauge_ising3d_model(lat);
        case ModelKind::plaquette_ising3d:
            return plaquette_ising3d_model(lat);
        default:
            throw std::runtime_error("load_sample: bad model kind");
    }
}

}  // namespace

void save_sample(const DisorderSample &sample, const std::string &path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("save_sample: cannot open " + path);
    }
    out.write(kSampleMagic, 8);
    auto put32 = [&](int32_t v) { out.write(reinterpret_cast<const char *>(&v), 4); };
    auto put64 = [&](uint64_t v) { out.write(reinterpret_cast<const char *>(&v), 8); };
    put32((int32_t)sample.model->kind);
    put32(sample.model->lx);
    put32(sample.model->ly);
    put32(sample.model->lz);
    out.write(reinterpret_cast<const char *>(&sample.p), 8);
    put64(sample.seed);
    std::string conv = lattice::kConventionVersion;
    put32((int32_t)conv.size());
    out.write(conv.data(), (std::streamsize)conv.size());
    put32(sample.model->n_terms);
    std::vector<uint8_t> packed((sample.model->n_terms + 7) / 8, 0);
    for (int t = 0; t < sample.model->n_terms; t++) {
        if (sample.sign[t] < 0) {
            packed[t / 8] |= uint8_t(1u << (t % 8));
        }
    }
    out.write(reinterpret_cast<const char *>(packed.data()), (std::streamsize)packed.size());
}

DisorderSample load_sample(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("load_sample: cannot open " + path);
    }
    char magic[8];
    in.read(magic, 8);
    if (std::memcmp(magic, kSampleMagic, 8) != 0) {
        throw std::runtime_error("load_sample: bad magic in " + path);
    }
    auto get32 = [&]() {
        int32_t v;
        in.read(reinterpret_cast<char *>(&v), 4);
        return v;
    };
    auto get64 = [&]() {
        uint64_t v;
        in.read(reinterpret_cast<char *>(&v), 8);
        return v;
    };
    ModelKind kind = (ModelKind)get32();
    int lx = get32(), ly = get32(), lz = get32();
    double p;
    in.read(reinterpret_cast<char *>(&p), 8);
    uint64_t seed = get64();
    int conv_len = get32();
    std::string conv(conv_len, '\0');
    in.read(conv.data(), conv_len);
    if (conv != lattice::kConventionVersion) {
        throw std::runtime_error("load_sample: convention mismatch: " + conv);
    }
    int n_terms = get32();
    DisorderSample s;
    s.model = rebuild_model(kind, lx, ly, lz);
    if (s.model->n_terms != n_terms) {
        throw std::runtime_error("load_sample: term count mismatch");
    }
    std::vector<uint8_t> packed((n_terms + 7) / 8, 0);
    in.read(reinterpret_cast<char *>(packed.data()), (std::streamsize)packed.size());
    s.sign.assign(n_terms, +1);
    for (int t = 0; t < n_terms; t++) {
        if ((packed[t / 8] >> (t % 8)) & 1) {
            s.sign[t] = -1;
        }
    }
    s.p = p;
    s.seed = seed;
    NishimoriBeta nb = nishimori_beta_of(p);
    s.beta = nb.beta;
    s.beta_inf = nb.infinite;
    return s;
}

}  // namespace decotop::statmech
