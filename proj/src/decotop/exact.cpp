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

#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <queue>
#include <stdexcept>

#include "decotop/statmech.hpp"

namespace decotop::statmech {

namespace {

struct Mask128 {
    uint64_t lo = 0, hi = 0;

    void flip(int i) {
        if (i < 64) {
            lo ^= uint64_t{1} << i;
        } else {
            hi ^= uint64_t{1} << (i - 64);
        }
    }
    bool get(int i) const { return i < 64 ? (lo >> i) & 1 : (hi >> (i - 64)) & 1; }
    Mask128 operator^(const Mask128 &o) const { return {lo ^ o.lo, hi ^ o.hi}; }
    void operator^=(const Mask128 &o) {
        lo ^= o.lo;
        hi ^= o.hi;
    }
    Mask128 operator&(const Mask128 &o) const { return {lo & o.lo, hi & o.hi}; }
    int popcount() const { return std::popcount(lo) + std::popcount(hi); }
    bool any() const { return lo | hi; }
};

// Independent generators of the image of the spin-flip map acting on term
// values. exp-size sums run over this image (2^rank points), never over the
// raw spin set.
struct ImageBasis {
    int n_terms = 0;
    int rank = 0;
    double log_kernel = 0;  // log of the spin-configuration multiplicity per image point
    std::vector<Mask128> basis;
};

Mask128 spin_mask(const TermModel &m, int spin) {
    Mask128 out;
    for (int t : m.spin_terms[spin]) {
        out.flip(t);
    }
    return out;
}

ImageBasis build_image_basis(const TermModel &m) {
    if (m.n_terms > 128) {
        throw std::invalid_argument("exact backend: term count over 128");
    }
    ImageBasis ib;
    ib.n_terms = m.n_terms;
    // Column elimination over the 128-bit masks.
    std::vector<Mask128> rows;
    std::vector<int> pivots;
    for (int s = 0; s < m.n_spins; s++) {
        Mask128 v = spin_mask(m, s);
        for (size_t i = 0; i < rows.size(); i++) {
            if (v.get(pivots[i])) {
                v ^= rows[i];
            }
        }
        if (v.any()) {
            int p = 0;
            while (!v.get(p)) {
                p++;
            }
            rows.push_back(v);
            pivots.push_back(p);
        }
    }
    ib.basis = rows;
    ib.rank = (int)rows.size();
    ib.log_kernel = (m.n_spins - ib.rank) * std::log(2.0);
    return ib;
}

// Counts image points by number of unsatisfied terms popcount(m ^ a).
std::vector<double> defect_histogram(const ImageBasis &ib, Mask128 a) {
    std::vector<double> hist(ib.n_terms + 1, 0.0);
    Mask128 c = a;
    hist[c.popcount()] += 1;
    size_t total = size_t{1} << ib.rank;
    for (size_t k = 1; k < total; k++) {
        c ^= ib.basis[std::countr_zero(k)];
        hist[c.popcount()] += 1;
    }
    return hist;
}

// Same, split by the parity of the overlap with `probe`.
std::array<std::vector<double>, 2> defect_histogram_probe(const ImageBasis &ib, Mask128 a,
                                                          Mask128 probe) {
    std::array<std::vector<double>, 2> hist;
    hist[0].assign(ib.n_terms + 1, 0.0);
    hist[1].assign(ib.n_terms + 1, 0.0);
    Mask128 c = a;
    // parity of overlap between the image point m = c ^ a and probe
    int par = ((c ^ a) & probe).popcount() & 1;
    hist[par][c.popcount()] += 1;
    size_t total = size_t{1} << ib.rank;
    std::vector<int> step_parity(ib.rank);
    for (int i = 0; i < ib.rank; i++) {
        step_parity[i] = (ib.basis[i] & probe).popcount() & 1;
    }
    for (size_t k = 1; k < total; k++) {
        int b = std::countr_zero(k);
        c ^= ib.basis[b];
        par ^= step_parity[b];
        hist[par][c.popcount()] += 1;
    }
    return hist;
}

double logsumexp_hist(const std::vector<double> &hist, double beta, int n_terms,
                      double log_prefactor) {
    double best = -std::numeric_limits<double>::infinity();
    for (int k = 0; k <= n_terms; k++) {
        if (hist[k] > 0) {
            best = std::max(best, beta * (n_terms - 2 * k) + std::log(hist[k]));
        }
    }
    double acc = 0;
    for (int k = 0; k <= n_terms; k++) {
        if (hist[k] > 0) {
            acc += std::exp(beta * (n_terms - 2 * k) + std::log(hist[k]) - best);
        }
    }
    return log_prefactor + best + std::log(acc);
}

Mask128 sign_mask(const DisorderSample &s) {
    Mask128 a;
    for (int t = 0; t < s.model->n_terms; t++) {
        if (s.sign[t] < 0) {
            a.flip(t);
        }
    }
    return a;
}

LogPartition from_histogram(const std::vector<double> &hist, const DisorderSample &s,
                            double log_kernel) {
    int n_t = s.model->n_terms;
    LogPartition out;
    if (s.beta_inf) {
        int kmin = 0;
        while (hist[kmin] == 0) {
            kmin++;
        }
        out.beta_inf = true;
        out.ground_energy = n_t - 2 * kmin;
        out.log_degeneracy = std::log(hist[kmin]) + log_kernel;
        return out;
    }
    out.log_z = logsumexp_hist(hist, s.beta, n_t, log_kernel);
    return out;
}

void check_spin_budget(const TermModel &m) {
    if (m.n_spins > 28) {
        throw std::invalid_argument("exact backend: spin count over 28");
    }
}

}  // namespace

LogPartition exact_logZ(const DisorderSample &sample) {
    check_spin_budget(*sample.model);
    ImageBasis ib = build_image_basis(*sample.model);
    return from_histogram(defect_histogram(ib, sign_mask(sample)), sample, ib.log_kernel);
}

LogPartition exact_logZ_flipped(const DisorderSample &sample, const std::vector<int> &flip_terms) {
    check_spin_budget(*sample.model);
    ImageBasis ib = build_image_basis(*sample.model);
    Mask128 a = sign_mask(sample);
    for (int t : flip_terms) {
        a.flip(t);
    }
    return from_histogram(defect_histogram(ib, a), sample, ib.log_kernel);
}

bool twist_is_gauge_removable(const TermModel &model, const std::vector<int> &flip_terms) {
    Gf2Basis span(model.n_terms);
    for (int s = 0; s < model.n_spins; s++) {
        BitVec v(model.n_terms);
        for (int t : model.spin_terms[s]) {
            v.flip(t);
        }
        span.add(v);
    }
    BitVec twist(model.n_terms);
    for (int t : flip_terms) {
        twist.flip(t);
    }
    return span.contains(twist);
}

LogPartition twisted_logZ(const DisorderSample &sample, const lattice::Cycle &cycle) {
    return exact_logZ_flipped(sample, cycle.edges);
}

DomainWallFreeEnergy domain_wall_dF(const DisorderSample &sample, const lattice::Cycle &cycle) {
    if (twist_is_gauge_removable(*sample.model, cycle.edges)) {
        return {0.0, true};
    }
    if (sample.beta_inf) {
        LogPartition z0 = exact_logZ(sample);
        LogPartition zt = twisted_logZ(sample, cycle);
        if (zt.ground_energy < z0.ground_energy) {
            return {std::numeric_limits<double>::infinity(), false};
        }
        return {z0.log_degeneracy - zt.log_degeneracy, false};
    }
    LogPartition z0 = exact_logZ(sample);
    LogPartition zt = twisted_logZ(sample, cycle);
    return {z0.log_z - zt.log_z, false};
}

double exact_spin_correlation(const DisorderSample &sample, int a, int b) {
    const TermModel &m = *sample.model;
    check_spin_budget(m);
    for (const auto &ts : m.term_spins) {
        if (ts.size() != 2) {
            throw std::invalid_argument("exact_spin_correlation: pair-interaction models only");
        }
    }
    if (a == b) {
        return 1.0;
    }
    // BFS a path of terms from a to b; the product of term values along it
    // telescopes to s_a s_b.
    std::vector<int> prev_term(m.n_spins, -1), prev_spin(m.n_spins, -1);
    std::queue<int> q;
    q.push(a);
    prev_spin[a] = a;
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        if (u == b) {
            break;
        }
        for (int t : m.spin_terms[u]) {
            int v = m.term_spins[t][0] == u ? m.term_spins[t][1] : m.term_spins[t][0];
            if (prev_spin[v] < 0) {
                prev_spin[v] = u;
                prev_term[v] = t;
                q.push(v);
            }
        }
    }
    if (prev_spin[b] < 0) {
        throw std::invalid_argument("exact_spin_correlation: spins not connected");
    }
    Mask128 path;
    for (int v = b; v != a; v = prev_spin[v]) {
        path.flip(prev_term[v]);
    }
    ImageBasis ib = build_image_basis(m);
    auto hist = defect_histogram_probe(ib, sign_mask(sample), path);
    int n_t = m.n_terms;
    if (sample.beta_inf) {
        int kmin = 0;
        while (hist[0][kmin] == 0 && hist[1][kmin] == 0) {
            kmin++;
        }
        return (hist[0][kmin] - hist[1][kmin]) / (hist[0][kmin] + hist[1][kmin]);
    }
    // <s_a s_b> = (Z_even - Z_odd) / Z with the parity-resolved sums; the
    // correlator sign comes from (-1)^{path crossings}.
    double best = -std::numeric_limits<double>::infinity();
    for (int k = 0; k <= n_t; k++) {
        double w = hist[0][k] + hist[1][k];
        if (w > 0) {
            best = std::max(best, sample.beta * (n_t - 2 * k) + std::log(w));
        }
    }
    double num = 0, den = 0;
    for (int k = 0; k <= n_t; k++) {
        double e = std::exp(sample.beta * (n_t - 2 * k) - best);
        num += (hist[0][k] - hist[1][k]) * e;
        den += (hist[0][k] + hist[1][k]) * e;
    }
    return num / den;
}

double exact_mean_energy(const DisorderSample &sample) {
    const TermModel &m = *sample.model;
    check_spin_budget(m);
    ImageBasis ib = build_image_basis(m);
    auto hist = defect_histogram(ib, sign_mask(sample));
    int n_t = m.n_terms;
    if (sample.beta_inf) {
        int kmin = 0;
        while (hist[kmin] == 0) {
            kmin++;
        }
        return n_t - 2 * kmin;
    }
    double best = -std::numeric_limits<double>::infinity();
    for (int k = 0; k <= n_t; k++) {
        if (hist[k] > 0) {
            best = std::max(best, sample.beta * (n_t - 2 * k) + std::log(hist[k]));
        }
    }
    double num = 0, den = 0;
    for (int k = 0; k <= n_t; k++) {
        if (hist[k] > 0) {
            double e = std::exp(sample.beta * (n_t - 2 * k) + std::log(hist[k]) - best);
            num += (n_t - 2 * k) * e;
            den += e;
        }
    }
    return num / den;
}

DirectEnumeration exact_direct_enumeration(const DisorderSample &sample) {
    const TermModel &m = *sample.model;
    if (m.n_spins > 20) {
        throw std::invalid_argument("exact_direct_enumeration: spin count over 20");
    }
    int n = m.n_spins;
    double best = -std::numeric_limits<double>::infinity();
    std::vector<int> energy(size_t{1} << n);
    for (size_t c = 0; c < (size_t{1} << n); c++) {
        int e = 0;
        for (int t = 0; t < m.n_terms; t++) {
            int prod = sample.sign[t];
            for (int s : m.term_spins[t]) {
                if ((c >> s) & 1) {
                    prod = -prod;
                }
            }
            e += prod;
        }
        energy[c] = e;
        best = std::max(best, sample.beta * e);
    }
    double z = 0, esum = 0, msum = 0;
    for (size_t c = 0; c < (size_t{1} << n); c++) {
        double w = std::exp(sample.beta * energy[c] - best);
        z += w;
        esum += w * energy[c];
        msum += w * std::abs(n - 2 * std::popcount(c));
    }
    return {best + std::log(z), esum / z, msum / z};
}

FlavoredLogZ flavored_logZ(const TermModel &base, double coupling_k, int two_n,
                           const std::vector<int> *boundary_vertices) {
    if (two_n < 2 || two_n % 2 != 0) {
        throw std::invalid_argument("flavored_logZ: flavor count must be even and >= 2");
    }
    for (const auto &ts : base.term_spins) {
        if (ts.size() != 2) {
            throw std::invalid_argument("flavored_logZ: pair-interaction base graph required");
        }
    }
    int nb = base.n_spins;
    if (two_n * nb > 24) {
        throw std::invalid_argument("flavored_logZ: spin budget (2n x vertices <= 24) exceeded");
    }
    if (base.n_terms > 64) {
        throw std::invalid_argument("flavored_logZ: term budget exceeded");
    }
    // Domain-wall mask per single-flavor configuration.
    size_t nconf = size_t{1} << nb;
    std::vector<uint64_t> wall(nconf, 0);
    for (size_t c = 0; c < nconf; c++) {
        uint64_t w = 0;
        for (int t = 0; t < base.n_terms; t++) {
            int u = base.term_spins[t][0], v = base.term_spins[t][1];
            if (((c >> u) ^ (c >> v)) & 1) {
                w |= uint64_t{1} << t;
            }
        }
        wall[c] = w;
    }
    uint64_t bmask = 0;
    if (boundary_vertices) {
        for (int v : *boundary_vertices) {
            bmask |= uint64_t{1} << v;
        }
    }
    int n_t = base.n_terms;
    int max_defect = two_n * n_t;
    std::vector<double> hist(max_defect + 1, 0.0);
    size_t total = size_t{1} << (two_n * nb);
    uint64_t conf_mask = nconf - 1;
    for (size_t x = 0; x < total; x++) {
        if (bmask) {
            bool ok = true;
            uint64_t c1 = x & conf_mask;
            uint64_t c2 = (x >> nb) & conf_mask;
            for (int s = 2; s < two_n && ok; s++) {
                uint64_t cs = (x >> (nb * s)) & conf_mask;
                uint64_t rel = (cs ^ (s % 2 == 0 ? c1 : c2)) & bmask;
                ok = rel == 0 || rel == bmask;
            }
            if (!ok) {
                continue;
            }
        }
        int defects = 0;
        uint64_t first = wall[x & conf_mask];
        uint64_t prev = first;
        for (int s = 1; s < two_n; s++) {
            uint64_t cur = wall[(x >> (nb * s)) & conf_mask];
            defects += std::popcount(prev ^ cur);
            prev = cur;
        }
        defects += std::popcount(prev ^ first);
        hist[defects] += 1;
    }
    FlavoredLogZ out;
    if (std::isinf(coupling_k)) {
        int kmin = 0;
        while (hist[kmin] == 0) {
            kmin++;
        }
        out.k_inf = true;
        out.log_degeneracy = std::log(hist[kmin]);
        out.log_z = 0;
        return out;
    }
    double best = -std::numeric_limits<double>::infinity();
    for (int k = 0; k <= max_defect; k++) {
        if (hist[k] > 0) {
            best = std::max(best, 0.5 * coupling_k * (max_defect - 2 * k) + std::log(hist[k]));
        }
    }
    double acc = 0;
    for (int k = 0; k <= max_defect; k++) {
        if (hist[k] > 0) {
            acc += std::exp(0.5 * coupling_k * (max_defect - 2 * k) + std::log(hist[k]) - best);
        }
    }
    out.log_z = best + std::log(acc);
    return out;
}

}  // namespace decotop::statmech
