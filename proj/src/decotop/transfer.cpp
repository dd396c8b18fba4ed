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

#include "decotop/transfer.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace decotop::statmech {

namespace {

struct TransferState {
    int lx, ly;
    size_t dim;
    std::vector<double> m;  // m[a * dim + b]: a = column-0 state, b = current column state
    double log_scale = 0;

    void rescale() {
        double mx = 0;
        for (double v : m) {
            mx = std::max(mx, std::abs(v));
        }
        if (mx <= 0) {
            throw std::runtime_error("transfer_logZ_2d: matrix vanished");
        }
        for (double &v : m) {
            v /= mx;
        }
        log_scale += std::log(mx);
    }
};

// Accumulates D_0 H_0 D_1 H_1 ... D_{lx-1}; wrap couplings handled by caller.
TransferState build_interior(const DisorderSample &s) {
    const TermModel &mod = *s.model;
    if (mod.kind != ModelKind::ising2d) {
        throw std::invalid_argument("transfer_logZ_2d: ising2d samples only");
    }
    int lx = mod.lx, ly = mod.ly;
    if (ly > 16) {
        throw std::invalid_argument("transfer_logZ_2d: width over 16");
    }
    if (s.beta_inf) {
        throw std::invalid_argument("transfer_logZ_2d: beta = inf not supported here");
    }
    double beta = s.beta;
    int nv = lx * ly;
    auto h_edge = [&](int x, int y) { return ((y % ly) + ly) % ly * lx + ((x % lx) + lx) % lx; };
    auto v_edge = [&](int x, int y) { return nv + h_edge(x, y); };

    TransferState st;
    st.lx = lx;
    st.ly = ly;
    st.dim = size_t{1} << ly;
    size_t dim = st.dim;
    st.m.assign(dim * dim, 0.0);

    auto column_diagonal = [&](int x, std::vector<double> &d) {
        d.assign(dim, 0.0);
        for (size_t b = 0; b < dim; b++) {
            double e = 0;
            for (int y = 0; y < ly; y++) {
                int sy = (b >> y) & 1, sy1 = (b >> ((y + 1) % ly)) & 1;
                e += s.sign[v_edge(x, y)] * (sy == sy1 ? 1.0 : -1.0);
            }
            d[b] = std::exp(beta * e);
        }
    };

    std::vector<double> diag;
    column_diagonal(0, diag);
    for (size_t b = 0; b < dim; b++) {
        st.m[b * dim + b] = diag[b];
    }
    for (int x = 1; x < lx; x++) {
        // Horizontal couplings between columns x-1 and x, one site at a time.
        for (int y = 0; y < ly; y++) {
            double j = s.sign[h_edge(x - 1, y)];
            double same = std::exp(beta * j), diff = std::exp(-beta * j);
            size_t bit = size_t{1} << y;
            for (size_t a = 0; a < dim; a++) {
                double *row = &st.m[a * dim];
                for (size_t b = 0; b < dim; b++) {
                    if (b & bit) {
                        continue;
                    }
                    double u = row[b], v = row[b | bit];
                    row[b] = same * u + diff * v;
                    row[b | bit] = diff * u + same * v;
                }
            }
        }
        column_diagonal(x, diag);
        for (size_t a = 0; a < dim; a++) {
            double *row = &st.m[a * dim];
            for (size_t b = 0; b < dim; b++) {
                row[b] *= diag[b];
            }
        }
        st.rescale();
    }
    return st;
}

double wrap_trace(const TransferState &st, const DisorderSample &s, bool twist) {
    const TermModel &mod = *s.model;
    int lx = mod.lx, ly = mod.ly;
    size_t dim = st.dim;
    double beta = s.beta;
    // Wrap horizontal couplings connect column lx-1 (index b) back to column 0
    // (index a); their weight depends only on a ^ b.
    std::vector<double> jw(ly);
    for (int y = 0; y < ly; y++) {
        jw[y] = s.sign[y * lx + (lx - 1)] * (twist ? -1.0 : 1.0);
    }
    double best = beta * ly;
    std::vector<double> wtab(dim);
    for (size_t x = 0; x < dim; x++) {
        double e = 0;
        for (int y = 0; y < ly; y++) {
            e += jw[y] * (((x >> y) & 1) ? -1.0 : 1.0);
        }
        wtab[x] = std::exp(beta * e - best);
    }
    double acc = 0;
    for (size_t a = 0; a < dim; a++) {
        const double *row = &st.m[a * dim];
        for (size_t b = 0; b < dim; b++) {
            acc += row[b] * wtab[a ^ b];
        }
    }
    return std::log(acc) + best + st.log_scale;
}

}  // namespace

LogPartition transfer_logZ_2d(const DisorderSample &sample) {
    TransferState st = build_interior(sample);
    LogPartition out;
    out.log_z = wrap_trace(st, sample, false);
    return out;
}

TwistedPair transfer_logZ_2d_twisted_pair(const DisorderSample &sample) {
    TransferState st = build_interior(sample);
    return {wrap_trace(st, sample, false), wrap_trace(st, sample, true)};
}

}  // namespace decotop::statmech
