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

#include "decotop/gf2.hpp"

#include <bit>
#include <stdexcept>

namespace decotop {

int BitVec::popcount() const {
    int c = 0;
    for (uint64_t x : w) {
        c += std::popcount(x);
    }
    return c;
}

int BitVec::highest_set_bit() const {
    for (int k = (int)w.size() - 1; k >= 0; k--) {
        if (w[k]) {
            return 64 * k + 63 - std::countl_zero(w[k]);
        }
    }
    return -1;
}

int BitVec::lowest_set_bit() const {
    for (size_t k = 0; k < w.size(); k++) {
        if (w[k]) {
            return 64 * (int)k + std::countr_zero(w[k]);
        }
    }
    return -1;
}

BitVec Gf2Basis::reduce(BitVec v) const {
    for (size_t i = 0; i < rows.size(); i++) {
        if (v.get(pivots[i])) {
            v ^= rows[i];
        }
    }
    return v;
}

bool Gf2Basis::add(BitVec v) {
    v = reduce(v);
    int p = v.highest_set_bit();
    if (p < 0) {
        return false;
    }
    for (size_t i = 0; i < rows.size(); i++) {
        if (rows[i].get(p)) {
            rows[i] ^= v;
        }
    }
    rows.push_back(v);
    pivots.push_back(p);
    return true;
}

std::vector<BitVec> Gf2Basis::coset_reps_within(const Gf2Basis &ambient) const {
    Gf2Basis probe(nbits);
    for (const BitVec &r : rows) {
        probe.add(r);
    }
    std::vector<BitVec> quotient;
    for (const BitVec &r : ambient.rows) {
        if (probe.add(r)) {
            quotient.push_back(r);
        }
    }
    size_t d = quotient.size();
    if (d > 26) {
        throw std::runtime_error("gf2: coset quotient too large to enumerate");
    }
    std::vector<BitVec> reps;
    reps.reserve(size_t{1} << d);
    BitVec cur(nbits);
    reps.push_back(cur);
    for (size_t k = 1; k < (size_t{1} << d); k++) {
        cur ^= quotient[std::countr_zero(k)];
        reps.push_back(cur);
    }
    return reps;
}

BitVec Gf2Basis::lex_min_in_coset(const BitVec &v) const {
    // Echelonize with the *lowest* set bit as the lead (bit 0 is most
    // significant in lex order), then greedily clear v from the top.
    std::vector<BitVec> lex_rows;
    std::vector<int> leads;
    for (BitVec r : rows) {
        while (true) {
            int lo = r.lowest_set_bit();
            if (lo < 0) {
                break;
            }
            bool collided = false;
            for (size_t i = 0; i < lex_rows.size(); i++) {
                if (leads[i] == lo) {
                    r ^= lex_rows[i];
                    collided = true;
                    break;
                }
            }
            if (!collided) {
                lex_rows.push_back(r);
                leads.push_back(lo);
                break;
            }
        }
    }
    BitVec best = v;
    for (int bit = 0; bit < nbits; bit++) {
        if (!best.get(bit)) {
            continue;
        }
        for (size_t i = 0; i < lex_rows.size(); i++) {
            if (leads[i] == bit) {
                best ^= lex_rows[i];
                break;
            }
        }
    }
    return best;
}

Gf2Basis null_space(int nbits, const std::vector<BitVec> &constraints) {
    std::vector<int> pivot_col;
    std::vector<BitVec> echelon;
    for (BitVec r : constraints) {
        for (size_t i = 0; i < echelon.size(); i++) {
            if (r.get(pivot_col[i])) {
                r ^= echelon[i];
            }
        }
        int p = r.highest_set_bit();
        if (p >= 0) {
            for (size_t i = 0; i < echelon.size(); i++) {
                if (echelon[i].get(p)) {
                    echelon[i] ^= r;
                }
            }
            echelon.push_back(r);
            pivot_col.push_back(p);
        }
    }
    std::vector<bool> is_pivot(nbits, false);
    for (int p : pivot_col) {
        is_pivot[p] = true;
    }
    Gf2Basis ns(nbits);
    for (int c = 0; c < nbits; c++) {
        if (is_pivot[c]) {
            continue;
        }
        BitVec v(nbits);
        v.set(c, true);
        for (size_t i = 0; i < echelon.size(); i++) {
            if (echelon[i].get(c)) {
                v.flip(pivot_col[i]);
            }
        }
        ns.add(v);
    }
    return ns;
}

}  // namespace decotop
