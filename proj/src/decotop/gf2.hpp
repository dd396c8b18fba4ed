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

#ifndef DECOTOP_GF2_HPP
#define DECOTOP_GF2_HPP

#include <cstdint>
#include <vector>

namespace decotop {

// Dense bit vector over GF(2). Sized at construction; all operands of a
// binary op must share the same bit count.
struct BitVec {
    int nbits = 0;
    std::vector<uint64_t> w;

    BitVec() = default;
    explicit BitVec(int n) : nbits(n), w((n + 63) / 64, 0) {}

    bool get(int i) const { return (w[i >> 6] >> (i & 63)) & 1; }
    void set(int i, bool v) {
        uint64_t m = uint64_t{1} << (i & 63);
        if (v) {
            w[i >> 6] |= m;
        } else {
            w[i >> 6] &= ~m;
        }
    }
    void flip(int i) { w[i >> 6] ^= uint64_t{1} << (i & 63); }

    void operator^=(const BitVec &o) {
        for (size_t k = 0; k < w.size(); k++) {
            w[k] ^= o.w[k];
        }
    }
    bool is_zero() const {
        for (uint64_t x : w) {
            if (x) {
                return false;
            }
        }
        return true;
    }
    int popcount() const;
    int highest_set_bit() const;  // -1 if zero
    int lowest_set_bit() const;   // -1 if zero
    bool operator==(const BitVec &o) const { return nbits == o.nbits && w == o.w; }
};

// Row basis of a GF(2) subspace kept in (high-bit) echelon form: every row
// has a distinct highest set bit and rows are reduced against each other.
struct Gf2Basis {
    int nbits = 0;
    std::vector<BitVec> rows;
    std::vector<int> pivots;  // highest set bit of each row

    explicit Gf2Basis(int n) : nbits(n) {}

    int rank() const { return (int)rows.size(); }

    // Reduces v against the basis in place; returns the residue.
    BitVec reduce(BitVec v) const;

    // Adds v to the span. Returns true if the rank grew.
    bool add(BitVec v);

    bool contains(const BitVec &v) const { return reduce(v).is_zero(); }

    // Enumerates one representative per coset of the span inside the
    // enclosing space `ambient` (a basis containing this span). Cheap only
    // when the quotient is small.
    std::vector<BitVec> coset_reps_within(const Gf2Basis &ambient) const;

    // Smallest element of v's coset in lex order (bit 0 most significant).
    BitVec lex_min_in_coset(const BitVec &v) const;
};

// Null space of a set of parity constraints: returns a basis of all
// vectors v (nbits long) with <v, c> = 0 for every constraint row c.
Gf2Basis null_space(int nbits, const std::vector<BitVec> &constraints);

}  // namespace decotop

#endif
