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

#include "decotop/dense.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace decotop::quantum {

namespace {

int parity(uint32_t v) { return std::popcount(v) & 1; }

void check_qubits(int nq) {
    if (nq < 1 || nq > kMaxDenseQubits) {
        throw std::invalid_argument("dense oracle: qubit budget is 1..13");
    }
}

}  // namespace

PauliString PauliString::times(const PauliString &o) const {
    PauliString r;
    r.x = x ^ o.x;
    r.z = z ^ o.z;
    r.sign = sign * o.sign * (parity(z & o.x) ? -1 : +1);
    return r;
}

bool PauliString::commutes(const PauliString &o) const {
    return ((parity(z & o.x) + parity(x & o.z)) & 1) == 0;
}

DenseVec::DenseVec(int qubits) : nq(qubits) {
    check_qubits(qubits);
    a.assign(size_t{1} << qubits, 0.0);
}

DenseVec DenseVec::basis_state(int qubits, uint32_t index) {
    DenseVec v(qubits);
    v.a[index] = 1.0;
    return v;
}

double DenseVec::norm2() const {
    double s = 0;
    for (double v : a) {
        s += v * v;
    }
    return s;
}

void DenseVec::normalize() {
    double n = std::sqrt(norm2());
    if (n == 0) {
        throw std::runtime_error("DenseVec: cannot normalize zero vector");
    }
    for (double &v : a) {
        v /= n;
    }
}

void DenseVec::apply(const PauliString &p) {
    // (P v)[r] = sign * (-1)^{z.(r^x)} v[r^x]
    size_t dim = a.size();
    if (p.x == 0) {
        for (size_t r = 0; r < dim; r++) {
            a[r] *= p.sign * (parity(p.z & (uint32_t)r) ? -1 : 1);
        }
        return;
    }
    for (size_t r = 0; r < dim; r++) {
        size_t r2 = r ^ p.x;
        if (r2 < r) {
            continue;
        }
        double vr = a[r], vr2 = a[r2];
        double s_r = p.sign * (parity(p.z & (uint32_t)r2) ? -1 : 1);
        double s_r2 = p.sign * (parity(p.z & (uint32_t)r) ? -1 : 1);
        a[r] = s_r * vr2;
        a[r2] = s_r2 * vr;
    }
}

void DenseVec::apply_factor(const PauliString &p, double c_id, double c_p) {
    size_t dim = a.size();
    if (p.x == 0) {
        for (size_t r = 0; r < dim; r++) {
            double s = p.sign * (parity(p.z & (uint32_t)r) ? -1 : 1);
            a[r] *= c_id + c_p * s;
        }
        return;
    }
    for (size_t r = 0; r < dim; r++) {
        size_t r2 = r ^ p.x;
        if (r2 < r) {
            continue;
        }
        double vr = a[r], vr2 = a[r2];
        double s_r = p.sign * (parity(p.z & (uint32_t)r2) ? -1 : 1);
        double s_r2 = p.sign * (parity(p.z & (uint32_t)r) ? -1 : 1);
        a[r] = c_id * vr + c_p * s_r * vr2;
        a[r2] = c_id * vr2 + c_p * s_r2 * vr;
    }
}

double inner(const DenseVec &u, const DenseVec &v) {
    double s = 0;
    for (size_t i = 0; i < u.a.size(); i++) {
        s += u.a[i] * v.a[i];
    }
    return s;
}

double fidelity(const DenseVec &u, const DenseVec &v) {
    double uv = inner(u, v);
    return uv * uv / (u.norm2() * v.norm2());
}

void hadamard_all(DenseVec &v) {
    size_t dim = v.a.size();
    for (size_t len = 1; len < dim; len <<= 1) {
        for (size_t i = 0; i < dim; i += 2 * len) {
            for (size_t j = i; j < i + len; j++) {
                double x = v.a[j], y = v.a[j + len];
                v.a[j] = x + y;
                v.a[j + len] = x - y;
            }
        }
    }
    double norm = std::pow(2.0, -0.5 * v.nq);
    for (double &x : v.a) {
        x *= norm;
    }
}

DenseMatrix::DenseMatrix(int qubits) : nq(qubits), n(size_t{1} << qubits) {
    check_qubits(qubits);
    a.assign(n * n, 0.0);
}

DenseMatrix DenseMatrix::identity(int qubits) {
    DenseMatrix m(qubits);
    for (size_t r = 0; r < m.n; r++) {
        m.at(r, r) = 1.0;
    }
    return m;
}

DenseMatrix DenseMatrix::outer(const DenseVec &v) {
    DenseMatrix m(v.nq);
    m.accumulate_outer(v, 1.0);
    return m;
}

double DenseMatrix::trace() const {
    double t = 0;
    for (size_t r = 0; r < n; r++) {
        t += at(r, r);
    }
    return t;
}

void DenseMatrix::scale(double f) {
    for (double &v : a) {
        v *= f;
    }
}

void DenseMatrix::normalize_trace() {
    double t = trace();
    if (t == 0) {
        throw std::runtime_error("DenseMatrix: zero trace");
    }
    scale(1.0 / t);
}

void DenseMatrix::add_scaled(const DenseMatrix &o, double f) {
    for (size_t i = 0; i < a.size(); i++) {
        a[i] += f * o.a[i];
    }
}

void DenseMatrix::accumulate_outer(const DenseVec &v, double w) {
    for (size_t r = 0; r < n; r++) {
        if (v.a[r] == 0) {
            continue;
        }
        double vr = w * v.a[r];
        double *row = &a[r * n];
        for (size_t c = 0; c < n; c++) {
            row[c] += vr * v.a[c];
        }
    }
}

void DenseMatrix::left_mul_pauli(const PauliString &p) {
    apply_factor_left(p, 0.0, 1.0);
}

void DenseMatrix::right_mul_pauli(const PauliString &p) {
    // (M P)(r, c) = M(r, c ^ x) * sign * (-1)^{z.c}
    std::vector<double> tmp(n);
    for (size_t r = 0; r < n; r++) {
        double *row = &a[r * n];
        for (size_t c = 0; c < n; c++) {
            tmp[c] = row[c ^ p.x] * (p.sign * (parity(p.z & (uint32_t)c) ? -1 : 1));
        }
        std::copy(tmp.begin(), tmp.end(), row);
    }
}

void DenseMatrix::apply_factor_left(const PauliString &p, double c_id, double c_p) {
    // (P M)(r, :) = sign * (-1)^{z.(r^x)} M(r^x, :)
    if (p.x == 0) {
        for (size_t r = 0; r < n; r++) {
            double s = p.sign * (parity(p.z & (uint32_t)r) ? -1 : 1);
            double f = c_id + c_p * s;
            double *row = &a[r * n];
            for (size_t c = 0; c < n; c++) {
                row[c] *= f;
            }
        }
        return;
    }
    std::vector<double> tmp(n);
    for (size_t r = 0; r < n; r++) {
        size_t r2 = r ^ p.x;
        if (r2 < r) {
            continue;
        }
        double s_r = p.sign * (parity(p.z & (uint32_t)r2) ? -1 : 1);
        double s_r2 = p.sign * (parity(p.z & (uint32_t)r) ? -1 : 1);
        double *row = &a[r * n];
        double *row2 = &a[r2 * n];
        for (size_t c = 0; c < n; c++) {
            double u = row[c], v = row2[c];
            row[c] = c_id * u + c_p * s_r * v;
            row2[c] = c_id * v + c_p * s_r2 * u;
        }
    }
}

double DenseMatrix::max_abs_diff(const DenseMatrix &o) const {
    double m = 0;
    for (size_t i = 0; i < a.size(); i++) {
        m = std::max(m, std::abs(a[i] - o.a[i]));
    }
    return m;
}

double DenseMatrix::max_abs() const {
    double m = 0;
    for (double v : a) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

bool DenseMatrix::is_symmetric(double tol) const {
    for (size_t r = 0; r < n; r++) {
        for (size_t c = r + 1; c < n; c++) {
            if (std::abs(at(r, c) - at(c, r)) > tol) {
                return false;
            }
        }
    }
    return true;
}

DenseMatrix matmul(const DenseMatrix &a, const DenseMatrix &b) {
    DenseMatrix out(a.nq);
    size_t n = a.n;
    for (size_t r = 0; r < n; r++) {
        for (size_t k = 0; k < n; k++) {
            double v = a.at(r, k);
            if (v == 0) {
                continue;
            }
            const double *brow = &b.a[k * n];
            double *orow = &out.a[r * n];
            for (size_t c = 0; c < n; c++) {
                orow[c] += v * brow[c];
            }
        }
    }
    return out;
}

void apply_phase_flip_channel(DenseMatrix &rho, double p, uint32_t qubit_mask) {
    if (p < 0 || p > 0.5) {
        throw std::invalid_argument("apply_phase_flip_channel: need 0 <= p <= 0.5");
    }
    double f = 1 - 2 * p;
    size_t n = rho.n;
    std::vector<double> pow_tab(33, 1.0);
    for (int i = 1; i <= 32; i++) {
        pow_tab[i] = pow_tab[i - 1] * f;
    }
    for (size_t r = 0; r < n; r++) {
        double *row = &rho.a[r * n];
        for (size_t c = 0; c < n; c++) {
            int k = std::popcount(((uint32_t)r ^ (uint32_t)c) & qubit_mask);
            row[c] *= pow_tab[k];
        }
    }
}

DenseMatrix partial_transpose(const DenseMatrix &rho, uint32_t mask) {
    DenseMatrix out(rho.nq);
    size_t n = rho.n;
    for (size_t r = 0; r < n; r++) {
        for (size_t c = 0; c < n; c++) {
            size_t r2 = (r & ~(size_t)mask) | (c & mask);
            size_t c2 = (c & ~(size_t)mask) | (r & mask);
            out.at(r, c) = rho.at(r2, c2);
        }
    }
    return out;
}

namespace {

// Expand `bits` (compact) into the positions set in mask.
uint32_t deposit_bits(uint32_t bits, uint32_t mask) {
    uint32_t out = 0;
    int k = 0;
    for (int i = 0; i < 32; i++) {
        if ((mask >> i) & 1) {
            if ((bits >> k) & 1) {
                out |= uint32_t{1} << i;
            }
            k++;
        }
    }
    return out;
}

}  // namespace

DenseMatrix partial_trace_keep(const DenseMatrix &rho, uint32_t keep_mask) {
    int keep_n = std::popcount(keep_mask);
    uint32_t env_mask = ~keep_mask & ((uint32_t{1} << rho.nq) - 1);
    int env_n = rho.nq - keep_n;
    DenseMatrix out(keep_n);
    for (uint32_t ra = 0; ra < (uint32_t{1} << keep_n); ra++) {
        uint32_t rbits = deposit_bits(ra, keep_mask);
        for (uint32_t ca = 0; ca < (uint32_t{1} << keep_n); ca++) {
            uint32_t cbits = deposit_bits(ca, keep_mask);
            double s = 0;
            for (uint32_t b = 0; b < (uint32_t{1} << env_n); b++) {
                uint32_t bb = deposit_bits(b, env_mask);
                s += rho.at(rbits | bb, cbits | bb);
            }
            out.at(ra, ca) = s;
        }
    }
    return out;
}

DenseMatrix reduced_density_from_state(const DenseVec &psi, uint32_t keep_mask) {
    int keep_n = std::popcount(keep_mask);
    uint32_t env_mask = ~keep_mask & ((uint32_t{1} << psi.nq) - 1);
    int env_n = psi.nq - keep_n;
    DenseMatrix out(keep_n);
    double norm = psi.norm2();
    for (uint32_t b = 0; b < (uint32_t{1} << env_n); b++) {
        uint32_t bb = deposit_bits(b, env_mask);
        for (uint32_t ra = 0; ra < (uint32_t{1} << keep_n); ra++) {
            double vr = psi.a[deposit_bits(ra, keep_mask) | bb];
            if (vr == 0) {
                continue;
            }
            for (uint32_t ca = 0; ca < (uint32_t{1} << keep_n); ca++) {
                out.at(ra, ca) += vr * psi.a[deposit_bits(ca, keep_mask) | bb];
            }
        }
    }
    out.scale(1.0 / norm);
    return out;
}

EigenSym eigen_symmetric(const DenseMatrix &m) {
    if (m.n > 4096) {
        throw std::invalid_argument("eigen_symmetric: dimension over 4096");
    }
    size_t n = m.n;
    DenseMatrix a = m;
    DenseMatrix v = DenseMatrix::identity(m.nq);
    for (int sweep = 0; sweep < 100; sweep++) {
        double off = 0;
        for (size_t r = 0; r < n; r++) {
            for (size_t c = r + 1; c < n; c++) {
                off += a.at(r, c) * a.at(r, c);
            }
        }
        if (off < 1e-26 * std::max(1.0, a.max_abs())) {
            break;
        }
        for (size_t p = 0; p < n; p++) {
            for (size_t q = p + 1; q < n; q++) {
                double apq = a.at(p, q);
                if (std::abs(apq) < 1e-300) {
                    continue;
                }
                double app = a.at(p, p), aqq = a.at(q, q);
                double theta = 0.5 * (aqq - app) / apq;
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1));
                double c = 1.0 / std::sqrt(t * t + 1);
                double s = t * c;
                for (size_t k = 0; k < n; k++) {
                    double akp = a.at(k, p), akq = a.at(k, q);
                    a.at(k, p) = c * akp - s * akq;
                    a.at(k, q) = s * akp + c * akq;
                }
                for (size_t k = 0; k < n; k++) {
                    double apk = a.at(p, k), aqk = a.at(q, k);
                    a.at(p, k) = c * apk - s * aqk;
                    a.at(q, k) = s * apk + c * aqk;
                }
                for (size_t k = 0; k < n; k++) {
                    double vkp = v.at(k, p), vkq = v.at(k, q);
                    v.at(k, p) = c * vkp - s * vkq;
                    v.at(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    EigenSym out{std::vector<double>(n), std::move(v)};
    for (size_t r = 0; r < n; r++) {
        out.values[r] = a.at(r, r);
    }
    return out;
}

DenseMatrix sqrt_psd(const DenseMatrix &m) {
    EigenSym es = eigen_symmetric(m);
    size_t n = m.n;
    DenseMatrix out(m.nq);
    for (size_t k = 0; k < n; k++) {
        double lam = es.values[k];
        if (lam < 0) {
            if (lam < -1e-9) {
                throw std::runtime_error("sqrt_psd: matrix is not PSD");
            }
            lam = 0;
        }
        double w = std::sqrt(lam);
        if (w == 0) {
            continue;
        }
        for (size_t r = 0; r < n; r++) {
            double vr = es.vectors.at(r, k);
            if (vr == 0) {
                continue;
            }
            double f = w * vr;
            for (size_t c = 0; c < n; c++) {
                out.at(r, c) += f * es.vectors.at(c, k);
            }
        }
    }
    return out;
}

double pauli_expectation(const DenseVec &psi, const PauliString &p) {
    DenseVec t = psi;
    t.apply(p);
    return inner(psi, t) / psi.norm2();
}

double pauli_expectation(const DenseMatrix &rho, const PauliString &p) {
    // tr(rho P) / tr(rho)
    double s = 0;
    size_t n = rho.n;
    for (size_t r = 0; r < n; r++) {
        size_t c = r ^ p.x;
        double sg = p.sign * (parity(p.z & (uint32_t)r) ? -1 : 1);
        s += sg * rho.at(r, c);
    }
    return s / rho.trace();
}

double renyi2_entropy(const DenseVec &psi, uint32_t region_mask) {
    DenseMatrix rho_a = reduced_density_from_state(psi, region_mask);
    DenseMatrix sq = matmul(rho_a, rho_a);
    return -std::log(sq.trace());
}

double log_negativity(const DenseMatrix &rho, uint32_t region_mask) {
    DenseMatrix pt = partial_transpose(rho, region_mask);
    EigenSym es = eigen_symmetric(pt);
    double s = 0;
    for (double lam : es.values) {
        s += std::abs(lam);
    }
    return std::log(s);
}

double min_eigenvalue(const DenseMatrix &rho) {
    EigenSym es = eigen_symmetric(rho);
    double m = es.values[0];
    for (double v : es.values) {
        m = std::min(m, v);
    }
    return m;
}

double pt_moment(const DenseMatrix &rho, uint32_t region_mask, int k) {
    DenseMatrix pt = partial_transpose(rho, region_mask);
    return matrix_moment(pt, k);
}

double matrix_moment(const DenseMatrix &rho, int k) {
    DenseMatrix acc = rho;
    for (int i = 1; i < k; i++) {
        acc = matmul(acc, rho);
    }
    return acc.trace();
}

}  // namespace decotop::quantum
