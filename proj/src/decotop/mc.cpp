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

#include "decotop/mc.hpp"

#include <cmath>
#include <stdexcept>

#include "decotop/rng.hpp"

namespace decotop::statmech {

double metropolis_acceptance(double beta, double delta_e) {
    return std::min(1.0, std::exp(beta * delta_e));
}

std::pair<double, bool> binned_std_error(const std::vector<double> &series) {
    size_t n = series.size();
    if (n < 8) {
        return {0.0, false};
    }
    std::vector<double> data = series;
    std::vector<double> errs;
    while (data.size() >= 8) {
        size_t m = data.size();
        double mean = 0;
        for (double v : data) {
            mean += v;
        }
        mean /= m;
        double var = 0;
        for (double v : data) {
            var += (v - mean) * (v - mean);
        }
        var /= (m - 1);
        errs.push_back(std::sqrt(var / m));
        std::vector<double> next(m / 2);
        for (size_t i = 0; i < m / 2; i++) {
            next[i] = 0.5 * (data[2 * i] + data[2 * i + 1]);
        }
        data = std::move(next);
    }
    double err = 0;
    for (double e : errs) {
        err = std::max(err, e);
    }
    bool plateau = true;
    if (errs.size() >= 2) {
        double a = errs[errs.size() - 2], b = errs.back();
        if (a > 0 && b > 1.5 * a) {
            plateau = false;
        }
    } else {
        plateau = false;
    }
    return {err, plateau};
}

namespace {

struct Chain {
    double beta;
    std::vector<int8_t> spin;
    double energy;
};

double total_energy(const TermModel &m, const std::vector<int8_t> &sign,
                    const std::vector<int8_t> &spin) {
    double e = 0;
    for (int t = 0; t < m.n_terms; t++) {
        int prod = sign[t];
        for (int s : m.term_spins[t]) {
            prod *= spin[s];
        }
        e += prod;
    }
    return e;
}

Estimate estimate_from_series(const std::vector<double> &series) {
    Estimate est;
    est.method = "mc-disorder";
    est.n = (long)series.size();
    if (series.empty()) {
        return est;
    }
    double mean = 0;
    for (double v : series) {
        mean += v;
    }
    est.mean = mean / series.size();
    est.std_err = binned_std_error(series).first;
    return est;
}

}  // namespace

Estimate mc_free_energy_ti(const DisorderSample &sample, const std::vector<int> &flip_terms,
                           const McConfig &config, int grid_points) {
    if (grid_points < 2) {
        throw std::invalid_argument("mc_free_energy_ti: need at least two grid points");
    }
    if (sample.beta_inf) {
        throw std::invalid_argument("mc_free_energy_ti: beta = inf not supported");
    }
    DisorderSample twisted = sample;
    for (int t : flip_terms) {
        twisted.sign[t] = -twisted.sign[t];
    }
    // Trapezoid over beta' in [0, beta]; at beta' = 0 the integrand vanishes
    // identically.
    double h = sample.beta / (grid_points - 1);
    double acc = 0, var = 0;
    for (int i = 1; i < grid_points; i++) {
        double b = i * h;
        McConfig point = config;
        point.betas = {b};
        point.seed = config.seed + (uint64_t)i * 2;
        McResult plain = mc_run(with_beta(sample, b), point, {});
        point.seed = config.seed + (uint64_t)i * 2 + 1;
        McResult twist = mc_run(with_beta(twisted, b), point, {});
        double w = (i == grid_points - 1) ? 0.5 * h : h;
        acc += w * (plain.energy.mean - twist.energy.mean);
        var += w * w *
               (plain.energy.std_err * plain.energy.std_err +
                twist.energy.std_err * twist.energy.std_err);
    }
    Estimate est;
    est.mean = acc;
    est.std_err = std::sqrt(var);
    est.n = (long)(grid_points - 1);
    est.method = "mc-ti-approximate";
    return est;
}

McResult mc_run(const DisorderSample &sample, const McConfig &config,
                const std::vector<std::pair<int, int>> &correlation_pairs) {
    const TermModel &m = *sample.model;
    if (sample.beta_inf) {
        throw std::invalid_argument("mc_run: beta = inf not supported");
    }
    if (config.thermalization >= config.sweeps) {
        throw std::invalid_argument("mc_run: thermalization must be < sweeps");
    }
    std::vector<double> betas = config.betas;
    if (betas.empty()) {
        betas = {sample.beta};
    }
    for (size_t i = 1; i < betas.size(); i++) {
        if (betas[i] <= betas[i - 1]) {
            throw std::invalid_argument("mc_run: replica temperatures must be strictly ordered");
        }
    }
    int measure_chain = -1;
    for (size_t i = 0; i < betas.size(); i++) {
        if (std::abs(betas[i] - sample.beta) < 1e-12) {
            measure_chain = (int)i;
        }
    }
    if (measure_chain < 0) {
        throw std::invalid_argument("mc_run: replica ladder must contain sample.beta");
    }

    Xoshiro256pp rng(config.seed);
    std::vector<Chain> chains;
    for (double b : betas) {
        Chain c;
        c.beta = b;
        c.spin.resize(m.n_spins);
        for (int s = 0; s < m.n_spins; s++) {
            c.spin[s] = rng.next() & 1 ? 1 : -1;
        }
        c.energy = total_energy(m, sample.sign, c.spin);
        chains.push_back(std::move(c));
    }

    long accepted = 0, attempted = 0;
    long exch_accepted = 0, exch_attempted = 0;
    std::vector<double> e_series, m_series;
    std::vector<std::vector<double>> c_series(correlation_pairs.size());

    for (long sweep = 0; sweep < config.sweeps; sweep++) {
        for (auto &ch : chains) {
            bool measured = (&ch == &chains[measure_chain]);
            for (int attempt = 0; attempt < m.n_spins; attempt++) {
                int s = (int)rng.below(m.n_spins);
                double local = 0;
                for (int t : m.spin_terms[s]) {
                    int prod = sample.sign[t];
                    for (int u : m.term_spins[t]) {
                        prod *= ch.spin[u];
                    }
                    local += prod;
                }
                double delta = -2.0 * local;
                if (measured) {
                    attempted++;
                }
                if (rng.uniform() < metropolis_acceptance(ch.beta, delta)) {
                    ch.spin[s] = -ch.spin[s];
                    ch.energy += delta;
                    if (measured) {
                        accepted++;
                    }
                }
            }
        }
        if (chains.size() > 1) {
            // Replica exchange between adjacent chains, alternating parity.
            for (size_t i = sweep % 2; i + 1 < chains.size(); i += 2) {
                exch_attempted++;
                double d = (chains[i].beta - chains[i + 1].beta) *
                           (chains[i + 1].energy - chains[i].energy);
                if (rng.uniform() < std::min(1.0, std::exp(d))) {
                    std::swap(chains[i].spin, chains[i + 1].spin);
                    std::swap(chains[i].energy, chains[i + 1].energy);
                    exch_accepted++;
                }
            }
        }
        if (sweep >= config.thermalization && (sweep - config.thermalization) % config.stride == 0) {
            const Chain &mc = chains[measure_chain];
            e_series.push_back(mc.energy);
            double mag = 0;
            for (int8_t s : mc.spin) {
                mag += s;
            }
            m_series.push_back(std::abs(mag));
            for (size_t i = 0; i < correlation_pairs.size(); i++) {
                auto [a, b] = correlation_pairs[i];
                c_series[i].push_back((double)mc.spin[a] * mc.spin[b]);
            }
        }
    }

    McResult out;
    out.energy = estimate_from_series(e_series);
    out.abs_magnetization = estimate_from_series(m_series);
    for (auto &cs : c_series) {
        out.correlations.push_back(estimate_from_series(cs));
    }
    out.acceptance_rate = attempted ? (double)accepted / attempted : 0;
    out.exchange_rate = exch_attempted ? (double)exch_accepted / exch_attempted : 0;
    auto [err, plateau] = binned_std_error(e_series);
    (void)err;
    // A chain that never moves reports a flat binning plateau; flag it too.
    bool frozen = out.acceptance_rate < 1e-3 && chains.size() == 1;
    out.thermalized = plateau && !frozen;
    return out;
}

}  // namespace decotop::statmech
