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

#ifndef DECOTOP_MC_HPP
#define DECOTOP_MC_HPP

#include <string>
#include <utility>
#include <vector>

#include "decotop/statmech.hpp"

namespace decotop::statmech {

struct Estimate {
    double mean = 0;
    double std_err = 0;
    long n = 0;
    std::string method;  // exact-enumeration | transfer | mc-disorder
};

struct McConfig {
    long sweeps = 2000;
    long thermalization = 500;
    int stride = 2;                 // sweeps between measurements
    std::vector<double> betas;      // replica ladder; empty = {sample.beta}
    uint64_t seed = 1;
};

struct McResult {
    Estimate energy;
    Estimate abs_magnetization;
    std::vector<Estimate> correlations;
    double acceptance_rate = 0;
    double exchange_rate = 0;
    bool thermalized = true;  // binned error reached a plateau
};

// Single-spin Metropolis sweeps with optional replica exchange across the
// beta ladder (measurements are taken on the chain matching sample.beta).
// No cluster updates: frustrated disorder breaks their validity.
McResult mc_run(const DisorderSample &sample, const McConfig &config,
                const std::vector<std::pair<int, int>> &correlation_pairs = {});

// Metropolis acceptance probability for an energy change delta_e of
// E = sum_t sign_t prod_t (Boltzmann weight exp(beta E)).
double metropolis_acceptance(double beta, double delta_e);

// Binning analysis: standard error accounting for autocorrelation, plus a
// plateau flag (false = not thermalized / series too short).
std::pair<double, bool> binned_std_error(const std::vector<double> &series);

// Approximate domain-wall free energy by thermodynamic integration:
// dF(beta) = integral over beta' of <E> - <E>_twisted, each mean estimated by
// Metropolis runs on a beta grid. Method tag "mc-ti-approximate"; exact
// backends stay authoritative wherever they exist.
Estimate mc_free_energy_ti(const DisorderSample &sample, const std::vector<int> &flip_terms,
                           const McConfig &config, int grid_points = 9);

}  // namespace decotop::statmech

#endif
