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

#ifndef DECOTOP_ANALYSIS_HPP
#define DECOTOP_ANALYSIS_HPP

#include <map>
#include <vector>

namespace decotop::analysis {

// Reference error-correction thresholds from the literature; constants, not
// targets to recompute.
struct ThresholdConstants {
    static constexpr double p_2d_rbim = 0.109;
    static constexpr double p_3d_rpgm = 0.029;
    static constexpr double p_3d_rbim = 0.233;
    static constexpr double p_3d_plaquette = 0.152;
};

struct NishimoriBetaResult {
    double beta = 0;
    bool infinite = false;
};
// tanh(beta) = 1 - 2p by bisection to 1e-12; p = 0 flags infinity.
NishimoriBetaResult nishimori_beta(double p);
double nishimori_p(double beta);

// Alternative-decomposition threshold: solves tanh^2(beta/2) = p_ref/(1-p_ref)
// jointly with tanh(beta) = 1 - 2p.
double non_optimal_threshold(double p_ref);

struct ClosedFormPc2 {
    double p_c;
    double k_c;  // log(1 + sqrt 2) / 2
};
// Closed form p_c = (1 - sqrt(sqrt 2 - 1)) / 2 for the squared-state
// transition, with the matching critical coupling.
ClosedFormPc2 pc2_closed_form();

struct CurvePoint {
    double p;
    double value;
    double std_err;
};

struct CrossingResult {
    bool found = false;
    double p_star = 0;
    double uncertainty = 0;
    std::vector<std::pair<int, int>> size_pairs;
};

// Pairwise linearly interpolated crossings of value-vs-p curves for several
// sizes; p* is their error-weighted mean. No intersection in range is a
// result, not an error.
CrossingResult crossing_find(const std::map<int, std::vector<CurvePoint>> &curves);

struct TeeFit {
    double slope = 0;
    double intercept = 0;
    double max_residual = 0;
    double tee = 0;  // -intercept
};

// Least-squares line through (boundary size, S2) pairs; needs >= 3 regions.
TeeFit tee_fit(const std::vector<std::pair<double, double>> &boundary_vs_s2);

}  // namespace decotop::analysis

#endif
