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

#include "decotop/analysis.hpp"

#include <cmath>
#include <stdexcept>

#include "decotop/statmech.hpp"

namespace decotop::analysis {

NishimoriBetaResult nishimori_beta(double p) {
    statmech::NishimoriBeta nb = statmech::nishimori_beta_of(p);
    return {nb.beta, nb.infinite};
}

double nishimori_p(double beta) {
    return statmech::nishimori_p_of(beta);
}

double non_optimal_threshold(double p_ref) {
    if (p_ref <= 0 || p_ref >= 0.5) {
        throw std::invalid_argument("non_optimal_threshold: need 0 < p_ref < 0.5");
    }
    // tanh(beta/2) = sqrt(p_ref / (1 - p_ref)), then p from tanh(beta) = 1-2p.
    double target = std::sqrt(p_ref / (1 - p_ref));
    double lo = 0, hi = 1;
    while (std::tanh(hi / 2) < target) {
        hi *= 2;
    }
    for (int i = 0; i < 200 && hi - lo > 1e-14; i++) {
        double mid = 0.5 * (lo + hi);
        (std::tanh(mid / 2) < target ? lo : hi) = mid;
    }
    double beta = 0.5 * (lo + hi);
    return 0.5 * (1 - std::tanh(beta));
}

ClosedFormPc2 pc2_closed_form() {
    ClosedFormPc2 out{};
    out.p_c = (1 - std::sqrt(std::sqrt(2.0) - 1)) / 2;
    out.k_c = std::log(1 + std::sqrt(2.0)) / 2;
    return out;
}

CrossingResult crossing_find(const std::map<int, std::vector<CurvePoint>> &curves) {
    if (curves.size() < 2) {
        throw std::invalid_argument("crossing_find: need at least two sizes");
    }
    for (const auto &[size, pts] : curves) {
        if (pts.size() < 2) {
            throw std::invalid_argument("crossing_find: need at least two points per curve");
        }
    }
    std::vector<double> ps;
    std::vector<double> errs;
    CrossingResult out;
    std::vector<int> sizes;
    for (const auto &[size, pts] : curves) {
        sizes.push_back(size);
    }
    for (size_t i = 0; i < sizes.size(); i++) {
        for (size_t j = i + 1; j < sizes.size(); j++) {
            const auto &a = curves.at(sizes[i]);
            const auto &b = curves.at(sizes[j]);
            // Difference of the two curves on the common grid.
            for (size_t k = 0; k + 1 < a.size() && k + 1 < b.size(); k++) {
                if (a[k].p != b[k].p || a[k + 1].p != b[k + 1].p) {
                    continue;
                }
                double d0 = a[k].value - b[k].value;
                double d1 = a[k + 1].value - b[k + 1].value;
                if (d0 == 0 && d1 == 0) {
                    continue;
                }
                if ((d0 <= 0 && d1 > 0) || (d0 >= 0 && d1 < 0)) {
                    double t = d0 / (d0 - d1);
                    double pc = a[k].p + t * (a[k + 1].p - a[k].p);
                    ps.push_back(pc);
                    // Propagate point errors through the interpolation slope.
                    double slope = std::abs((d1 - d0) / (a[k + 1].p - a[k].p));
                    double sigma_d = std::sqrt(a[k].std_err * a[k].std_err +
                                               b[k].std_err * b[k].std_err +
                                               a[k + 1].std_err * a[k + 1].std_err +
                                               b[k + 1].std_err * b[k + 1].std_err) /
                                     2;
                    errs.push_back(slope > 0 ? sigma_d / slope : 0.0);
                    out.size_pairs.emplace_back(sizes[i], sizes[j]);
                }
            }
        }
    }
    if (ps.empty()) {
        out.found = false;
        return out;
    }
    out.found = true;
    double mean = 0;
    for (double v : ps) {
        mean += v;
    }
    mean /= ps.size();
    double spread = 0;
    for (double v : ps) {
        spread += (v - mean) * (v - mean);
    }
    spread = ps.size() > 1 ? std::sqrt(spread / (ps.size() - 1) / ps.size()) : 0.0;
    double prop = 0;
    for (double e : errs) {
        prop += e * e;
    }
    prop = std::sqrt(prop) / ps.size();
    out.p_star = mean;
    out.uncertainty = std::max(1e-12, std::hypot(spread, prop));
    return out;
}

TeeFit tee_fit(const std::vector<std::pair<double, double>> &boundary_vs_s2) {
    if (boundary_vs_s2.size() < 3) {
        throw std::invalid_argument("tee_fit: need at least three region sizes");
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double n = (double)boundary_vs_s2.size();
    for (auto [x, y] : boundary_vs_s2) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0) {
        throw std::invalid_argument("tee_fit: degenerate boundary sizes");
    }
    TeeFit out;
    out.slope = (n * sxy - sx * sy) / denom;
    out.intercept = (sy - out.slope * sx) / n;
    for (auto [x, y] : boundary_vs_s2) {
        out.max_residual = std::max(out.max_residual,
                                    std::abs(y - (out.slope * x + out.intercept)));
    }
    out.tee = -out.intercept;
    return out;
}

}  // namespace decotop::analysis
