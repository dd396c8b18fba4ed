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

#ifndef DECOTOP_OBSERVABLES_HPP
#define DECOTOP_OBSERVABLES_HPP

#include <cstdint>
#include <utility>

#include "decotop/lattice.hpp"
#include "decotop/mc.hpp"
#include "decotop/statmech.hpp"
#include "decotop/transfer.hpp"

namespace decotop::obs {

using statmech::Estimate;

// Disorder-averaged loop/membrane order parameter <exp(-dF/2)>. The exact
// paths sum one representative per gauge sector with sector weights; sampled
// paths draw Nishimori disorder and evaluate dF per sample.
struct OrderParameterResult {
    Estimate estimate;
    double mean_df = 0;      // disorder-averaged domain-wall free energy
    double jensen_floor = 0;  // exp(-mean_df / 2); estimate.mean must not drop below
};

// 2d dual-loop order parameter.
OrderParameterResult thooft_2d_exact(double p, int size);
OrderParameterResult thooft_2d_sampled(double p, int size, int n_samples, uint64_t seed);

// 3d order parameters: loop twists for the two gauge-like kinds, a dual
// membrane twist for the vertex-spin kind.
OrderParameterResult wilson_3d_exact(double p, int size, statmech::ModelKind kind);
OrderParameterResult wilson_3d_sampled(double p, int size, statmech::ModelKind kind, int n_samples,
                                       uint64_t seed);

// Both sides of the dual-ensemble correlator identity: the ensemble-averaged
// squared anyon tunneling amplitude and the disorder-averaged correlator of
// the dual-coupling random-bond model, plus their difference. Sector sums on
// the torus are carried on both sides so the identity is exact at finite L.
struct AnyonAvgResult {
    double ensemble_lhs = 0;
    Estimate rbim_rhs;
    double diff = 0;
};

// Exact both sides for size <= 3 (full enumeration of the z labels).
AnyonAvgResult anyon_avg_2d_exact(double p, int size, std::pair<int, int> endpoint_plaquettes);
// Exact lhs via sector representatives; rhs sampled, for sizes where the
// honest full sum is out of reach.
AnyonAvgResult anyon_avg_2d_mixed(double p, int size, std::pair<int, int> endpoint_plaquettes,
                                  int n_samples, uint64_t seed);
AnyonAvgResult anyon_avg_3d(double p, int size, std::pair<int, int> endpoint_vertices,
                            int n_samples, uint64_t seed);

// Default maximal-separation endpoints (L/2 in each direction).
std::pair<int, int> separated_plaquettes(const lattice::Torus2D &lat);
std::pair<int, int> separated_vertices(const lattice::Torus3D &lat);

// tr(rho_A^2) of the bond-swap double sum, and S2 = -log of it. p = 0 runs
// the frozen-sector pair count (exact); finite p runs the double sum with a
// joint-gauge reduction on the first copy (size <= 3).
struct Renyi2Result {
    double tr_rho_a2 = 1;
    double s2 = 0;
};
Renyi2Result renyi2_swap(double p, const lattice::Torus2D &lat, const lattice::Bipartition &region);

// Replica-moment negativity data. For the squared 2d state the moments come
// from weighted loop-group sums (character/coset decomposition, all torus
// sectors included); for the 3d state from the flavored replica model with
// the boundary constraint. negativity carries (log ratio) / (2 - 2n) and is
// 0 at two_n = 2 where the ratio is identically 1.
struct NegativityMomentResult {
    double log_moment = 0;     // log tr[(rho^2)^{2n}] style moment, normalized
    double log_moment_pt = 0;  // partial-transpose counterpart
    double log_ratio = 0;
    double negativity = 0;
};
NegativityMomentResult negativity_moment_2d_rho2(double p, const lattice::Torus2D &lat,
                                                 const lattice::Bipartition &region, int two_n);
NegativityMomentResult negativity_moment_3d(double p, const lattice::Torus3D &lat,
                                            const lattice::Bipartition &region, int two_n);

// Sector-overlap pseudo free energy F_alpha and its alpha -> 1 limit data.
struct OverlapResult {
    double f_alpha = 0;
    double log_sum_z = 0;    // log sum_x Z_x
    double mean_log_z = 0;   // sum_x P(x) log Z_x with P = Z / sum Z
};
OverlapResult overlap_f_alpha(double p, int size, double alpha);

}  // namespace decotop::obs

#endif
