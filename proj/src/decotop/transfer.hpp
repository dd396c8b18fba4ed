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

#ifndef DECOTOP_TRANSFER_HPP
#define DECOTOP_TRANSFER_HPP

#include "decotop/statmech.hpp"

namespace decotop::statmech {

// Exact log Z of a 2d vertex-spin sample by column transfer operators with
// per-column log rescaling. Width (ly) capped at 16; time and memory scale
// as 4^width, so widths beyond ~12 are impractical.
LogPartition transfer_logZ_2d(const DisorderSample &sample);

// log Z and the log Z with one non-contractible dual twist (all wrap-column
// couplings flipped, i.e. a dual loop winding along y), sharing one matrix
// build. The twist set is gauge-equivalent to dual_loop_2d(lat, 1).
struct TwistedPair {
    double log_z;
    double log_z_twisted;
};
TwistedPair transfer_logZ_2d_twisted_pair(const DisorderSample &sample);

}  // namespace decotop::statmech

#endif
