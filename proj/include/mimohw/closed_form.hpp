// SPDX-License-Identifier: Apache-2.0
//
// mimohw: uplink rates of massive MIMO arrays built from imperfect hardware
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <span>
#include <vector>

#include "mimohw/core_model.hpp"
#include "mimohw/estimator.hpp"

namespace mimohw {

/// The four second-order statistics of an MRC receiver that enter the SINR.
/// `interference` is indexed [cell * users_per_cell + user].
struct MomentSet {
    double filter_norm = 0.0;   // E{||v||^2}
    double signal = 0.0;        // E{v^H h_jjk(t)}
    std::vector<double> interference;  // E{|v^H h_jlm(t)|^2}
    double distortion = 0.0;    // E{|v^H upsilon(t)|^2}
};

/// Exact MRC moments for UE (bs, user) at channel use t, using the oscillator mode
/// stored in the cache's hardware profile. Requires t >= B + 1.
MomentSet mrc_moments(const EstimatorCache& cache, int antennas, int bs, int user, int t);

/// Interference cross-term that multiplies N(N-1) in the moment of interferer
/// (cell, user'), before the attenuation factors. Exposed for the time-behaviour checks.
double pilot_cross_term(const EstimatorCache& cache, int bs, int user, int cell, int other_user, int t);

/// SINR of UE (bs, user) given its moments.
double sinr(const MomentSet& moments, const Scenario& scenario, const HardwareProfile& profile,
            double noise_power, int bs, int user);

/// (1/T) sum log2(1 + SINR(t)) over the T - B data channel uses.
double rate(std::span<const double> sinr_trajectory, int coherence_length, int pilot_length);

struct RateReport {
    int num_cells = 0;
    int users_per_cell = 0;
    /// SINR for t = B+1..T, indexed [(cell * users + user) * (T - B) + (t - B - 1)].
    std::vector<double> sinr;
    std::vector<double> user_rate;  // bit/channel use, [cell * users + user]
    std::vector<double> cell_rate;
    double sum_rate = 0.0;

    double sinr_at(int cell, int user, int t, int pilot_length) const {
        const int span = static_cast<int>(sinr.size()) / (num_cells * users_per_cell);
        return sinr[static_cast<std::size_t>(cell * users_per_cell + user) * span + (t - pilot_length - 1)];
    }
};

RateReport assemble_rate_report(int num_cells, int users_per_cell, int coherence_length, int pilot_length,
                                std::vector<double> sinr);

/// Closed-form SINRs and rates for every UE of the network.
RateReport closed_form_rates(const EstimatorCache& cache, const SystemConfig& config);

/// Imperfections at array size N when they grow with the given exponents.
HardwareProfile apply_scaling(const ScalingExponents& exponents, double antennas, Oscillator oscillator);

/// Whether the growth exponents keep the SINR at channel use t bounded away from zero.
bool scaling_law_satisfied(const ScalingExponents& exponents, int t, int pilot_length, Oscillator oscillator);

/// Block-level verdict, evaluated at the last channel use of the block.
inline bool scaling_law_satisfied(const ScalingExponents& exponents, const SystemConfig& config,
                                  Oscillator oscillator) {
    return scaling_law_satisfied(exponents, config.coherence_length, config.pilot_length, oscillator);
}

struct ProbeResult {
    std::vector<int> antennas;
    std::vector<double> sinr;   // closed-form SINR at t = T for each entry of `antennas`
    double last_ratio = 0.0;    // sinr[n-1] / sinr[n-2]
    bool converged = false;     // |last_ratio - 1| <= 0.05
};

/// Closed-form SINR of UE (bs, user) at the end of the block for growing N with
/// imperfections scaled by `exponents`.
ProbeResult asymptotic_probe(const Scenario& scenario, const SystemConfig& config,
                             const ScalingExponents& exponents, Oscillator oscillator,
                             std::span<const int> antenna_counts, int bs = 0, int user = 0);

}  // namespace mimohw
