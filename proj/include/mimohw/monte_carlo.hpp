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

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "mimohw/closed_form.hpp"
#include "mimohw/core_model.hpp"
#include "mimohw/estimator.hpp"

namespace mimohw {

/// One coherence block drawn from the impaired receive model. Per-BS matrices
/// have one row per antenna and one column per channel use (column t-1 is use t).
struct BlockRealization {
    int num_cells = 0;
    int users_per_cell = 0;
    int antennas = 0;
    int coherence_length = 0;
    int pilot_length = 0;

    std::vector<Eigen::MatrixXcd> channels;    // per BS: antennas x (cells * users)
    std::vector<Eigen::MatrixXd> phases;       // per BS: antennas x T
    std::vector<Eigen::MatrixXcd> distortion;  // per BS: antennas x T
    std::vector<Eigen::MatrixXcd> noise;       // per BS: antennas x T
    Eigen::MatrixXcd symbols;                  // (cells * users) x T; pilots in the first B columns
    std::vector<Eigen::MatrixXcd> received;    // per BS: antennas x T

    PilotObservation pilot_observation(int bs) const;
};

/// Draws one block. Channels are CN(0, lambda I); phases follow a Wiener process
/// started at `initial_phase` (shared by all antennas with a common oscillator);
/// distortion at each antenna has variance kappa^2 sum p |h|^2 for the drawn channel;
/// data symbols are CN(0, p).
BlockRealization simulate_block(const Scenario& scenario, const SystemConfig& config,
                                const HardwareProfile& profile, std::uint64_t seed,
                                double initial_phase = 0.0);

struct MonteCarloOptions {
    std::int64_t realizations = 1000;
    std::uint64_t seed = 1;
    int workers = 1;
    double initial_phase = 0.0;
    /// Per-block raw values (single-target estimate_moments only).
    std::ostream* dump = nullptr;
};

struct MomentTarget {
    int bs = 0;
    int user = 0;
    int t = 0;
};

struct EmpiricalMoments {
    MomentSet mean;
    MomentSet std_error;
    std::int64_t realizations = 0;
};

/// Blocks per reduction chunk. Results are combined chunk by chunk in index order,
/// so they do not depend on the worker count.
inline constexpr std::int64_t kChunkBlocks = 64;

/// Sample means and standard errors of the MRC moments, with the MRC filter built
/// from the LMMSE estimate of each simulated block.
EmpiricalMoments estimate_moments(const Scenario& scenario, const SystemConfig& config,
                                  const HardwareProfile& profile, int bs, int user, int t,
                                  const MonteCarloOptions& options);

/// Several targets evaluated on the same blocks.
std::vector<EmpiricalMoments> estimate_moments(const Scenario& scenario, const SystemConfig& config,
                                               const HardwareProfile& profile,
                                               std::span<const MomentTarget> targets,
                                               const MonteCarloOptions& options);

/// SINR assembled from empirical moments for every UE and data channel use, then
/// averaged into rates.
RateReport empirical_rate(const Scenario& scenario, const SystemConfig& config, const HardwareProfile& profile,
                          const MonteCarloOptions& options);

}  // namespace mimohw
