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

#include "mimohw/core_model.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace mimohw {

std::string to_string(Oscillator osc) {
    return osc == Oscillator::common ? "clo" : "slo";
}

Oscillator parse_oscillator(const std::string& name) {
    if (name == "clo" || name == "common") return Oscillator::common;
    if (name == "slo" || name == "separate") return Oscillator::separate;
    throw std::invalid_argument("unknown oscillator mode '" + name + "'");
}

Scenario::Scenario(int num_cells, int users_per_cell)
    : cells_(num_cells),
      users_(users_per_cell),
      lambda_(static_cast<std::size_t>(num_cells) * num_cells * users_per_cell, 0.0),
      power_(static_cast<std::size_t>(num_cells) * users_per_cell, 0.0),
      pilot_(static_cast<std::size_t>(num_cells) * users_per_cell, 0) {
    if (num_cells < 1 || users_per_cell < 1) {
        throw std::invalid_argument("scenario needs at least one cell and one user per cell");
    }
}

PilotBook::PilotBook(int length) : sequences_(length, length) {
    if (length < 1) throw std::invalid_argument("pilot length must be positive");
    for (int r = 0; r < length; ++r) {
        for (int c = 0; c < length; ++c) {
            // reduce r*c mod B first so the phase stays small and exact
            const int k = (r * c) % length;
            sequences_(r, c) = std::polar(1.0, -2.0 * std::numbers::pi * k / length);
        }
    }
}

Eigen::VectorXcd PilotBook::pilot(const Scenario& scenario, int cell, int user) const {
    return std::sqrt(scenario.power(cell, user)) * sequences_.col(scenario.pilot(cell, user));
}

std::vector<std::string> validate(const SystemConfig& config, const Scenario& scenario) {
    std::vector<std::string> errors;
    auto fail = [&](std::string msg) { errors.push_back(std::move(msg)); };

    if (config.num_cells < 1) fail("cell count must be >= 1");
    if (config.users_per_cell < 1) fail("users per cell must be >= 1");
    if (config.antennas < 1) fail("antenna count must be >= 1");
    if (config.pilot_length < 1) fail("pilot length must be >= 1");
    if (config.pilot_length >= config.coherence_length) fail("B < T violated");
    if (config.users_per_cell > config.pilot_length) fail("K <= B violated");
    if (!(config.noise_power > 0.0)) fail("noise power must be > 0");

    if (scenario.num_cells() != config.num_cells || scenario.users_per_cell() != config.users_per_cell) {
        fail("dimension mismatch: scenario is " + std::to_string(scenario.num_cells()) + "x" +
             std::to_string(scenario.users_per_cell()) + ", config is " +
             std::to_string(config.num_cells) + "x" + std::to_string(config.users_per_cell));
        return errors;
    }

    const int cells = scenario.num_cells();
    const int users = scenario.users_per_cell();
    bool bad_lambda = false;
    for (double v : scenario.attenuations()) bad_lambda |= !(v > 0.0 && std::isfinite(v));
    if (bad_lambda) fail("every attenuation must be finite and > 0");

    bool bad_power = false;
    for (double v : scenario.powers()) bad_power |= !(v > 0.0 && std::isfinite(v));
    if (bad_power) fail("every transmit power must be finite and > 0");

    for (int l = 0; l < cells; ++l) {
        std::set<int> seen;
        for (int k = 0; k < users; ++k) {
            const int b = scenario.pilot(l, k);
            if (b < 0 || b >= config.pilot_length) {
                fail("pilot index " + std::to_string(b) + " of UE (" + std::to_string(l) + "," +
                     std::to_string(k) + ") outside [0, B)");
            } else if (!seen.insert(b).second) {
                fail("duplicate in-cell pilot " + std::to_string(b) + " in cell " + std::to_string(l));
            }
        }
    }
    return errors;
}

std::vector<std::string> validate(const HardwareProfile& profile) {
    std::vector<std::string> errors;
    if (!(profile.drift_variance >= 0.0)) errors.emplace_back("phase drift variance must be >= 0");
    if (!(profile.distortion_sq >= 0.0)) errors.emplace_back("kappa^2 must be >= 0");
    if (!(profile.noise_amplification >= 1.0)) errors.emplace_back("noise amplification must be >= 1");
    return errors;
}

std::vector<std::string> validate(const ScalingExponents& e) {
    std::vector<std::string> errors;
    if (!(e.distortion_exp >= 0.0 && e.noise_exp >= 0.0 && e.drift_exp >= 0.0)) {
        errors.emplace_back("scaling exponents must be >= 0");
    }
    if (!(e.distortion0_sq >= 0.0 && e.drift_variance0 >= 0.0)) {
        errors.emplace_back("initial kappa^2 and delta must be >= 0");
    }
    if (!(e.noise_amplification0 >= 1.0)) errors.emplace_back("initial noise amplification must be >= 1");
    return errors;
}

double dbm_per_hz_to_linear(double dbm_per_hz) { return std::pow(10.0, dbm_per_hz / 10.0); }

double linear_to_dbm_per_hz(double mw_per_hz) { return 10.0 * std::log10(mw_per_hz); }

}  // namespace mimohw
