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

#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "mimohw/core_model.hpp"

namespace mimohw {

/// Diagonal of the pilot-to-time-t correlation matrix:
/// entry i (0-based) is exp(-delta/2 * (t - (i + 1))). Requires t >= pilot_length.
Eigen::VectorXd delay_weights(int t, int pilot_length, double drift_variance);
Eigen::MatrixXd delay_matrix(int t, int pilot_length, double drift_variance);

/// Second-order statistics of a received pilot under phase drift.
struct PilotGrams {
    Eigen::MatrixXcd damped;     // x x^H with off-diagonals damped by exp(-delta/2 |i1 - i2|)
    Eigen::MatrixXcd distorted;  // damped + kappa^2 diag(|x_i|^2)
};

PilotGrams pilot_grams(const Eigen::VectorXcd& pilot, double drift_variance, double distortion_sq);

/// Covariance of the stacked pilot observation at one antenna of BS `bs`.
Eigen::MatrixXcd psi_matrix(const Scenario& scenario, const PilotBook& pilots,
                            const HardwareProfile& profile, double noise_power, int bs);

/// Received pilot signal at one BS, stacked as [y(1); y(2); ...; y(B)], each y(i)
/// holding one entry per antenna.
struct PilotObservation {
    Eigen::VectorXcd stacked;
};

/// Per-BS pilot covariances, their factorizations and the pilot grams, built once
/// for a fixed (scenario, hardware) pair. Read-only after construction.
class EstimatorCache {
public:
    EstimatorCache(Scenario scenario, const SystemConfig& config, const HardwareProfile& profile);

    const Scenario& scenario() const { return scenario_; }
    const HardwareProfile& profile() const { return profile_; }
    const PilotBook& pilot_book() const { return pilots_; }
    int pilot_length() const { return pilots_.length(); }
    double noise_power() const { return noise_power_; }

    const Eigen::MatrixXcd& psi(int bs) const { return psi_[bs]; }
    Eigen::VectorXcd psi_solve(int bs, const Eigen::VectorXcd& rhs) const { return llt_[bs].solve(rhs); }

    Eigen::VectorXd delay(int t) const { return delay_weights(t, pilot_length(), profile_.drift_variance); }

    /// Psi_bs^{-1} D(t) x_{cell,user}.
    Eigen::VectorXcd whitened_pilot(int bs, int cell, int user, int t) const;

    /// Coefficients c with estimate = sum_i c_i y(i).
    Eigen::VectorXcd estimator_weights(int bs, int cell, int user, int t) const;

    /// Damped gram of the unit-power sequence with pilot index `b`; a UE with power p
    /// has damped gram p times this.
    const Eigen::MatrixXcd& unit_damped_gram(int b) const { return unit_damped_[b]; }
    PilotGrams grams(int cell, int user) const;

private:
    Scenario scenario_;
    HardwareProfile profile_;
    double noise_power_;
    PilotBook pilots_;
    std::vector<Eigen::MatrixXcd> psi_;
    std::vector<Eigen::LLT<Eigen::MatrixXcd>> llt_;
    std::vector<Eigen::MatrixXcd> unit_damped_;
};

/// LMMSE estimate of the effective channel from UE (cell, user) to BS `bs` at
/// channel use t >= B; one N-vector, computed without forming the Kronecker product.
Eigen::VectorXcd lmmse_estimate(const PilotObservation& obs, int antennas, const EstimatorCache& cache,
                                int bs, int cell, int user, int t);

}  // namespace mimohw
