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

#include "mimohw/estimator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace mimohw {

Eigen::VectorXd delay_weights(int t, int pilot_length, double drift_variance) {
    if (t < pilot_length) {
        throw std::out_of_range("channel use " + std::to_string(t) + " precedes the end of the pilot");
    }
    Eigen::VectorXd d(pilot_length);
    for (int i = 0; i < pilot_length; ++i) d(i) = std::exp(-0.5 * drift_variance * (t - (i + 1)));
    return d;
}

Eigen::MatrixXd delay_matrix(int t, int pilot_length, double drift_variance) {
    return delay_weights(t, pilot_length, drift_variance).asDiagonal();
}

PilotGrams pilot_grams(const Eigen::VectorXcd& pilot, double drift_variance, double distortion_sq) {
    const Eigen::Index b = pilot.size();
    PilotGrams g{Eigen::MatrixXcd(b, b), Eigen::MatrixXcd(b, b)};
    for (Eigen::Index r = 0; r < b; ++r) {
        for (Eigen::Index c = 0; c < b; ++c) {
            if (r == c) {
                g.damped(r, c) = std::norm(pilot(r));
            } else {
                const double damp = std::exp(-0.5 * drift_variance * static_cast<double>(std::abs(r - c)));
                g.damped(r, c) = pilot(r) * std::conj(pilot(c)) * damp;
            }
        }
    }
    g.distorted = g.damped;
    for (Eigen::Index i = 0; i < b; ++i) g.distorted(i, i) += distortion_sq * std::norm(pilot(i));
    return g;
}

Eigen::MatrixXcd psi_matrix(const Scenario& scenario, const PilotBook& pilots, const HardwareProfile& profile,
                            double noise_power, int bs) {
    const int b = pilots.length();
    Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(b, b);
    for (int l = 0; l < scenario.num_cells(); ++l) {
        for (int m = 0; m < scenario.users_per_cell(); ++m) {
            const auto g = pilot_grams(pilots.pilot(scenario, l, m), profile.drift_variance, profile.distortion_sq);
            psi += scenario.attenuation(bs, l, m) * g.distorted;
        }
    }
    psi.diagonal().array() += noise_power * profile.noise_amplification;
    return psi;
}

EstimatorCache::EstimatorCache(Scenario scenario, const SystemConfig& config, const HardwareProfile& profile)
    : scenario_(std::move(scenario)),
      profile_(profile),
      noise_power_(config.noise_power),
      pilots_(config.pilot_length) {
    auto errors = validate(config, scenario_);
    auto hw = validate(profile_);
    errors.insert(errors.end(), hw.begin(), hw.end());
    if (!errors.empty()) throw std::invalid_argument(errors.front());

    const int cells = scenario_.num_cells();
    psi_.reserve(cells);
    llt_.reserve(cells);
    const double floor = noise_power_ * profile_.noise_amplification;
    for (int j = 0; j < cells; ++j) {
        psi_.push_back(psi_matrix(scenario_, pilots_, profile_, noise_power_, j));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(psi_.back(), Eigen::EigenvaluesOnly);
        if (!(eig.eigenvalues().minCoeff() > 0.99 * floor)) {
            throw std::runtime_error("pilot covariance of BS " + std::to_string(j) + " is not positive definite");
        }
        llt_.emplace_back(psi_.back());
    }
    for (int b = 0; b < pilots_.length(); ++b) {
        unit_damped_.push_back(pilot_grams(pilots_.sequence(b), profile_.drift_variance, 0.0).damped);
    }
}

Eigen::VectorXcd EstimatorCache::whitened_pilot(int bs, int cell, int user, int t) const {
    const Eigen::VectorXcd shifted = delay(t).cast<Complex>().cwiseProduct(pilots_.pilot(scenario_, cell, user));
    return llt_[bs].solve(shifted);
}

Eigen::VectorXcd EstimatorCache::estimator_weights(int bs, int cell, int user, int t) const {
    return scenario_.attenuation(bs, cell, user) * whitened_pilot(bs, cell, user, t).conjugate();
}

PilotGrams EstimatorCache::grams(int cell, int user) const {
    return pilot_grams(pilots_.pilot(scenario_, cell, user), profile_.drift_variance, profile_.distortion_sq);
}

Eigen::VectorXcd lmmse_estimate(const PilotObservation& obs, int antennas, const EstimatorCache& cache, int bs,
                                int cell, int user, int t) {
    const int b = cache.pilot_length();
    if (obs.stacked.size() != static_cast<Eigen::Index>(antennas) * b) {
        throw std::invalid_argument("pilot observation has length " + std::to_string(obs.stacked.size()) +
                                    ", expected N*B = " + std::to_string(antennas * b));
    }
    Eigen::Map<const Eigen::MatrixXcd> y(obs.stacked.data(), antennas, b);
    return y * cache.estimator_weights(bs, cell, user, t);
}

}  // namespace mimohw
