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

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mimohw {

using Complex = std::complex<double>;

/// Whether all antennas of a base station share one local oscillator or each
/// antenna has its own (identical, independent) oscillator.
enum class Oscillator { common, separate };

std::string to_string(Oscillator osc);
Oscillator parse_oscillator(const std::string& name);

/// Network dimensions. Channel uses are counted from 1; pilots occupy 1..pilot_length.
struct SystemConfig {
    int num_cells = 1;
    int users_per_cell = 1;
    int antennas = 1;
    int coherence_length = 2;
    int pilot_length = 1;
    double noise_power = 1.0;  // mW/Hz, linear
};

/// Receiver imperfections of one base station.
struct HardwareProfile {
    double drift_variance = 0.0;       // phase innovation variance per channel use [rad^2]
    double distortion_sq = 0.0;        // kappa^2
    double noise_amplification = 1.0;  // xi
    Oscillator oscillator = Oscillator::separate;

    static HardwareProfile ideal(Oscillator osc = Oscillator::separate) {
        return {0.0, 0.0, 1.0, osc};
    }
};

/// Exponents and initial values for growing the imperfections with the array size.
struct ScalingExponents {
    double distortion_exp = 0.0;  // kappa^2 grows as N^distortion_exp
    double noise_exp = 0.0;       // xi grows as N^noise_exp
    double drift_exp = 0.0;       // delta grows as 1 + ln(N^drift_exp)
    double distortion0_sq = 0.0;
    double noise_amplification0 = 1.0;
    double drift_variance0 = 0.0;
};

/// Large-scale description of the network: attenuations, powers and pilot reuse.
class Scenario {
public:
    Scenario() = default;
    Scenario(int num_cells, int users_per_cell);

    int num_cells() const { return cells_; }
    int users_per_cell() const { return users_; }
    int num_users() const { return cells_ * users_; }

    /// Attenuation from UE `user` in cell `cell` to the BS of cell `bs`.
    double attenuation(int bs, int cell, int user) const { return lambda_[index(bs, cell, user)]; }
    double& attenuation(int bs, int cell, int user) { return lambda_[index(bs, cell, user)]; }

    double power(int cell, int user) const { return power_[cell * users_ + user]; }
    double& power(int cell, int user) { return power_[cell * users_ + user]; }

    /// Zero-based index into the pilot book.
    int pilot(int cell, int user) const { return pilot_[cell * users_ + user]; }
    int& pilot(int cell, int user) { return pilot_[cell * users_ + user]; }

    std::span<const double> attenuations() const { return lambda_; }
    std::span<const double> powers() const { return power_; }
    std::span<const int> pilots() const { return pilot_; }

    bool operator==(const Scenario&) const = default;

private:
    std::size_t index(int bs, int cell, int user) const {
        return (static_cast<std::size_t>(bs) * cells_ + cell) * users_ + user;
    }

    int cells_ = 0;
    int users_ = 0;
    std::vector<double> lambda_;
    std::vector<double> power_;
    std::vector<int> pilot_;
};

/// Mutually orthogonal, unit-modulus pilot sequences taken from the columns of
/// a DFT matrix.
class PilotBook {
public:
    explicit PilotBook(int length);

    int length() const { return static_cast<int>(sequences_.cols()); }
    Eigen::VectorXcd sequence(int index) const { return sequences_.col(index); }

    /// Transmitted pilot of UE (cell, user): sqrt(p) times its assigned sequence.
    Eigen::VectorXcd pilot(const Scenario& scenario, int cell, int user) const;

private:
    Eigen::MatrixXcd sequences_;
};

/// Every violated invariant as a human-readable message; empty when valid.
std::vector<std::string> validate(const SystemConfig& config, const Scenario& scenario);
std::vector<std::string> validate(const HardwareProfile& profile);
std::vector<std::string> validate(const ScalingExponents& exponents);

double dbm_per_hz_to_linear(double dbm_per_hz);
double linear_to_dbm_per_hz(double mw_per_hz);

}  // namespace mimohw
