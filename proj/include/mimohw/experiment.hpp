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
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mimohw/circuits.hpp"
#include "mimohw/closed_form.hpp"
#include "mimohw/core_model.hpp"
#include "mimohw/scenario.hpp"

namespace mimohw {

enum class HardwareMode { ideal, fixed, scaled };

std::string to_string(HardwareMode mode);
HardwareMode parse_hardware_mode(const std::string& name);

/// Raised for malformed or inconsistent configuration; `key()` names the offending entry.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& message)
        : std::runtime_error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

/// Small oracle instance used by `verify`.
struct VerifySetup {
    int num_cells = 2;
    int users_per_cell = 2;
    int antennas = 20;
    int pilot_length = 2;
    int coherence_length = 12;
    double noise_power = 0.5;
    double drift_variance = 0.1;
    double distortion_sq = 0.05;
    double noise_amplification = 1.5;
    std::int64_t realizations = 20000;
};

struct ExperimentConfig {
    Geometry geometry;
    ShadowFading shadow;
    int pilot_length = 8;
    int coherence_length = 500;
    double power_dbm = -47.0;
    double noise_dbm = -174.0;

    /// Initial imperfections (used as-is in fixed mode) and their growth exponents:
    /// 8-bit ADCs, 2 dB noise figure, delta0 = 1.6e-4.
    ScalingExponents exponents{0.5, 0.5, 0.0, 0x1p-16, noise_figure_to_xi(2.0), 1.6e-4};

    std::vector<int> antennas{10, 20, 50, 100, 200, 400};
    std::vector<Oscillator> oscillators{Oscillator::common, Oscillator::separate};
    std::vector<HardwareMode> hardware{HardwareMode::ideal, HardwareMode::fixed, HardwareMode::scaled};

    std::int64_t mc_realizations = 0;  // 0 disables the oracle column
    int mc_max_antennas = 64;
    std::uint64_t seed = 1;
    int workers = 1;
    std::string out_dir = "out";

    CircuitSpecs circuits;
    VerifySetup verify;

    /// Non-fatal findings of load_config, e.g. unknown keys.
    std::vector<std::string> warnings;

    SystemConfig system_config(int antennas) const;
    HardwareProfile profile(HardwareMode mode, Oscillator oscillator, int antennas) const;
    Scenario scenario() const;
};

/// Reads an INI-style `key = value` file. Section headers are allowed for grouping;
/// keys are looked up by name regardless of section. Omitted keys keep their defaults.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(std::istream& in);

/// Checks every invariant; throws ConfigError naming the first offending key.
void validate_config(const ExperimentConfig& config);

/// Resolved configuration in load_config's format, so a run can be replayed exactly.
void write_manifest(std::ostream& out, const ExperimentConfig& config);

struct SweepRow {
    int antennas = 0;
    Oscillator oscillator = Oscillator::separate;
    HardwareMode hardware = HardwareMode::ideal;
    double sum_rate = 0.0;
    std::optional<double> mc_sum_rate;

    bool operator<(const SweepRow& o) const;
};

/// Network sum rate for every (N, oscillator, hardware) combination, sorted.
/// Rows finished before a failure remain in `rows` when an exception escapes.
void run_sweep(const ExperimentConfig& config, std::vector<SweepRow>& rows);
std::vector<SweepRow> run_sweep(const ExperimentConfig& config);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, const ExperimentConfig& config);

/// Writes sweep.csv and manifest.ini into config.out_dir.
void emit_results(const std::vector<SweepRow>& rows, const ExperimentConfig& config);

struct VerifyRow {
    Oscillator oscillator = Oscillator::separate;
    int t = 0;
    std::string quantity;
    double closed_form = 0.0;
    double mc_mean = 0.0;
    double mc_std_error = 0.0;

    double z_score() const { return mc_std_error > 0.0 ? (mc_mean - closed_form) / mc_std_error : 0.0; }
};

/// Closed-form against Monte Carlo moments of UE (0, 0) on the verify instance,
/// for each configured oscillator at the first and last data channel use.
std::vector<VerifyRow> run_verify(const ExperimentConfig& config);
void write_verify_csv(std::ostream& out, const std::vector<VerifyRow>& rows);

struct ScalingRow {
    Oscillator oscillator = Oscillator::separate;
    double tau1 = 0.0;
    double tau2 = 0.0;
    double tau3 = 0.0;
    bool satisfied = false;
    double probe_ratio = 0.0;  // SINR(1e5) / SINR(1e4) for UE (0, 0)
};

std::vector<ScalingRow> run_scaling(const ExperimentConfig& config);
void write_scaling_csv(std::ostream& out, const std::vector<ScalingRow>& rows);

std::vector<PowerRow> run_power(const ExperimentConfig& config);
void write_power_csv(std::ostream& out, const std::vector<PowerRow>& rows);

}  // namespace mimohw
