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
#include <string>
#include <vector>

#include "mimohw/core_model.hpp"

namespace mimohw {

// Circuit-level reading of the imperfection parameters. Absolute power levels
// are in arbitrary units set by the coefficients below; only ratios carry meaning.

struct AdcSpec {
    double bits = 8.0;
    double power_coefficient = 1.0;  // P_ADC = coefficient * 2^(2b)
};

struct LnaSpec {
    double gain = 1.0;
    double figure_of_merit = 1.0;  // G / ((xi - 1) P_LNA)
    double noise_figure_db = 2.0;  // 10 log10(xi) at N = 1
};

/// Free-running oscillator. P_LO * zeta is taken to equal the figure of merit
/// (the relation is approximate for real circuits).
struct LoSpec {
    double carrier_hz = 2e9;
    double symbol_time_s = 1e-7;
    double zeta = 1e-16;
    double figure_of_merit = 1.0;
};

/// Amplitude of the quantization distortion of a b-bit ADC, 2^-b; kappa^2 receives 2^-2b.
double adc_kappa(double bits);

/// Resolution after relaxing for an N-antenna array: b0 - (tau1/2) log2 N, never below 1 bit.
double adc_scaled_bits(double bits0, double antennas, double tau1);

double adc_power(double bits, double power_coefficient);

/// N ADCs, each at the relaxed resolution.
double total_adc_power(double antennas, double bits0, double tau1, double power_coefficient);

/// LNA power implied by its figure of merit. Throws std::domain_error for xi <= 1.
double lna_power(double gain, double xi, double figure_of_merit);

double lna_scaled_nf(double nf0_db, double antennas, double tau2);

double noise_figure_to_xi(double nf_db);
double xi_to_noise_figure(double xi);

/// N LNAs with noise amplification xi0 * N^tau2.
double total_lna_power(double antennas, const LnaSpec& spec, double tau2);

/// 4 pi^2 f_c^2 T_s zeta.
double lo_variance(double carrier_hz, double symbol_time_s, double zeta);
double lo_zeta_for_variance(double drift_variance, double carrier_hz, double symbol_time_s);
double lo_power(double zeta, double figure_of_merit);

/// SLO: N oscillators whose quality is relaxed by 1 + tau3 ln N. CLO: one oscillator,
/// no relaxation allowed (throws std::invalid_argument for tau3 > 0).
double total_lo_power(double antennas, double zeta0, double tau3, double figure_of_merit, Oscillator oscillator);

struct PowerRow {
    int antennas = 0;
    std::string component;  // "adc", "lna" or "lo"
    Oscillator oscillator = Oscillator::separate;
    double total_power = 0.0;
};

struct CircuitSpecs {
    AdcSpec adc;
    LnaSpec lna;
    LoSpec lo;
};

/// Total ADC, LNA and LO power for every N, in that order per N.
std::vector<PowerRow> power_report(std::span<const int> antenna_counts, const CircuitSpecs& specs,
                                   const ScalingExponents& exponents, Oscillator oscillator);

}  // namespace mimohw
