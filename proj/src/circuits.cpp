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

#include "mimohw/circuits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mimohw {

double adc_kappa(double bits) {
    if (!(bits >= 1.0)) throw std::invalid_argument("ADC resolution must be >= 1 bit");
    return std::exp2(-bits);
}

double adc_scaled_bits(double bits0, double antennas, double tau1) {
    if (!(antennas >= 1.0)) throw std::invalid_argument("antenna count must be >= 1");
    return std::max(1.0, bits0 - 0.5 * tau1 * std::log2(antennas));
}

double adc_power(double bits, double power_coefficient) { return power_coefficient * std::exp2(2.0 * bits); }

double total_adc_power(double antennas, double bits0, double tau1, double power_coefficient) {
    return antennas * adc_power(adc_scaled_bits(bits0, antennas, tau1), power_coefficient);
}

double lna_power(double gain, double xi, double figure_of_merit) {
    if (!(xi > 1.0)) throw std::domain_error("an LNA with xi = 1 would need infinite power");
    return gain / ((xi - 1.0) * figure_of_merit);
}

double lna_scaled_nf(double nf0_db, double antennas, double tau2) {
    if (!(antennas >= 1.0)) throw std::invalid_argument("antenna count must be >= 1");
    return nf0_db + tau2 * 10.0 * std::log10(antennas);
}

double noise_figure_to_xi(double nf_db) { return std::pow(10.0, nf_db / 10.0); }

double xi_to_noise_figure(double xi) { return 10.0 * std::log10(xi); }

double total_lna_power(double antennas, const LnaSpec& spec, double tau2) {
    const double xi = noise_figure_to_xi(lna_scaled_nf(spec.noise_figure_db, antennas, tau2));
    return antennas * lna_power(spec.gain, xi, spec.figure_of_merit);
}

double lo_variance(double carrier_hz, double symbol_time_s, double zeta) {
    constexpr double four_pi_sq = 4.0 * std::numbers::pi * std::numbers::pi;
    return four_pi_sq * carrier_hz * carrier_hz * symbol_time_s * zeta;
}

double lo_zeta_for_variance(double drift_variance, double carrier_hz, double symbol_time_s) {
    if (!(carrier_hz > 0.0 && symbol_time_s > 0.0)) {
        throw std::invalid_argument("carrier frequency and symbol time must be > 0");
    }
    return drift_variance / lo_variance(carrier_hz, symbol_time_s, 1.0);
}

double lo_power(double zeta, double figure_of_merit) {
    if (!(zeta > 0.0)) throw std::domain_error("a perfect oscillator (zeta = 0) would need infinite power");
    return figure_of_merit / zeta;
}

double total_lo_power(double antennas, double zeta0, double tau3, double figure_of_merit, Oscillator oscillator) {
    if (!(antennas >= 1.0)) throw std::invalid_argument("antenna count must be >= 1");
    if (oscillator == Oscillator::common) {
        if (tau3 > 0.0) throw std::invalid_argument("a common oscillator cannot be relaxed (tau3 must be 0)");
        return lo_power(zeta0, figure_of_merit);
    }
    return antennas * lo_power(zeta0, figure_of_merit) / (1.0 + tau3 * std::log(antennas));
}

std::vector<PowerRow> power_report(std::span<const int> antenna_counts, const CircuitSpecs& specs,
                                   const ScalingExponents& e, Oscillator oscillator) {
    std::vector<PowerRow> rows;
    rows.reserve(antenna_counts.size() * 3);
    for (int n : antenna_counts) {
        rows.push_back({n, "adc", oscillator,
                        total_adc_power(n, specs.adc.bits, e.distortion_exp, specs.adc.power_coefficient)});
        rows.push_back({n, "lna", oscillator, total_lna_power(n, specs.lna, e.noise_exp)});
        rows.push_back({n, "lo", oscillator,
                        total_lo_power(n, specs.lo.zeta, e.drift_exp, specs.lo.figure_of_merit, oscillator)});
    }
    return rows;
}

}  // namespace mimohw
