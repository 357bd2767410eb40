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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "mimohw/circuits.hpp"
#include "mimohw/closed_form.hpp"

using namespace mimohw;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("ADC distortion per bit") {
    CHECK(adc_kappa(8.0) == 0x1p-8);
    CHECK(adc_kappa(1.0) == 0.5);
    double prev = adc_kappa(1.0);
    for (double b = 1.5; b < 30.0; b += 0.5) {
        CHECK(adc_kappa(b) < prev);
        prev = adc_kappa(b);
    }
    CHECK(adc_kappa(60.0) < 1e-18);
    CHECK_THROWS_AS(adc_kappa(0.5), std::invalid_argument);
}

TEST_CASE("ADC resolution relaxation") {
    CHECK(adc_scaled_bits(8.0, 256.0, 0.5) == 6.0);
    CHECK(adc_scaled_bits(8.0, 1.0, 0.5) == 8.0);
    CHECK(adc_scaled_bits(3.0, 1e12, 1.0) == 1.0);
    CHECK(adc_power(6.0, 1.0) * 16.0 == adc_power(8.0, 1.0));
    CHECK(adc_power(2.0, 3.0) == 48.0);
}

TEST_CASE("ADC relaxation reproduces the kappa scaling") {
    for (double n : {1.0, 4.0, 100.0, 1000.0}) {
        for (double tau : {0.0, 0.25, 0.5}) {
            const double k = adc_kappa(adc_scaled_bits(8.0, n, tau));
            CHECK_THAT(k * k, WithinRel(std::exp2(-16.0) * std::pow(n, tau), 1e-12));
        }
    }
}

TEST_CASE("total ADC power") {
    CHECK_THAT(total_adc_power(37.0, 8.0, 0.0, 2.0), WithinRel(37.0 * 2.0 * 65536.0, 1e-15));
    CHECK_THAT(total_adc_power(10000.0, 8.0, 0.5, 1.0) / total_adc_power(100.0, 8.0, 0.5, 1.0),
               WithinRel(10.0, 1e-12));
    for (double tau : {0.0, 0.25, 0.5, 0.75}) {
        for (double n : {10.0, 64.0, 300.0}) {
            CHECK_THAT(total_adc_power(10.0 * n, 10.0, tau, 1.0) / total_adc_power(n, 10.0, tau, 1.0),
                       WithinRel(std::pow(10.0, 1.0 - tau), 1e-12));
        }
    }
}

TEST_CASE("LNA power and noise figure") {
    CHECK(lna_power(1.0, 2.0, 1.0) == 1.0);
    CHECK_THROWS_AS(lna_power(1.0, 1.0, 1.0), std::domain_error);
    CHECK_THAT(noise_figure_to_xi(2.0), WithinRel(1.5848931924611136, 1e-15));
    CHECK_THAT(xi_to_noise_figure(noise_figure_to_xi(2.0)), WithinRel(2.0, 1e-15));
    CHECK_THAT(lna_scaled_nf(2.0, 100.0, 0.5) - 2.0, WithinAbs(10.0, 1e-12));
    CHECK(lna_scaled_nf(2.0, 1.0, 0.5) == 2.0);
    for (double g : {0.5, 2.0}) {
        for (double xi : {1.1, 3.0}) {
            for (double fom : {0.2, 7.0}) CHECK_THAT(g / ((xi - 1.0) * lna_power(g, xi, fom)), WithinRel(fom, 1e-14));
        }
    }
}

TEST_CASE("LNA relaxation reproduces the xi scaling") {
    const double xi0 = noise_figure_to_xi(2.0);
    const ScalingExponents e{0.0, 0.5, 0.0, 0.0, xi0, 0.0};
    for (double n : {1.0, 10.0, 256.0, 5000.0}) {
        CHECK_THAT(noise_figure_to_xi(lna_scaled_nf(2.0, n, 0.5)),
                   WithinRel(apply_scaling(e, n, Oscillator::common).noise_amplification, 1e-12));
    }
}

TEST_CASE("total LNA power approaches square-root growth") {
    const LnaSpec spec;
    CHECK_THAT(total_lna_power(10.0, spec, 0.0) / total_lna_power(1.0, spec, 0.0), WithinRel(10.0, 1e-12));
    double prev_err = 1.0;
    for (double n : {1e2, 1e4, 1e6}) {
        const double ratio = total_lna_power(100.0 * n, spec, 0.5) / total_lna_power(n, spec, 0.5);
        const double err = std::abs(ratio / 10.0 - 1.0);
        CHECK(err < prev_err);
        prev_err = err;
    }
    CHECK(prev_err < 1e-3);
}

TEST_CASE("LO quality and power") {
    CHECK(lo_variance(2e9, 1e-7, 0.0) == 0.0);
    CHECK_THAT(lo_variance(4e9, 1e-7, 1e-17) / lo_variance(2e9, 1e-7, 1e-17), WithinRel(4.0, 1e-14));
    const double zeta = lo_zeta_for_variance(1.6e-4, 2e9, 1e-7);
    CHECK_THAT(zeta, WithinRel(1.0132118364233779e-17, 1e-12));
    for (double z : {1e-20, 3e-17, 1e-10}) CHECK_THAT(lo_zeta_for_variance(lo_variance(2e9, 1e-7, z), 2e9, 1e-7), WithinRel(z, 1e-12));
    CHECK_THAT(lo_power(1e-17, 2.0), WithinRel(2e17, 1e-15));
    CHECK_THROWS_AS(lo_power(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(lo_zeta_for_variance(1e-4, 0.0, 1e-7), std::invalid_argument);
}

TEST_CASE("total LO power") {
    const double p = lo_power(1e-17, 1.0);
    CHECK_THAT(total_lo_power(50.0, 1e-17, 0.0, 1.0, Oscillator::separate), WithinRel(50.0 * p, 1e-15));
    CHECK_THAT(total_lo_power(std::numbers::e, 1e-17, 1.0, 1.0, Oscillator::separate),
               WithinRel(std::numbers::e * p / 2.0, 1e-15));
    for (double n : {1.0, 10.0, 1e4}) CHECK(total_lo_power(n, 1e-17, 0.0, 1.0, Oscillator::common) == p);
    CHECK_THROWS_AS(total_lo_power(10.0, 1e-17, 0.5, 1.0, Oscillator::common), std::invalid_argument);
}

TEST_CASE("power report") {
    const std::vector<int> ns{10, 100, 1000};
    CircuitSpecs specs;
    specs.adc.bits = 12.0;
    const auto linear = power_report(ns, specs, ScalingExponents{}, Oscillator::separate);
    REQUIRE(linear.size() == 9);
    for (int c = 0; c < 3; ++c) {
        CHECK_THAT(linear[3 + c].total_power / linear[c].total_power, WithinRel(10.0, 1e-12));
        CHECK(linear[c].component == std::vector<std::string>{"adc", "lna", "lo"}[c]);
        CHECK(linear[c].antennas == 10);
    }
    const auto root = power_report(ns, specs, ScalingExponents{0.5, 0.5, 0.0, 0.0, 1.0, 0.0}, Oscillator::common);
    CHECK_THAT(root[3].total_power / root[0].total_power, WithinRel(std::sqrt(10.0), 1e-12));
    CHECK(root[5].total_power == root[2].total_power);
    const auto slo = power_report(ns, specs, ScalingExponents{0.0, 0.0, 2.0, 0.0, 1.0, 0.0}, Oscillator::separate);
    CHECK_THAT(slo[5].total_power / slo[2].total_power,
               WithinRel(10.0 * (1.0 + 2.0 * std::log(10.0)) / (1.0 + 2.0 * std::log(100.0)), 1e-12));
}
