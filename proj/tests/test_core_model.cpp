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

#include <algorithm>
#include <cmath>
#include <string>

#include "mimohw/core_model.hpp"

using namespace mimohw;
using Catch::Matchers::WithinRel;

namespace {

bool contains(const std::vector<std::string>& errors, const std::string& needle) {
    return std::any_of(errors.begin(), errors.end(),
                       [&](const std::string& e) { return e.find(needle) != std::string::npos; });
}

Scenario uniform(int cells, int users) {
    Scenario sc(cells, users);
    for (int j = 0; j < cells; ++j)
        for (int l = 0; l < cells; ++l)
            for (int k = 0; k < users; ++k) sc.attenuation(j, l, k) = 1.0;
    for (int l = 0; l < cells; ++l) {
        for (int k = 0; k < users; ++k) {
            sc.power(l, k) = 1.0;
            sc.pilot(l, k) = k;
        }
    }
    return sc;
}

}  // namespace

TEST_CASE("minimal system validates") {
    SystemConfig cfg{1, 1, 1, 2, 1, 1.0};
    CHECK(validate(cfg, uniform(1, 1)).empty());
}

TEST_CASE("more users than pilots is rejected") {
    SystemConfig cfg{1, 9, 4, 20, 8, 1.0};
    Scenario sc = uniform(1, 9);
    sc.pilot(0, 8) = 0;
    CHECK(contains(validate(cfg, sc), "K <= B violated"));
}

TEST_CASE("duplicate pilot inside a cell is rejected") {
    SystemConfig cfg{1, 2, 4, 20, 4, 1.0};
    Scenario sc = uniform(1, 2);
    sc.pilot(0, 0) = 2;
    sc.pilot(0, 1) = 2;
    CHECK(contains(validate(cfg, sc), "duplicate in-cell pilot"));
}

TEST_CASE("validate reports every violation") {
    SystemConfig cfg{1, 3, 0, 2, 2, -1.0};
    Scenario sc = uniform(1, 3);
    sc.attenuation(0, 0, 1) = 0.0;
    sc.power(0, 2) = -1.0;
    const auto errors = validate(cfg, sc);
    CHECK(contains(errors, "antenna count"));
    CHECK(contains(errors, "B < T violated"));
    CHECK(contains(errors, "K <= B violated"));
    CHECK(contains(errors, "noise power"));
    CHECK(contains(errors, "attenuation"));
    CHECK(contains(errors, "transmit power"));
    CHECK(contains(errors, "outside [0, B)"));
}

TEST_CASE("dimension mismatch is an error, not a crash") {
    SystemConfig cfg{2, 2, 4, 20, 4, 1.0};
    CHECK(contains(validate(cfg, uniform(1, 2)), "dimension mismatch"));
}

TEST_CASE("hardware and exponent invariants") {
    CHECK(validate(HardwareProfile::ideal()).empty());
    CHECK(validate(HardwareProfile{-0.1, 0.0, 1.0, Oscillator::common}).size() == 1);
    CHECK(validate(HardwareProfile{0.0, -1.0, 1.0, Oscillator::common}).size() == 1);
    CHECK(validate(HardwareProfile{0.0, 0.0, 0.9, Oscillator::common}).size() == 1);
    CHECK(validate(ScalingExponents{}).empty());
    CHECK_FALSE(validate(ScalingExponents{-1.0, 0.0, 0.0, 0.0, 1.0, 0.0}).empty());
    CHECK_FALSE(validate(ScalingExponents{0.0, 0.0, 0.0, 0.0, 0.5, 0.0}).empty());
}

TEST_CASE("oscillator names") {
    CHECK(to_string(Oscillator::common) == "clo");
    CHECK(to_string(Oscillator::separate) == "slo");
    CHECK(parse_oscillator("clo") == Oscillator::common);
    CHECK(parse_oscillator("separate") == Oscillator::separate);
    CHECK_THROWS_AS(parse_oscillator("shared"), std::invalid_argument);
}

TEST_CASE("dBm/Hz conversion") {
    CHECK_THAT(dbm_per_hz_to_linear(-47.0), WithinRel(1.9952623149688786e-05, 1e-14));
    CHECK_THAT(dbm_per_hz_to_linear(-174.0), WithinRel(3.981071705534985e-18, 1e-14));
    CHECK(dbm_per_hz_to_linear(0.0) == 1.0);
    CHECK_THAT(linear_to_dbm_per_hz(dbm_per_hz_to_linear(-12.5)), WithinRel(-12.5, 1e-14));
}

TEST_CASE("pilot book is orthogonal with constant modulus") {
    for (int b = 1; b <= 12; ++b) {
        PilotBook book(b);
        for (int c1 = 0; c1 < b; ++c1) {
            const Eigen::VectorXcd s = book.sequence(c1);
            for (int i = 0; i < b; ++i) CHECK(std::abs(std::norm(s(i)) - 1.0) < 1e-12);
            for (int c2 = c1 + 1; c2 < b; ++c2) CHECK(std::abs(s.dot(book.sequence(c2))) < 1e-12);
        }
    }
    CHECK_THROWS(PilotBook(0));
}

TEST_CASE("pilot carries the UE power") {
    Scenario sc = uniform(1, 2);
    sc.power(0, 1) = 4.0;
    PilotBook book(3);
    const Eigen::VectorXcd x = book.pilot(sc, 0, 1);
    for (int i = 0; i < 3; ++i) CHECK_THAT(std::norm(x(i)), WithinRel(4.0, 1e-14));
}
