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
#include <vector>

#include "mimohw/core_model.hpp"

namespace mimohw {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Square cells on a grid x grid torus, one BS at each cell center, each cell
/// split into equal angular sectors around its BS.
struct Geometry {
    int grid = 4;
    double cell_side = 250.0;      // m
    double min_distance = 35.0;    // m
    int sectors_per_cell = 8;

    int num_cells() const { return grid * grid; }
    double world_side() const { return grid * cell_side; }
    Point base_station(int cell) const;
};

struct ShadowFading {
    double std_dev = 0.5;  // of the base-10 exponent
};

std::vector<std::string> validate(const Geometry& geometry);

/// Distance on the torus of side `world_side`.
double wrap_distance(Point a, Point b, double world_side);

/// Linear attenuation 10^(shadow - 1.53) / d^3.76.
/// Throws std::domain_error when `distance` is below `min_distance`.
double pathloss(double distance, double shadow, double min_distance = 35.0);

/// One UE per sector, uniformly distributed in the part of the sector that is at
/// least min_distance from the BS. Result is indexed [cell * sectors + sector].
std::vector<Point> drop_ues(const Geometry& geometry, std::uint64_t seed);

/// Attenuations from wrapped distances and independent shadowing draws; the UE in
/// sector k of every cell uses pilot k.
Scenario build_scenario(const Geometry& geometry, const ShadowFading& shadow, double power_mw,
                        std::uint64_t seed);

/// Small random network for oracle checks: attenuations uniform in
/// [0.05, 1] (own-cell links in [0.5, 1]), powers uniform in [0.5, 1.5], user k on pilot k.
Scenario random_scenario(int num_cells, int users_per_cell, std::uint64_t seed);

/// Flat CSV with header j,l,k,lambda,pilot_index,p (zero-based indices, one row
/// per BS/UE pair). Values are written in shortest round-trip form.
void write_scenario_csv(std::ostream& out, const Scenario& scenario);
Scenario read_scenario_csv(std::istream& in);

}  // namespace mimohw
