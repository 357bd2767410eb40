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

#include "mimohw/scenario.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "mimohw/format.hpp"
#include "mimohw/random.hpp"

namespace mimohw {

namespace {

constexpr int kMaxDropAttempts = 100000;

}  // namespace

Point Geometry::base_station(int cell) const {
    const int row = cell / grid;
    const int col = cell % grid;
    return {(col + 0.5) * cell_side, (row + 0.5) * cell_side};
}

std::vector<std::string> validate(const Geometry& g) {
    std::vector<std::string> errors;
    if (g.grid < 1) errors.emplace_back("grid must be >= 1");
    if (g.sectors_per_cell < 1) errors.emplace_back("sectors per cell must be >= 1");
    if (!(g.cell_side > 0.0)) errors.emplace_back("cell side must be > 0");
    if (!(g.min_distance >= 0.0 && g.min_distance < g.cell_side / 2)) {
        errors.emplace_back("min_distance must lie in [0, cell_side/2)");
    }
    return errors;
}

double wrap_distance(Point a, Point b, double world_side) {
    auto axis = [world_side](double u, double v) {
        const double d = std::abs(u - v);
        return std::min(d, world_side - d);
    };
    return std::hypot(axis(a.x, b.x), axis(a.y, b.y));
}

double pathloss(double distance, double shadow, double min_distance) {
    if (!(distance >= min_distance)) {
        throw std::domain_error("distance " + format_number(distance) + " m below minimum " +
                                format_number(min_distance) + " m");
    }
    return std::pow(10.0, shadow - 1.53) / std::pow(distance, 3.76);
}

std::vector<Point> drop_ues(const Geometry& geometry, std::uint64_t seed) {
    if (auto errors = validate(geometry); !errors.empty()) throw std::invalid_argument(errors.front());

    const double half = geometry.cell_side / 2.0;
    const double wedge = 2.0 * std::numbers::pi / geometry.sectors_per_cell;
    Rng rng(mix_seed(seed, 0));
    std::uniform_real_distribution<double> offset(-half, half);

    std::vector<Point> ues;
    ues.reserve(static_cast<std::size_t>(geometry.num_cells()) * geometry.sectors_per_cell);
    for (int cell = 0; cell < geometry.num_cells(); ++cell) {
        const Point bs = geometry.base_station(cell);
        for (int sector = 0; sector < geometry.sectors_per_cell; ++sector) {
            bool placed = false;
            for (int attempt = 0; attempt < kMaxDropAttempts && !placed; ++attempt) {
                const double dx = offset(rng);
                const double dy = offset(rng);
                if (std::hypot(dx, dy) < geometry.min_distance) continue;
                double angle = std::atan2(dy, dx);
                if (angle < 0.0) angle += 2.0 * std::numbers::pi;
                const int s = std::min(static_cast<int>(angle / wedge), geometry.sectors_per_cell - 1);
                if (s != sector) continue;
                ues.push_back({bs.x + dx, bs.y + dy});
                placed = true;
            }
            if (!placed) {
                throw std::runtime_error("could not place a UE in sector " + std::to_string(sector) +
                                         " of cell " + std::to_string(cell));
            }
        }
    }
    return ues;
}

Scenario build_scenario(const Geometry& geometry, const ShadowFading& shadow, double power_mw,
                        std::uint64_t seed) {
    if (!(shadow.std_dev >= 0.0)) throw std::invalid_argument("shadow std must be >= 0");
    if (!(power_mw > 0.0)) throw std::invalid_argument("transmit power must be > 0");

    const auto ues = drop_ues(geometry, seed);
    const int cells = geometry.num_cells();
    const int users = geometry.sectors_per_cell;
    Scenario scenario(cells, users);

    Rng rng(mix_seed(seed, 1));
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int j = 0; j < cells; ++j) {
        const Point bs = geometry.base_station(j);
        for (int l = 0; l < cells; ++l) {
            for (int k = 0; k < users; ++k) {
                const double d = wrap_distance(bs, ues[l * users + k], geometry.world_side());
                const double s = shadow.std_dev * normal(rng);
                scenario.attenuation(j, l, k) = pathloss(d, s, geometry.min_distance);
            }
        }
    }
    for (int l = 0; l < cells; ++l) {
        for (int k = 0; k < users; ++k) {
            scenario.power(l, k) = power_mw;
            scenario.pilot(l, k) = k;
        }
    }
    return scenario;
}

Scenario random_scenario(int num_cells, int users_per_cell, std::uint64_t seed) {
    Scenario scenario(num_cells, users_per_cell);
    Rng rng(mix_seed(seed, 7));
    std::uniform_real_distribution<double> cross(0.05, 1.0);
    std::uniform_real_distribution<double> own(0.5, 1.0);
    std::uniform_real_distribution<double> power(0.5, 1.5);
    for (int j = 0; j < num_cells; ++j) {
        for (int l = 0; l < num_cells; ++l) {
            for (int k = 0; k < users_per_cell; ++k) {
                scenario.attenuation(j, l, k) = (j == l) ? own(rng) : cross(rng);
            }
        }
    }
    for (int l = 0; l < num_cells; ++l) {
        for (int k = 0; k < users_per_cell; ++k) {
            scenario.power(l, k) = power(rng);
            scenario.pilot(l, k) = k;
        }
    }
    return scenario;
}

void write_scenario_csv(std::ostream& out, const Scenario& scenario) {
    out << "j,l,k,lambda,pilot_index,p\n";
    for (int j = 0; j < scenario.num_cells(); ++j) {
        for (int l = 0; l < scenario.num_cells(); ++l) {
            for (int k = 0; k < scenario.users_per_cell(); ++k) {
                out << j << ',' << l << ',' << k << ',' << format_number(scenario.attenuation(j, l, k))
                    << ',' << scenario.pilot(l, k) << ',' << format_number(scenario.power(l, k)) << '\n';
            }
        }
    }
}

Scenario read_scenario_csv(std::istream& in) {
    struct Row {
        int j, l, k, pilot;
        double lambda, p;
    };
    std::vector<Row> rows;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("scenario CSV is empty");
    if (line.rfind("j,l,k,lambda,pilot_index,p", 0) != 0) {
        throw std::runtime_error("unexpected scenario CSV header: " + line);
    }
    int max_cell = -1;
    int max_user = -1;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_fields(line);
        if (fields.size() != 6) {
            throw std::runtime_error("scenario CSV line " + std::to_string(line_no) + ": expected 6 fields");
        }
        try {
            Row r{static_cast<int>(parse_number(fields[0])), static_cast<int>(parse_number(fields[1])),
                  static_cast<int>(parse_number(fields[2])), static_cast<int>(parse_number(fields[4])),
                  parse_number(fields[3]), parse_number(fields[5])};
            if (r.j < 0 || r.l < 0 || r.k < 0) throw std::invalid_argument("negative index");
            max_cell = std::max({max_cell, r.j, r.l});
            max_user = std::max(max_user, r.k);
            rows.push_back(r);
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error("scenario CSV line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (rows.empty()) throw std::runtime_error("scenario CSV has no rows");

    Scenario scenario(max_cell + 1, max_user + 1);
    const std::size_t expected =
        static_cast<std::size_t>(scenario.num_cells()) * scenario.num_cells() * scenario.users_per_cell();
    if (rows.size() != expected) {
        throw std::runtime_error("scenario CSV has " + std::to_string(rows.size()) + " rows, expected " +
                                 std::to_string(expected));
    }
    for (const auto& r : rows) {
        scenario.attenuation(r.j, r.l, r.k) = r.lambda;
        scenario.power(r.l, r.k) = r.p;
        scenario.pilot(r.l, r.k) = r.pilot;
    }
    return scenario;
}

}  // namespace mimohw
