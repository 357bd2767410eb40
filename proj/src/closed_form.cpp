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

#include "mimohw/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mimohw {

namespace {

void check_data_time(const EstimatorCache& cache, int t) {
    if (t < cache.pilot_length() + 1) {
        throw std::out_of_range("channel use " + std::to_string(t) + " is not a data channel use");
    }
}

// Quadratic forms of the whitened pilot against every unit pilot sequence.
struct SequenceForms {
    std::vector<double> damped;     // w^H Xbar_b w
    std::vector<double> distorted;  // w^H X_b w
    std::vector<double> aligned;    // |w^H D u_b|^2
};

SequenceForms sequence_forms(const EstimatorCache& cache, const Eigen::VectorXcd& w, const Eigen::VectorXd& delay) {
    const int b_len = cache.pilot_length();
    const double kappa2 = cache.profile().distortion_sq;
    const double w_energy = w.squaredNorm();
    SequenceForms f;
    f.damped.resize(b_len);
    f.distorted.resize(b_len);
    f.aligned.resize(b_len);
    for (int b = 0; b < b_len; ++b) {
        const double q = std::max(0.0, w.dot(cache.unit_damped_gram(b) * w).real());
        f.damped[b] = q;
        // unit sequences have |u_i|^2 = 1
        f.distorted[b] = q + kappa2 * w_energy;
        const Eigen::VectorXcd shifted = delay.cast<Complex>().cwiseProduct(cache.pilot_book().sequence(b));
        f.aligned[b] = std::norm(w.dot(shifted));
    }
    return f;
}

}  // namespace

MomentSet mrc_moments(const EstimatorCache& cache, int antennas, int bs, int user, int t) {
    check_data_time(cache, t);
    if (antennas < 1) throw std::invalid_argument("antenna count must be >= 1");
    const Scenario& sc = cache.scenario();
    const HardwareProfile& hw = cache.profile();
    const int cells = sc.num_cells();
    const int users = sc.users_per_cell();
    const double n = antennas;
    const double n_pairs = n * (n - 1.0);

    const Eigen::VectorXd delay = cache.delay(t);
    const Eigen::VectorXcd shifted = delay.cast<Complex>().cwiseProduct(cache.pilot_book().pilot(sc, bs, user));
    const Eigen::VectorXcd w = cache.psi_solve(bs, shifted);
    const double own = sc.attenuation(bs, bs, user);
    const double own_sq = own * own;
    const double gain = std::max(0.0, shifted.dot(w).real());

    MomentSet m;
    m.filter_norm = n * own_sq * gain;
    m.signal = m.filter_norm;
    m.interference.resize(static_cast<std::size_t>(cells) * users);

    const SequenceForms forms = sequence_forms(cache, w, delay);
    const bool common = hw.oscillator == Oscillator::common;

    long double received = 0.0L;   // sum p lambda
    long double distorted = 0.0L;  // sum p N lambda_jk^2 lambda^2 w^H X w
    for (int l = 0; l < cells; ++l) {
        for (int u = 0; u < users; ++u) {
            const double p = sc.power(l, u);
            const int b = sc.pilot(l, u);
            const double lam = sc.attenuation(bs, l, u);
            const double scale = own_sq * lam * lam;
            const double quad = p * forms.distorted[b];
            const double cross = p * (common ? forms.damped[b] : forms.aligned[b]);
            m.interference[l * users + u] = lam * m.filter_norm + n * scale * quad + n_pairs * scale * cross;
            received += static_cast<long double>(p) * lam;
            distorted += static_cast<long double>(p) * n * scale * quad;
        }
    }
    m.distortion = static_cast<double>(hw.distortion_sq * (m.filter_norm * received + distorted));
    return m;
}

double pilot_cross_term(const EstimatorCache& cache, int bs, int user, int cell, int other_user, int t) {
    check_data_time(cache, t);
    const Scenario& sc = cache.scenario();
    const Eigen::VectorXd delay = cache.delay(t);
    const Eigen::VectorXcd w = cache.whitened_pilot(bs, bs, user, t);
    const Eigen::VectorXcd other = cache.pilot_book().pilot(sc, cell, other_user);
    if (cache.profile().oscillator == Oscillator::common) {
        const auto g = pilot_grams(other, cache.profile().drift_variance, 0.0);
        return std::max(0.0, w.dot(g.damped * w).real());
    }
    return std::norm(w.dot(delay.cast<Complex>().cwiseProduct(other)));
}

double sinr(const MomentSet& moments, const Scenario& scenario, const HardwareProfile& profile, double noise_power,
            int bs, int user) {
    const int users = scenario.users_per_cell();
    const double p_own = scenario.power(bs, user);
    const long double useful = static_cast<long double>(p_own) * moments.signal * moments.signal;

    long double total = 0.0L;
    for (int l = 0; l < scenario.num_cells(); ++l) {
        for (int u = 0; u < users; ++u) {
            total += static_cast<long double>(scenario.power(l, u)) * moments.interference[l * users + u];
        }
    }
    const long double denominator = total - useful + moments.distortion +
                                     static_cast<long double>(noise_power) * profile.noise_amplification *
                                         moments.filter_norm;
    if (!(denominator > 0.0L)) {
        throw std::runtime_error("non-positive SINR denominator for UE (" + std::to_string(bs) + "," +
                                 std::to_string(user) + ")");
    }
    return static_cast<double>(useful / denominator);
}

double rate(std::span<const double> sinr_trajectory, int coherence_length, int pilot_length) {
    if (static_cast<int>(sinr_trajectory.size()) != coherence_length - pilot_length) {
        throw std::invalid_argument("SINR trajectory must cover the T - B data channel uses");
    }
    double sum = 0.0;
    for (double s : sinr_trajectory) sum += std::log2(1.0 + s);
    return sum / coherence_length;
}

RateReport assemble_rate_report(int num_cells, int users_per_cell, int coherence_length, int pilot_length,
                                std::vector<double> sinr_values) {
    const int span = coherence_length - pilot_length;
    RateReport r;
    r.num_cells = num_cells;
    r.users_per_cell = users_per_cell;
    r.sinr = std::move(sinr_values);
    r.user_rate.resize(static_cast<std::size_t>(num_cells) * users_per_cell);
    r.cell_rate.assign(num_cells, 0.0);
    for (int l = 0; l < num_cells; ++l) {
        for (int u = 0; u < users_per_cell; ++u) {
            const std::size_t idx = static_cast<std::size_t>(l) * users_per_cell + u;
            const std::span<const double> traj(r.sinr.data() + idx * span, span);
            r.user_rate[idx] = rate(traj, coherence_length, pilot_length);
            r.cell_rate[l] += r.user_rate[idx];
        }
    }
    for (double c : r.cell_rate) r.sum_rate += c;
    return r;
}

RateReport closed_form_rates(const EstimatorCache& cache, const SystemConfig& config) {
    const Scenario& sc = cache.scenario();
    const int span = config.coherence_length - config.pilot_length;
    std::vector<double> values(static_cast<std::size_t>(sc.num_users()) * span);
    for (int j = 0; j < sc.num_cells(); ++j) {
        for (int k = 0; k < sc.users_per_cell(); ++k) {
            const std::size_t base = static_cast<std::size_t>(j * sc.users_per_cell() + k) * span;
            for (int t = config.pilot_length + 1; t <= config.coherence_length; ++t) {
                const auto m = mrc_moments(cache, config.antennas, j, k, t);
                values[base + (t - config.pilot_length - 1)] =
                    sinr(m, sc, cache.profile(), cache.noise_power(), j, k);
            }
        }
    }
    return assemble_rate_report(sc.num_cells(), sc.users_per_cell(), config.coherence_length, config.pilot_length,
                                std::move(values));
}

HardwareProfile apply_scaling(const ScalingExponents& e, double antennas, Oscillator oscillator) {
    if (!(antennas >= 1.0)) throw std::invalid_argument("antenna count must be >= 1");
    HardwareProfile hw;
    hw.distortion_sq = e.distortion0_sq * std::pow(antennas, e.distortion_exp);
    hw.noise_amplification = e.noise_amplification0 * std::pow(antennas, e.noise_exp);
    hw.drift_variance = e.drift_variance0 * (1.0 + e.drift_exp * std::log(antennas));
    hw.oscillator = oscillator;
    return hw;
}

bool scaling_law_satisfied(const ScalingExponents& e, int t, int pilot_length, Oscillator oscillator) {
    const double additive = std::max(e.distortion_exp, e.noise_exp);
    if (oscillator == Oscillator::common) return additive <= 0.5 && e.drift_exp == 0.0;
    return additive + e.drift_variance0 * (t - pilot_length) / 2.0 * e.drift_exp <= 0.5;
}

ProbeResult asymptotic_probe(const Scenario& scenario, const SystemConfig& config, const ScalingExponents& exponents,
                             Oscillator oscillator, std::span<const int> antenna_counts, int bs, int user) {
    ProbeResult r;
    for (std::size_t i = 0; i < antenna_counts.size(); ++i) {
        if (i > 0 && antenna_counts[i] <= antenna_counts[i - 1]) {
            throw std::invalid_argument("probe antenna counts must be increasing");
        }
        SystemConfig cfg = config;
        cfg.antennas = antenna_counts[i];
        const EstimatorCache cache(scenario, cfg, apply_scaling(exponents, cfg.antennas, oscillator));
        const auto m = mrc_moments(cache, cfg.antennas, bs, user, cfg.coherence_length);
        r.antennas.push_back(cfg.antennas);
        r.sinr.push_back(sinr(m, scenario, cache.profile(), cfg.noise_power, bs, user));
    }
    if (r.sinr.size() >= 2) {
        r.last_ratio = r.sinr.back() / r.sinr[r.sinr.size() - 2];
        r.converged = std::abs(r.last_ratio - 1.0) <= 0.05;
    }
    return r;
}

}  // namespace mimohw
