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

#include "mimohw/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>

#include "mimohw/format.hpp"
#include "mimohw/random.hpp"

namespace mimohw {

namespace {

void require_valid(const Scenario& scenario, const SystemConfig& config, const HardwareProfile& profile) {
    auto errors = validate(config, scenario);
    auto hw = validate(profile);
    errors.insert(errors.end(), hw.begin(), hw.end());
    if (!errors.empty()) throw std::invalid_argument(errors.front());
}

BlockRealization draw_block(const Scenario& sc, const SystemConfig& config, const HardwareProfile& profile,
                            const PilotBook& pilots, std::uint64_t seed, double initial_phase) {
    const int cells = sc.num_cells();
    const int users = sc.users_per_cell();
    const int num_users = cells * users;
    const int n_ant = config.antennas;
    const int len = config.coherence_length;
    const int b_len = config.pilot_length;

    BlockRealization blk;
    blk.num_cells = cells;
    blk.users_per_cell = users;
    blk.antennas = n_ant;
    blk.coherence_length = len;
    blk.pilot_length = b_len;

    Rng rng(seed);
    ComplexGaussian cn;
    std::normal_distribution<double> normal(0.0, 1.0);

    blk.symbols.resize(num_users, len);
    for (int l = 0; l < cells; ++l) {
        for (int k = 0; k < users; ++k) {
            const int row = l * users + k;
            const Eigen::VectorXcd pilot = pilots.pilot(sc, l, k);
            for (int t = 0; t < b_len; ++t) blk.symbols(row, t) = pilot(t);
            for (int t = b_len; t < len; ++t) blk.symbols(row, t) = cn(rng, sc.power(l, k));
        }
    }

    const double drift_sd = std::sqrt(profile.drift_variance);
    const double noise_var = config.noise_power * profile.noise_amplification;
    for (int j = 0; j < cells; ++j) {
        Eigen::MatrixXcd h(n_ant, num_users);
        for (int l = 0; l < cells; ++l) {
            for (int k = 0; k < users; ++k) {
                const double lam = sc.attenuation(j, l, k);
                for (int n = 0; n < n_ant; ++n) h(n, l * users + k) = cn(rng, lam);
            }
        }

        Eigen::MatrixXd phi(n_ant, len);
        if (profile.oscillator == Oscillator::common) {
            double phase = initial_phase;
            for (int t = 0; t < len; ++t) {
                phase += drift_sd * normal(rng);
                phi.col(t).setConstant(phase);
            }
        } else {
            for (int n = 0; n < n_ant; ++n) {
                double phase = initial_phase;
                for (int t = 0; t < len; ++t) {
                    phase += drift_sd * normal(rng);
                    phi(n, t) = phase;
                }
            }
        }

        Eigen::MatrixXcd ups(n_ant, len);
        for (int n = 0; n < n_ant; ++n) {
            double received_power = 0.0;
            for (int l = 0; l < cells; ++l) {
                for (int k = 0; k < users; ++k) received_power += sc.power(l, k) * std::norm(h(n, l * users + k));
            }
            const double var = profile.distortion_sq * received_power;
            for (int t = 0; t < len; ++t) ups(n, t) = cn(rng, var);
        }

        Eigen::MatrixXcd eta(n_ant, len);
        for (int t = 0; t < len; ++t) {
            for (int n = 0; n < n_ant; ++n) eta(n, t) = cn(rng, noise_var);
        }

        Eigen::MatrixXcd y = h * blk.symbols;
        for (int t = 0; t < len; ++t) {
            for (int n = 0; n < n_ant; ++n) y(n, t) *= std::polar(1.0, phi(n, t));
        }
        y += ups + eta;

        blk.channels.push_back(std::move(h));
        blk.phases.push_back(std::move(phi));
        blk.distortion.push_back(std::move(ups));
        blk.noise.push_back(std::move(eta));
        blk.received.push_back(std::move(y));
    }
    return blk;
}

class Accumulator {
public:
    explicit Accumulator(std::size_t width) : mean_(width, 0.0), m2_(width, 0.0) {}

    void add(std::span<const double> x) {
        ++count_;
        const double inv = 1.0 / static_cast<double>(count_);
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double delta = x[i] - mean_[i];
            mean_[i] += delta * inv;
            m2_[i] += delta * (x[i] - mean_[i]);
        }
    }

    void merge(const Accumulator& other) {
        if (other.count_ == 0) return;
        if (count_ == 0) {
            *this = other;
            return;
        }
        const double na = static_cast<double>(count_);
        const double nb = static_cast<double>(other.count_);
        const double n = na + nb;
        for (std::size_t i = 0; i < mean_.size(); ++i) {
            const double delta = other.mean_[i] - mean_[i];
            mean_[i] += delta * nb / n;
            m2_[i] += other.m2_[i] + delta * delta * na * nb / n;
        }
        count_ += other.count_;
    }

    std::int64_t count() const { return count_; }
    double mean(std::size_t i) const { return mean_[i]; }
    double std_error(std::size_t i) const {
        const double n = static_cast<double>(count_);
        return std::sqrt(m2_[i] / (n - 1.0) / n);
    }

private:
    std::int64_t count_ = 0;
    std::vector<double> mean_;
    std::vector<double> m2_;
};

// What to measure on every block: one record per target holding
// [filter_norm, signal, distortion, interference...], where the interference
// part is either one entry per interferer or the power-weighted sum.
struct Plan {
    struct Group {
        int bs;
        int t;
        std::vector<int> members;
    };

    std::vector<MomentTarget> targets;
    std::vector<Eigen::VectorXcd> weights;
    std::vector<Group> groups;
    bool per_interferer = true;
    int width = 0;

    Plan(const EstimatorCache& cache, std::vector<MomentTarget> tgts, bool full) : targets(std::move(tgts)) {
        per_interferer = full;
        width = 3 + (full ? cache.scenario().num_users() : 1);
        std::map<std::pair<int, int>, std::size_t> index;
        for (std::size_t i = 0; i < targets.size(); ++i) {
            const auto& tg = targets[i];
            weights.push_back(cache.estimator_weights(tg.bs, tg.bs, tg.user, tg.t));
            auto [it, inserted] = index.try_emplace({tg.bs, tg.t}, groups.size());
            if (inserted) groups.push_back({tg.bs, tg.t, {}});
            groups[it->second].members.push_back(static_cast<int>(i));
        }
    }

    std::size_t total_width() const { return targets.size() * width; }
};

void measure(const BlockRealization& blk, const Scenario& sc, const Plan& plan, std::vector<double>& out) {
    const int users = sc.users_per_cell();
    const int b_len = blk.pilot_length;
    for (const auto& group : plan.groups) {
        const Eigen::MatrixXcd& h = blk.channels[group.bs];
        Eigen::VectorXcd rot(blk.antennas);
        for (int n = 0; n < blk.antennas; ++n) rot(n) = std::polar(1.0, blk.phases[group.bs](n, group.t - 1));
        const Eigen::MatrixXcd effective = rot.asDiagonal() * h;
        const auto pilot_part = blk.received[group.bs].leftCols(b_len);
        const auto ups = blk.distortion[group.bs].col(group.t - 1);

        for (int idx : group.members) {
            const MomentTarget& tg = plan.targets[idx];
            const Eigen::VectorXcd v = pilot_part * plan.weights[idx];
            // entry i is conj(v^H h_i)
            const Eigen::VectorXcd r = effective.adjoint() * v;
            double* rec = out.data() + static_cast<std::size_t>(idx) * plan.width;
            rec[0] = v.squaredNorm();
            rec[1] = r(tg.bs * users + tg.user).real();
            rec[2] = std::norm(v.dot(ups));
            if (plan.per_interferer) {
                for (Eigen::Index i = 0; i < r.size(); ++i) rec[3 + i] = std::norm(r(i));
            } else {
                double weighted = 0.0;
                for (Eigen::Index i = 0; i < r.size(); ++i) {
                    weighted += sc.powers()[static_cast<std::size_t>(i)] * std::norm(r(i));
                }
                rec[3] = weighted;
            }
        }
    }
}

struct ChunkResult {
    Accumulator stats{0};
    std::string dump;
    std::exception_ptr error;
};

Accumulator run_blocks(const Scenario& sc, const SystemConfig& config, const HardwareProfile& profile,
                       const PilotBook& pilots, const Plan& plan, const MonteCarloOptions& options) {
    if (options.realizations < 2) throw std::invalid_argument("at least 2 realizations are needed for standard errors");
    const int workers = std::max(1, options.workers);
    const std::int64_t chunks = (options.realizations + kChunkBlocks - 1) / kChunkBlocks;

    auto run_chunk = [&](std::int64_t chunk, ChunkResult& res) {
        try {
            res.stats = Accumulator(plan.total_width());
            std::vector<double> sample(plan.total_width());
            std::ostringstream dump;
            const std::int64_t first = chunk * kChunkBlocks;
            const std::int64_t last = std::min(options.realizations, first + kChunkBlocks);
            for (std::int64_t block = first; block < last; ++block) {
                const auto blk = draw_block(sc, config, profile, pilots,
                                            mix_seed(options.seed, static_cast<std::uint64_t>(block)),
                                            options.initial_phase);
                measure(blk, sc, plan, sample);
                res.stats.add(sample);
                if (options.dump) {
                    dump << block;
                    for (double v : sample) dump << ',' << format_number(v);
                    dump << '\n';
                }
            }
            res.dump = dump.str();
        } catch (...) {
            res.error = std::current_exception();
        }
    };

    Accumulator total(plan.total_width());
    for (std::int64_t wave = 0; wave < chunks; wave += workers) {
        const auto count = static_cast<int>(std::min<std::int64_t>(workers, chunks - wave));
        std::vector<ChunkResult> results(count);
        if (count == 1) {
            run_chunk(wave, results[0]);
        } else {
            std::vector<std::thread> threads;
            threads.reserve(count);
            for (int w = 0; w < count; ++w) threads.emplace_back(run_chunk, wave + w, std::ref(results[w]));
            for (auto& th : threads) th.join();
        }
        for (auto& res : results) {
            if (res.error) std::rethrow_exception(res.error);
            total.merge(res.stats);
            if (options.dump) *options.dump << res.dump;
        }
    }
    return total;
}

}  // namespace

PilotObservation BlockRealization::pilot_observation(int bs) const {
    const auto pilot_part = received[bs].leftCols(pilot_length);
    PilotObservation obs;
    obs.stacked = Eigen::Map<const Eigen::VectorXcd>(Eigen::MatrixXcd(pilot_part).data(),
                                                     static_cast<Eigen::Index>(antennas) * pilot_length);
    return obs;
}

BlockRealization simulate_block(const Scenario& scenario, const SystemConfig& config, const HardwareProfile& profile,
                                std::uint64_t seed, double initial_phase) {
    require_valid(scenario, config, profile);
    return draw_block(scenario, config, profile, PilotBook(config.pilot_length), seed, initial_phase);
}

std::vector<EmpiricalMoments> estimate_moments(const Scenario& scenario, const SystemConfig& config,
                                               const HardwareProfile& profile, std::span<const MomentTarget> targets,
                                               const MonteCarloOptions& options) {
    require_valid(scenario, config, profile);
    for (const auto& tg : targets) {
        if (tg.t < config.pilot_length + 1 || tg.t > config.coherence_length) {
            throw std::out_of_range("channel use " + std::to_string(tg.t) + " is not a data channel use");
        }
    }
    const EstimatorCache cache(scenario, config, profile);
    const Plan plan(cache, {targets.begin(), targets.end()}, true);
    const Accumulator stats = run_blocks(scenario, config, profile, cache.pilot_book(), plan, options);

    const std::size_t num_users = static_cast<std::size_t>(scenario.num_users());
    std::vector<EmpiricalMoments> out;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const std::size_t base = i * plan.width;
        EmpiricalMoments em;
        em.realizations = stats.count();
        em.mean.filter_norm = stats.mean(base);
        em.mean.signal = stats.mean(base + 1);
        em.mean.distortion = stats.mean(base + 2);
        em.std_error.filter_norm = stats.std_error(base);
        em.std_error.signal = stats.std_error(base + 1);
        em.std_error.distortion = stats.std_error(base + 2);
        for (std::size_t u = 0; u < num_users; ++u) {
            em.mean.interference.push_back(stats.mean(base + 3 + u));
            em.std_error.interference.push_back(stats.std_error(base + 3 + u));
        }
        out.push_back(std::move(em));
    }
    return out;
}

EmpiricalMoments estimate_moments(const Scenario& scenario, const SystemConfig& config, const HardwareProfile& profile,
                                  int bs, int user, int t, const MonteCarloOptions& options) {
    if (options.dump) {
        *options.dump << "block,filter_norm,signal,distortion";
        for (int l = 0; l < scenario.num_cells(); ++l) {
            for (int m = 0; m < scenario.users_per_cell(); ++m) *options.dump << ",interference_" << l << '_' << m;
        }
        *options.dump << '\n';
    }
    const MomentTarget target{bs, user, t};
    return estimate_moments(scenario, config, profile, std::span<const MomentTarget>(&target, 1), options).front();
}

RateReport empirical_rate(const Scenario& scenario, const SystemConfig& config, const HardwareProfile& profile,
                          const MonteCarloOptions& options) {
    require_valid(scenario, config, profile);
    const EstimatorCache cache(scenario, config, profile);
    std::vector<MomentTarget> targets;
    for (int j = 0; j < scenario.num_cells(); ++j) {
        for (int k = 0; k < scenario.users_per_cell(); ++k) {
            for (int t = config.pilot_length + 1; t <= config.coherence_length; ++t) targets.push_back({j, k, t});
        }
    }
    MonteCarloOptions opts = options;
    opts.dump = nullptr;
    const Plan plan(cache, targets, false);
    const Accumulator stats = run_blocks(scenario, config, profile, cache.pilot_book(), plan, opts);

    const double noise = config.noise_power * profile.noise_amplification;
    std::vector<double> values(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const std::size_t base = i * plan.width;
        const auto& tg = targets[i];
        const long double filter_norm = stats.mean(base);
        const long double signal = stats.mean(base + 1);
        const long double useful = scenario.power(tg.bs, tg.user) * signal * signal;
        const long double denominator = stats.mean(base + 3) - useful + stats.mean(base + 2) + noise * filter_norm;
        if (!(denominator > 0.0L)) {
            throw std::runtime_error("empirical SINR denominator is not positive; increase the realization count");
        }
        values[i] = static_cast<double>(useful / denominator);
    }
    return assemble_rate_report(scenario.num_cells(), scenario.users_per_cell(), config.coherence_length,
                                config.pilot_length, std::move(values));
}

}  // namespace mimohw
