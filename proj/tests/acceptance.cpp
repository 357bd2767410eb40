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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mimohw/circuits.hpp"
#include "mimohw/cli.hpp"
#include "mimohw/closed_form.hpp"
#include "mimohw/experiment.hpp"
#include "mimohw/monte_carlo.hpp"
#include "mimohw/random.hpp"
#include "mimohw/scenario.hpp"

using namespace mimohw;

namespace {

namespace fs = std::filesystem;

struct Verdict {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), pattern, a, b, c);
    return buf;
}

double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// small instance shared by criteria 1 and 3
const SystemConfig kSmall{2, 2, 20, 12, 2, 0.5};
constexpr std::uint64_t kSeed = 1;

Verdict oracle_equivalence() {
    const Scenario sc = random_scenario(2, 2, kSeed);
    const std::vector<MomentTarget> targets{{0, 0, 3}, {0, 0, 12}};
    Verdict v;
    int compared = 0, outside = 0;
    double worst = 0.0;
    for (auto osc : {Oscillator::common, Oscillator::separate}) {
        const HardwareProfile hw{0.1, 0.05, 1.5, osc};
        const EstimatorCache cache(sc, kSmall, hw);
        MonteCarloOptions opts;
        opts.realizations = 200000;
        opts.seed = mix_seed(kSeed, osc == Oscillator::common ? 11 : 12);
        const auto ems = estimate_moments(sc, kSmall, hw, targets, opts);
        for (std::size_t i = 0; i < targets.size(); ++i) {
            const auto cf = mrc_moments(cache, kSmall.antennas, 0, 0, targets[i].t);
            const auto& em = ems[i];
            auto check = [&](double exact, double mean, double se) {
                const double z = std::abs(mean - exact) / se;
                worst = std::max(worst, z);
                ++compared;
                outside += z > 3.0;
            };
            check(cf.filter_norm, em.mean.filter_norm, em.std_error.filter_norm);
            check(cf.signal, em.mean.signal, em.std_error.signal);
            check(cf.distortion, em.mean.distortion, em.std_error.distortion);
            for (std::size_t u = 0; u < cf.interference.size(); ++u) {
                check(cf.interference[u], em.mean.interference[u], em.std_error.interference[u]);
            }
        }
    }
    v.pass = outside == 0;
    v.detail = fmt("%.0f moments, %.0f outside 3 SE, max |z| = %.2f", compared, outside, worst);
    return v;
}

Verdict drift_free_degeneracy() {
    double worst = 0.0;
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int inst = 0; inst < 100; ++inst) {
        const int cells = 1 + inst % 3, users = 1 + inst % 2, b = users + inst % 3;
        const SystemConfig cfg{cells, users, 1 + static_cast<int>(200 * u(rng)), b + 1 + inst % 7, b, 0.05 + u(rng)};
        const Scenario sc = random_scenario(cells, users, 1000 + static_cast<std::uint64_t>(inst));
        const double kappa2 = 0.1 * u(rng), xi = 1.0 + u(rng);
        const EstimatorCache clo(sc, cfg, {0.0, kappa2, xi, Oscillator::common});
        const EstimatorCache slo(sc, cfg, {0.0, kappa2, xi, Oscillator::separate});
        for (int j = 0; j < cells; ++j) {
            for (int k = 0; k < users; ++k) {
                for (int t = b + 1; t <= cfg.coherence_length; ++t) {
                    const auto a = mrc_moments(clo, cfg.antennas, j, k, t);
                    const auto s = mrc_moments(slo, cfg.antennas, j, k, t);
                    worst = std::max({worst, rel_diff(a.filter_norm, s.filter_norm), rel_diff(a.signal, s.signal),
                                      rel_diff(a.distortion, s.distortion)});
                    for (std::size_t i = 0; i < a.interference.size(); ++i) {
                        worst = std::max(worst, rel_diff(a.interference[i], s.interference[i]));
                    }
                }
            }
        }
        const auto ra = closed_form_rates(clo, cfg);
        const auto rs = closed_form_rates(slo, cfg);
        for (std::size_t i = 0; i < ra.sinr.size(); ++i) worst = std::max(worst, rel_diff(ra.sinr[i], rs.sinr[i]));
        for (std::size_t i = 0; i < ra.user_rate.size(); ++i) {
            worst = std::max(worst, rel_diff(ra.user_rate[i], rs.user_rate[i]));
        }
        worst = std::max(worst, rel_diff(ra.sum_rate, rs.sum_rate));
    }
    return {worst <= 1e-12, fmt("100 instances, max relative difference %.3g", worst)};
}

Verdict ideal_reduction() {
    const Scenario sc = random_scenario(2, 2, kSeed);
    const HardwareProfile hw = HardwareProfile::ideal();
    MonteCarloOptions opts;
    opts.realizations = 200000;
    opts.seed = mix_seed(kSeed, 13);
    const auto mc = empirical_rate(sc, kSmall, hw, opts);
    const auto cf = closed_form_rates(EstimatorCache(sc, kSmall, hw), kSmall);
    double worst = 0.0;
    for (std::size_t i = 0; i < cf.sinr.size(); ++i) worst = std::max(worst, std::abs(mc.sinr[i] / cf.sinr[i] - 1.0));
    return {worst <= 0.03, fmt("%.0f SINR values, max relative deviation %.4f", cf.sinr.size(), worst)};
}

Verdict scaling_limits() {
    ExperimentConfig config;
    config.geometry.grid = 2;
    const Scenario sc = config.scenario();
    const SystemConfig sys = config.system_config(1);

    ScalingExponents law = config.exponents;
    law.distortion_exp = 0.5;
    law.noise_exp = 0.5;
    law.drift_exp = 0.0;
    const std::vector<int> decades{10000, 100000};
    const auto held = asymptotic_probe(sc, sys, law, Oscillator::common, decades);
    const bool converges = std::abs(held.last_ratio - 1.0) <= 0.05;

    ScalingExponents broken = law;
    broken.distortion_exp = 1.0;
    const std::vector<int> span{1000, 100000};
    const auto decay = asymptotic_probe(sc, sys, broken, Oscillator::common, span);
    const bool decays = decay.sinr[1] <= 0.5 * decay.sinr[0];

    return {converges && decays,
            fmt("law held: SINR(1e5)/SINR(1e4) = %.4f; tau1 = 1: SINR(1e5)/SINR(1e3) = %.4f (needs <= 0.5)",
                held.last_ratio, decay.sinr[1] / decay.sinr[0])};
}

Verdict sum_rate_orderings(std::string& notes) {
    ExperimentConfig config;
    config.antennas = {100, 400};
    const auto rows = run_sweep(config);
    auto rate = [&](int n, Oscillator o, HardwareMode h) {
        for (const auto& r : rows) {
            if (r.antennas == n && r.oscillator == o && r.hardware == h) return r.sum_rate;
        }
        throw std::logic_error("missing sweep point");
    };
    bool a = true, b = true;
    for (int n : {100, 400}) {
        for (auto o : {Oscillator::common, Oscillator::separate}) a &= rate(n, o, HardwareMode::ideal) > rate(n, o, HardwareMode::fixed);
        for (auto h : {HardwareMode::fixed, HardwareMode::scaled}) {
            b &= rate(n, Oscillator::separate, h) >= rate(n, Oscillator::common, h);
        }
    }
    auto gap = [&](int n) {
        return rate(n, Oscillator::separate, HardwareMode::fixed) - rate(n, Oscillator::separate, HardwareMode::scaled);
    };
    const bool c = gap(400) < gap(100);

    // where the scaled curve turns back towards the fixed one on this layout
    ExperimentConfig wide = config;
    wide.antennas = {1000, 4000, 20000, 100000};
    wide.oscillators = {Oscillator::separate};
    wide.hardware = {HardwareMode::fixed, HardwareMode::scaled};
    const auto far = run_sweep(wide);
    notes = "    SLO fixed - scaled gap:";
    notes += fmt(" N=100 %.4f, N=400 %.4f", gap(100), gap(400));
    for (std::size_t i = 0; i + 1 < far.size(); i += 2) {
        notes += fmt(", N=%.0f %.4f", far[i].antennas, far[i].sum_rate - far[i + 1].sum_rate);
    }

    return {a && b && c, std::string("(a) ideal > fixed ") + (a ? "yes" : "no") + ", (b) SLO >= CLO " +
                             (b ? "yes" : "no") + ", (c) gap shrinks 100 -> 400 " + (c ? "yes" : "no") +
                             fmt(" (%.4f -> %.4f)", gap(100), gap(400))};
}

Verdict circuit_anchors() {
    const bool bits = adc_scaled_bits(8.0, 256.0, 0.5) == 6.0;
    const double nf0 = 2.0;
    const bool nf = lna_scaled_nf(nf0, 100.0, 0.5) - nf0 == 10.0;
    double worst = 0.0;
    for (double tau : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        for (double n : {1.0, 10.0, 100.0, 1000.0}) {
            const double ratio = total_adc_power(10.0 * n, 16.0, tau, 1.0) / total_adc_power(n, 16.0, tau, 1.0);
            worst = std::max(worst, rel_diff(ratio, std::pow(10.0, 1.0 - tau)));
        }
    }
    return {bits && nf && worst <= 1e-12,
            fmt("2-bit cut %.0f, +10 dB %.0f, ADC decade ratio max rel error %.3g", bits, nf, worst)};
}

Verdict wiener_statistics() {
    Scenario sc(1, 1);
    sc.attenuation(0, 0, 0) = 1.0;
    sc.power(0, 0) = 1.0;
    sc.pilot(0, 0) = 0;
    const double delta = 1.6e-4;
    const SystemConfig cfg{1, 1, 100, 1000, 1, 1.0};
    const auto slo = simulate_block(sc, cfg, {delta, 0.0, 1.0, Oscillator::separate}, 7);
    double sum = 0.0, sq = 0.0;
    long n = 0;
    for (int a = 0; a < cfg.antennas; ++a) {
        double prev = 0.0;
        for (int t = 0; t < cfg.coherence_length; ++t) {
            const double step = slo.phases[0](a, t) - prev;
            prev = slo.phases[0](a, t);
            sum += step;
            sq += step * step;
            ++n;
        }
    }
    const double mean = sum / static_cast<double>(n);
    const double var = (sq - static_cast<double>(n) * mean * mean) / static_cast<double>(n - 1);
    const bool var_ok = std::abs(var / delta - 1.0) <= 0.02;

    const auto clo = simulate_block(sc, cfg, {delta, 0.0, 1.0, Oscillator::common}, 7);
    bool identical = true;
    for (int a = 1; a < cfg.antennas; ++a) {
        identical &= std::memcmp(clo.phases[0].row(a).eval().data(), clo.phases[0].row(0).eval().data(),
                                 sizeof(double) * cfg.coherence_length) == 0;
    }
    return {var_ok && identical,
            fmt("%.0f innovations, variance/delta = %.4f, CLO rows bitwise identical %.0f", n, var / delta, identical)};
}

Verdict sweep_determinism() {
    const fs::path dir = fs::temp_directory_path() / "mimohw_acceptance";
    fs::remove_all(dir);
    auto run = [](std::vector<std::string> args) {
        args.insert(args.begin(), "mimohw");
        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    };
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    };
    const std::string manifest = (dir / "first" / "manifest.ini").string();
    const int c0 = run({"sweep", "--out", (dir / "first").string()});
    const int c1 = run({"sweep", "--config", manifest, "--out", (dir / "one").string(), "--workers", "1"});
    const int c2 = run({"sweep", "--config", manifest, "--out", (dir / "four").string(), "--workers", "4"});
    const int c3 = run({"sweep", "--config", manifest, "--out", (dir / "again").string(), "--workers", "4"});
    const std::string a = slurp(dir / "first" / "sweep.csv");
    const bool ok = c0 == 0 && c1 == 0 && c2 == 0 && c3 == 0 && !a.empty() && a == slurp(dir / "one" / "sweep.csv") &&
                    a == slurp(dir / "four" / "sweep.csv") && a == slurp(dir / "again" / "sweep.csv");
    std::size_t lines = 0;
    for (char ch : a) lines += ch == '\n';
    fs::remove_all(dir);
    return {ok, fmt("%.0f CSV lines, byte-identical across 4 runs with 1 and 4 workers: %.0f", lines, ok)};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Verdict()> run;
    };
    std::string notes;
    const std::vector<Criterion> criteria{
        {"oracle equivalence", oracle_equivalence},
        {"drift-free degeneracy", drift_free_degeneracy},
        {"ideal-hardware reduction", ideal_reduction},
        {"scaling-law limits", scaling_limits},
        {"sum-rate orderings", [&notes] { return sum_rate_orderings(notes); }},
        {"circuit anchors", circuit_anchors},
        {"phase-drift statistics", wiener_statistics},
        {"sweep determinism", sweep_determinism},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[i].run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += !v.pass;
        std::printf("[%s] %zu %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                    v.detail.c_str(), secs);
        if (i == 4 && !notes.empty()) std::printf("%s\n", notes.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
