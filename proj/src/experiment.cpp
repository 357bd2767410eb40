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

#include "mimohw/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "mimohw/format.hpp"
#include "mimohw/monte_carlo.hpp"
#include "mimohw/random.hpp"

namespace mimohw {

namespace {

constexpr const char* kCodeVersion = "mimohw 1.0.0";

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r\"");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\"");
    return s.substr(first, last - first + 1);
}

template <typename Int>
Int parse_integer(const std::string& key, const std::string& text) {
    const std::string v = trim(text);
    Int value{};
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), value);
    if (ec != std::errc{} || ptr != v.data() + v.size()) throw ConfigError(key, "expected an integer, got '" + v + "'");
    return value;
}

double parse_real(const std::string& key, const std::string& text) {
    try {
        return parse_number(trim(text));
    } catch (const std::invalid_argument&) {
        throw ConfigError(key, "expected a number, got '" + trim(text) + "'");
    }
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    for (auto field : split_fields(text)) {
        auto item = trim(std::string(field));
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<Oscillator> parse_oscillators(const std::string& key, const std::string& text) {
    const std::string v = trim(text);
    if (v == "both") return {Oscillator::common, Oscillator::separate};
    std::vector<Oscillator> out;
    for (const auto& item : split_list(v)) {
        try {
            out.push_back(parse_oscillator(item));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(key, e.what());
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<HardwareMode> parse_hardware_list(const std::string& key, const std::string& text) {
    const std::string v = trim(text);
    if (v == "all") return {HardwareMode::ideal, HardwareMode::fixed, HardwareMode::scaled};
    std::vector<HardwareMode> out;
    for (const auto& item : split_list(v)) {
        try {
            out.push_back(parse_hardware_mode(item));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(key, e.what());
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string& key, const std::string& value)>;

template <typename Int>
Setter int_field(Int ExperimentConfig::*field) {
    return [field](ExperimentConfig& c, const std::string& k, const std::string& v) {
        c.*field = parse_integer<Int>(k, v);
    };
}

template <typename Getter>
Setter real_at(Getter get) {
    return [get](ExperimentConfig& c, const std::string& k, const std::string& v) { get(c) = parse_real(k, v); };
}

template <typename Getter>
Setter int_at(Getter get) {
    return [get](ExperimentConfig& c, const std::string& k, const std::string& v) {
        get(c) = parse_integer<std::remove_reference_t<decltype(get(c))>>(k, v);
    };
}

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"grid", int_at([](ExperimentConfig& c) -> int& { return c.geometry.grid; })},
        {"cell_side", real_at([](ExperimentConfig& c) -> double& { return c.geometry.cell_side; })},
        {"min_distance", real_at([](ExperimentConfig& c) -> double& { return c.geometry.min_distance; })},
        {"K", int_at([](ExperimentConfig& c) -> int& { return c.geometry.sectors_per_cell; })},
        {"B", int_field(&ExperimentConfig::pilot_length)},
        {"T", int_field(&ExperimentConfig::coherence_length)},
        {"power_dbm", real_at([](ExperimentConfig& c) -> double& { return c.power_dbm; })},
        {"noise_dbm", real_at([](ExperimentConfig& c) -> double& { return c.noise_dbm; })},
        {"shadow_std", real_at([](ExperimentConfig& c) -> double& { return c.shadow.std_dev; })},
        {"kappa0_sq", real_at([](ExperimentConfig& c) -> double& { return c.exponents.distortion0_sq; })},
        {"xi0", real_at([](ExperimentConfig& c) -> double& { return c.exponents.noise_amplification0; })},
        {"delta0", real_at([](ExperimentConfig& c) -> double& { return c.exponents.drift_variance0; })},
        {"tau1", real_at([](ExperimentConfig& c) -> double& { return c.exponents.distortion_exp; })},
        {"tau2", real_at([](ExperimentConfig& c) -> double& { return c.exponents.noise_exp; })},
        {"tau3", real_at([](ExperimentConfig& c) -> double& { return c.exponents.drift_exp; })},
        {"antennas",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.antennas.clear();
             for (const auto& item : split_list(v)) c.antennas.push_back(parse_integer<int>(k, item));
         }},
        {"oscillator",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.oscillators = parse_oscillators(k, v); }},
        {"hardware",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.hardware = parse_hardware_list(k, v); }},
        {"mc", int_field(&ExperimentConfig::mc_realizations)},
        {"mc_max_antennas", int_field(&ExperimentConfig::mc_max_antennas)},
        {"seed", int_field(&ExperimentConfig::seed)},
        {"workers", int_field(&ExperimentConfig::workers)},
        {"out", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.out_dir = trim(v); }},
        {"adc_coefficient",
         real_at([](ExperimentConfig& c) -> double& { return c.circuits.adc.power_coefficient; })},
        {"lna_gain", real_at([](ExperimentConfig& c) -> double& { return c.circuits.lna.gain; })},
        {"lna_fom", real_at([](ExperimentConfig& c) -> double& { return c.circuits.lna.figure_of_merit; })},
        {"lo_fom", real_at([](ExperimentConfig& c) -> double& { return c.circuits.lo.figure_of_merit; })},
        {"carrier_hz", real_at([](ExperimentConfig& c) -> double& { return c.circuits.lo.carrier_hz; })},
        {"symbol_time_s", real_at([](ExperimentConfig& c) -> double& { return c.circuits.lo.symbol_time_s; })},
        {"verify_cells", int_at([](ExperimentConfig& c) -> int& { return c.verify.num_cells; })},
        {"verify_users", int_at([](ExperimentConfig& c) -> int& { return c.verify.users_per_cell; })},
        {"verify_antennas", int_at([](ExperimentConfig& c) -> int& { return c.verify.antennas; })},
        {"verify_B", int_at([](ExperimentConfig& c) -> int& { return c.verify.pilot_length; })},
        {"verify_T", int_at([](ExperimentConfig& c) -> int& { return c.verify.coherence_length; })},
        {"verify_noise", real_at([](ExperimentConfig& c) -> double& { return c.verify.noise_power; })},
        {"verify_delta", real_at([](ExperimentConfig& c) -> double& { return c.verify.drift_variance; })},
        {"verify_kappa_sq", real_at([](ExperimentConfig& c) -> double& { return c.verify.distortion_sq; })},
        {"verify_xi", real_at([](ExperimentConfig& c) -> double& { return c.verify.noise_amplification; })},
        {"verify_mc", int_at([](ExperimentConfig& c) -> std::int64_t& { return c.verify.realizations; })},
        // informational, written into manifests
        {"code_version", [](ExperimentConfig&, const std::string&, const std::string&) {}},
    };
    return table;
}

std::string join_ints(const std::vector<int>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + std::to_string(values[i]);
    return out;
}

template <typename Work>
void run_pool(std::size_t count, int workers, Work&& work) {
    const int threads = std::max(1, std::min<int>(workers, static_cast<int>(count)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) work(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) work(i);
        });
    }
    for (auto& th : pool) th.join();
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::filesystem::filesystem_error("cannot create output directory", dir, ec);
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::filesystem::filesystem_error("cannot write", path,
                                                std::make_error_code(std::errc::permission_denied));
    }
    return out;
}

}  // namespace

std::string to_string(HardwareMode mode) {
    switch (mode) {
        case HardwareMode::ideal: return "ideal";
        case HardwareMode::fixed: return "fixed";
        case HardwareMode::scaled: return "scaled";
    }
    return "?";
}

HardwareMode parse_hardware_mode(const std::string& name) {
    if (name == "ideal") return HardwareMode::ideal;
    if (name == "fixed") return HardwareMode::fixed;
    if (name == "scaled") return HardwareMode::scaled;
    throw std::invalid_argument("unknown hardware mode '" + name + "'");
}

SystemConfig ExperimentConfig::system_config(int n) const {
    SystemConfig s;
    s.num_cells = geometry.num_cells();
    s.users_per_cell = geometry.sectors_per_cell;
    s.antennas = n;
    s.coherence_length = coherence_length;
    s.pilot_length = pilot_length;
    s.noise_power = dbm_per_hz_to_linear(noise_dbm);
    return s;
}

HardwareProfile ExperimentConfig::profile(HardwareMode mode, Oscillator oscillator, int n) const {
    switch (mode) {
        case HardwareMode::ideal: return HardwareProfile::ideal(oscillator);
        case HardwareMode::fixed:
            return {exponents.drift_variance0, exponents.distortion0_sq, exponents.noise_amplification0, oscillator};
        case HardwareMode::scaled: return apply_scaling(exponents, n, oscillator);
    }
    throw std::logic_error("unreachable hardware mode");
}

Scenario ExperimentConfig::scenario() const {
    return build_scenario(geometry, shadow, dbm_per_hz_to_linear(power_dbm), seed);
}

ExperimentConfig parse_config(std::istream& in) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("", std::string("malformed config: ") + e.message() + " (line " +
                                  std::to_string(e.line()) + ")");
    }

    ExperimentConfig config;
    auto apply = [&config](const std::string& key, const std::string& value) {
        const auto& table = setters();
        const auto it = table.find(key);
        if (it == table.end()) {
            config.warnings.push_back("unknown key '" + key + "' ignored");
            return;
        }
        it->second(config, key, value);
    };
    for (const auto& [key, node] : tree) {
        if (node.empty()) {
            apply(key, node.data());
        } else {
            for (const auto& [sub_key, sub_node] : node) apply(sub_key, sub_node.data());
        }
    }
    validate_config(config);
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot read config file '" + path + "'");
    return parse_config(in);
}

void validate_config(const ExperimentConfig& c) {
    if (auto errors = validate(c.geometry); !errors.empty()) throw ConfigError("grid/cell_side/min_distance/K", errors.front());
    if (c.pilot_length < 1) throw ConfigError("B", "must be >= 1");
    if (!(c.pilot_length < c.coherence_length)) throw ConfigError("T", "B < T violated");
    if (c.geometry.sectors_per_cell > c.pilot_length) throw ConfigError("K", "K <= B violated");
    if (!(c.shadow.std_dev >= 0.0)) throw ConfigError("shadow_std", "must be >= 0");
    if (!std::isfinite(c.power_dbm)) throw ConfigError("power_dbm", "must be finite");
    if (!std::isfinite(c.noise_dbm)) throw ConfigError("noise_dbm", "must be finite");
    if (!(c.exponents.distortion0_sq >= 0.0)) throw ConfigError("kappa0_sq", "must be >= 0");
    if (!(c.exponents.noise_amplification0 >= 1.0)) throw ConfigError("xi0", "must be >= 1");
    if (!(c.exponents.drift_variance0 >= 0.0)) throw ConfigError("delta0", "must be >= 0");
    if (!(c.exponents.distortion_exp >= 0.0)) throw ConfigError("tau1", "must be >= 0");
    if (!(c.exponents.noise_exp >= 0.0)) throw ConfigError("tau2", "must be >= 0");
    if (!(c.exponents.drift_exp >= 0.0)) throw ConfigError("tau3", "must be >= 0");
    if (c.antennas.empty()) throw ConfigError("antennas", "at least one antenna count is required");
    for (int n : c.antennas) {
        if (n < 1) throw ConfigError("antennas", "antenna counts must be >= 1");
    }
    if (c.oscillators.empty()) throw ConfigError("oscillator", "no oscillator mode selected");
    if (c.hardware.empty()) throw ConfigError("hardware", "no hardware mode selected");
    if (c.mc_realizations < 0 || c.mc_realizations == 1) throw ConfigError("mc", "must be 0 (off) or >= 2");
    if (c.workers < 1) throw ConfigError("workers", "must be >= 1");
    if (c.out_dir.empty()) throw ConfigError("out", "must not be empty");
    const auto& v = c.verify;
    if (v.num_cells < 1 || v.users_per_cell < 1 || v.antennas < 1) {
        throw ConfigError("verify_cells/verify_users/verify_antennas", "must be >= 1");
    }
    if (v.users_per_cell > v.pilot_length) throw ConfigError("verify_users", "K <= B violated");
    if (!(v.pilot_length < v.coherence_length)) throw ConfigError("verify_T", "B < T violated");
    if (!(v.noise_power > 0.0)) throw ConfigError("verify_noise", "must be > 0");
    if (v.realizations < 2) throw ConfigError("verify_mc", "must be >= 2");
    if (!(v.drift_variance >= 0.0)) throw ConfigError("verify_delta", "must be >= 0");
    if (!(v.distortion_sq >= 0.0)) throw ConfigError("verify_kappa_sq", "must be >= 0");
    if (!(v.noise_amplification >= 1.0)) throw ConfigError("verify_xi", "must be >= 1");
}

void write_manifest(std::ostream& out, const ExperimentConfig& c) {
    auto kv = [&out](const char* key, const std::string& value) { out << key << " = " << value << '\n'; };
    auto num = [&kv](const char* key, double value) { kv(key, format_number(value)); };

    out << "; resolved run configuration; pass back with --config to replay\n";
    kv("code_version", kCodeVersion);
    kv("seed", std::to_string(c.seed));
    kv("workers", std::to_string(c.workers));
    kv("out", c.out_dir);
    out << "\n[scenario]\n";
    kv("grid", std::to_string(c.geometry.grid));
    num("cell_side", c.geometry.cell_side);
    num("min_distance", c.geometry.min_distance);
    kv("K", std::to_string(c.geometry.sectors_per_cell));
    kv("B", std::to_string(c.pilot_length));
    kv("T", std::to_string(c.coherence_length));
    num("power_dbm", c.power_dbm);
    num("noise_dbm", c.noise_dbm);
    num("shadow_std", c.shadow.std_dev);
    out << "\n[hardware]\n";
    num("kappa0_sq", c.exponents.distortion0_sq);
    num("xi0", c.exponents.noise_amplification0);
    num("delta0", c.exponents.drift_variance0);
    num("tau1", c.exponents.distortion_exp);
    num("tau2", c.exponents.noise_exp);
    num("tau3", c.exponents.drift_exp);
    out << "\n[sweep]\n";
    kv("antennas", join_ints(c.antennas));
    std::string osc;
    for (auto o : c.oscillators) osc += (osc.empty() ? "" : ",") + to_string(o);
    kv("oscillator", osc);
    std::string hw;
    for (auto h : c.hardware) hw += (hw.empty() ? "" : ",") + to_string(h);
    kv("hardware", hw);
    kv("mc", std::to_string(c.mc_realizations));
    kv("mc_max_antennas", std::to_string(c.mc_max_antennas));
    out << "\n[circuits]\n";
    num("adc_coefficient", c.circuits.adc.power_coefficient);
    num("lna_gain", c.circuits.lna.gain);
    num("lna_fom", c.circuits.lna.figure_of_merit);
    num("lo_fom", c.circuits.lo.figure_of_merit);
    num("carrier_hz", c.circuits.lo.carrier_hz);
    num("symbol_time_s", c.circuits.lo.symbol_time_s);
    out << "\n[verify]\n";
    kv("verify_cells", std::to_string(c.verify.num_cells));
    kv("verify_users", std::to_string(c.verify.users_per_cell));
    kv("verify_antennas", std::to_string(c.verify.antennas));
    kv("verify_B", std::to_string(c.verify.pilot_length));
    kv("verify_T", std::to_string(c.verify.coherence_length));
    num("verify_noise", c.verify.noise_power);
    num("verify_delta", c.verify.drift_variance);
    num("verify_kappa_sq", c.verify.distortion_sq);
    num("verify_xi", c.verify.noise_amplification);
    kv("verify_mc", std::to_string(c.verify.realizations));
}

bool SweepRow::operator<(const SweepRow& o) const {
    if (antennas != o.antennas) return antennas < o.antennas;
    if (oscillator != o.oscillator) return oscillator < o.oscillator;
    return hardware < o.hardware;
}

void run_sweep(const ExperimentConfig& config, std::vector<SweepRow>& rows) {
    validate_config(config);
    const Scenario scenario = config.scenario();

    struct Point {
        int antennas;
        Oscillator oscillator;
        HardwareMode hardware;
    };
    std::vector<Point> points;
    for (int n : config.antennas) {
        for (auto osc : config.oscillators) {
            for (auto hw : config.hardware) points.push_back({n, osc, hw});
        }
    }

    std::vector<std::optional<SweepRow>> results(points.size());
    std::exception_ptr failure;
    std::mutex failure_mutex;
    run_pool(points.size(), config.workers, [&](std::size_t i) {
        {
            std::lock_guard lock(failure_mutex);
            if (failure) return;
        }
        try {
            const Point& pt = points[i];
            const SystemConfig system = config.system_config(pt.antennas);
            const HardwareProfile profile = config.profile(pt.hardware, pt.oscillator, pt.antennas);
            const EstimatorCache cache(scenario, system, profile);
            SweepRow row{pt.antennas, pt.oscillator, pt.hardware, closed_form_rates(cache, system).sum_rate, {}};
            if (config.mc_realizations > 0 && pt.antennas <= config.mc_max_antennas) {
                MonteCarloOptions mc;
                mc.realizations = config.mc_realizations;
                mc.seed = mix_seed(config.seed, 0x6d63);
                row.mc_sum_rate = empirical_rate(scenario, system, profile, mc).sum_rate;
            }
            results[i] = row;
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    });

    rows.clear();
    for (auto& r : results) {
        if (r) rows.push_back(*r);
    }
    std::sort(rows.begin(), rows.end());
    if (failure) std::rethrow_exception(failure);
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config) {
    std::vector<SweepRow> rows;
    run_sweep(config, rows);
    return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, const ExperimentConfig& config) {
    const bool with_mc = config.mc_realizations > 0;
    out << "N,mode,hardware,sum_rate_bits_per_use,seed";
    if (with_mc) out << ",mc_sum_rate_bits_per_use";
    out << '\n';
    for (const auto& r : rows) {
        out << r.antennas << ',' << to_string(r.oscillator) << ',' << to_string(r.hardware) << ','
            << format_number(r.sum_rate) << ',' << config.seed;
        if (with_mc) {
            out << ',';
            if (r.mc_sum_rate) out << format_number(*r.mc_sum_rate);
        }
        out << '\n';
    }
}

void emit_results(const std::vector<SweepRow>& rows, const ExperimentConfig& config) {
    ensure_dir(config.out_dir);
    const std::filesystem::path dir(config.out_dir);
    {
        auto csv = open_output(dir / "sweep.csv");
        write_sweep_csv(csv, rows, config);
        if (!csv) throw std::filesystem::filesystem_error("write failed", dir / "sweep.csv", std::make_error_code(std::errc::io_error));
    }
    auto manifest = open_output(dir / "manifest.ini");
    write_manifest(manifest, config);
    if (!manifest) throw std::filesystem::filesystem_error("write failed", dir / "manifest.ini", std::make_error_code(std::errc::io_error));
}

std::vector<VerifyRow> run_verify(const ExperimentConfig& config) {
    validate_config(config);
    const VerifySetup& v = config.verify;
    const Scenario scenario = random_scenario(v.num_cells, v.users_per_cell, config.seed);
    SystemConfig system{v.num_cells, v.users_per_cell, v.antennas, v.coherence_length, v.pilot_length, v.noise_power};
    const std::vector<MomentTarget> targets{{0, 0, v.pilot_length + 1}, {0, 0, v.coherence_length}};

    std::vector<VerifyRow> rows;
    for (auto osc : config.oscillators) {
        const HardwareProfile profile{v.drift_variance, v.distortion_sq, v.noise_amplification, osc};
        const EstimatorCache cache(scenario, system, profile);
        MonteCarloOptions mc;
        mc.realizations = v.realizations;
        mc.seed = mix_seed(config.seed, osc == Oscillator::common ? 11 : 12);
        mc.workers = config.workers;
        const auto empirical = estimate_moments(scenario, system, profile, targets, mc);
        for (std::size_t i = 0; i < targets.size(); ++i) {
            const int t = targets[i].t;
            const MomentSet exact = mrc_moments(cache, v.antennas, 0, 0, t);
            const auto& em = empirical[i];
            rows.push_back({osc, t, "filter_norm", exact.filter_norm, em.mean.filter_norm, em.std_error.filter_norm});
            rows.push_back({osc, t, "signal", exact.signal, em.mean.signal, em.std_error.signal});
            rows.push_back({osc, t, "distortion", exact.distortion, em.mean.distortion, em.std_error.distortion});
            for (int l = 0; l < v.num_cells; ++l) {
                for (int m = 0; m < v.users_per_cell; ++m) {
                    const std::size_t idx = static_cast<std::size_t>(l) * v.users_per_cell + m;
                    rows.push_back({osc, t, "interference_" + std::to_string(l) + "_" + std::to_string(m),
                                    exact.interference[idx], em.mean.interference[idx], em.std_error.interference[idx]});
                }
            }
        }
    }
    return rows;
}

void write_verify_csv(std::ostream& out, const std::vector<VerifyRow>& rows) {
    out << "mode,t,quantity,closed_form,mc_mean,mc_std_error,z_score\n";
    for (const auto& r : rows) {
        out << to_string(r.oscillator) << ',' << r.t << ',' << r.quantity << ',' << format_number(r.closed_form) << ','
            << format_number(r.mc_mean) << ',' << format_number(r.mc_std_error) << ',' << format_number(r.z_score())
            << '\n';
    }
}

std::vector<ScalingRow> run_scaling(const ExperimentConfig& config) {
    validate_config(config);
    const Scenario scenario = config.scenario();
    const SystemConfig system = config.system_config(1);
    const std::vector<double> additive{0.0, 0.25, 0.5, 0.75, 1.0};
    const std::vector<double> drift{0.0, 1.0, 6.0, 12.0, 20.0};
    const std::vector<int> probe_n{10000, 100000};

    std::vector<ScalingRow> rows;
    for (auto osc : config.oscillators) {
        for (double t1 : additive) {
            for (double t2 : additive) {
                for (double t3 : drift) {
                    ScalingExponents e = config.exponents;
                    e.distortion_exp = t1;
                    e.noise_exp = t2;
                    e.drift_exp = t3;
                    ScalingRow row{osc, t1, t2, t3, scaling_law_satisfied(e, system, osc), 0.0};
                    row.probe_ratio = asymptotic_probe(scenario, system, e, osc, probe_n).last_ratio;
                    rows.push_back(row);
                }
            }
        }
    }
    return rows;
}

void write_scaling_csv(std::ostream& out, const std::vector<ScalingRow>& rows) {
    out << "mode,tau1,tau2,tau3,satisfied,probe_ratio\n";
    for (const auto& r : rows) {
        out << to_string(r.oscillator) << ',' << format_number(r.tau1) << ',' << format_number(r.tau2) << ','
            << format_number(r.tau3) << ',' << (r.satisfied ? "true" : "false") << ',' << format_number(r.probe_ratio)
            << '\n';
    }
}

std::vector<PowerRow> run_power(const ExperimentConfig& config) {
    validate_config(config);
    CircuitSpecs specs = config.circuits;
    // the circuit operating point is the one implied by the initial imperfections
    specs.adc.bits = -0.5 * std::log2(config.exponents.distortion0_sq);
    specs.lna.noise_figure_db = xi_to_noise_figure(config.exponents.noise_amplification0);
    specs.lo.zeta = lo_zeta_for_variance(config.exponents.drift_variance0, specs.lo.carrier_hz, specs.lo.symbol_time_s);

    std::vector<PowerRow> rows;
    for (auto osc : config.oscillators) {
        auto part = power_report(config.antennas, specs, config.exponents, osc);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    return rows;
}

void write_power_csv(std::ostream& out, const std::vector<PowerRow>& rows) {
    out << "N,component,mode,total_power\n";
    for (const auto& r : rows) {
        out << r.antennas << ',' << r.component << ',' << to_string(r.oscillator) << ','
            << format_number(r.total_power) << '\n';
    }
}

}  // namespace mimohw
