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

#include "mimohw/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mimohw/experiment.hpp"
#include "mimohw/format.hpp"

namespace mimohw {

namespace {

struct Overrides {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> mode;
    std::optional<std::string> hardware;
    std::optional<std::int64_t> mc;
    std::optional<int> workers;
};

void add_common_options(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config_path, "INI-style key = value configuration file");
    cmd->add_option("--seed", o.seed, "scenario and Monte Carlo master seed");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--mode", o.mode, "oscillator: clo, slo or both");
    cmd->add_option("--hardware", o.hardware, "comma list of ideal, fixed, scaled (or all)");
    cmd->add_option("--mc", o.mc, "Monte Carlo realizations for the oracle column (0 = off)");
    cmd->add_option("--workers", o.workers, "worker threads");
}

ExperimentConfig resolve(const Overrides& o, std::ostream& err) {
    ExperimentConfig config = o.config_path.empty() ? ExperimentConfig{} : load_config(o.config_path);
    for (const auto& w : config.warnings) err << "warning: " << w << '\n';

    // command-line flags take precedence over the file; reuse the file parser for their syntax
    std::ostringstream flags;
    if (o.seed) flags << "seed = " << *o.seed << '\n';
    if (o.out) flags << "out = " << *o.out << '\n';
    if (o.mode) flags << "oscillator = " << *o.mode << '\n';
    if (o.hardware) flags << "hardware = " << *o.hardware << '\n';
    if (o.mc) flags << "mc = " << *o.mc << '\n';
    if (o.workers) flags << "workers = " << *o.workers << '\n';
    if (!flags.str().empty()) {
        std::istringstream in(flags.str());
        const ExperimentConfig patch = parse_config(in);
        if (o.seed) config.seed = patch.seed;
        if (o.out) config.out_dir = patch.out_dir;
        if (o.mode) config.oscillators = patch.oscillators;
        if (o.hardware) config.hardware = patch.hardware;
        if (o.mc) config.mc_realizations = patch.mc_realizations;
        if (o.workers) config.workers = patch.workers;
    }
    validate_config(config);
    return config;
}

std::ofstream open_in_out_dir(const ExperimentConfig& config, const std::string& name) {
    std::filesystem::create_directories(config.out_dir);
    const auto path = std::filesystem::path(config.out_dir) / name;
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw std::filesystem::filesystem_error("cannot write", path, std::make_error_code(std::errc::permission_denied));
    }
    return file;
}

int cmd_sweep(const ExperimentConfig& config, std::ostream& out) {
    std::vector<SweepRow> rows;
    try {
        run_sweep(config, rows);
    } catch (...) {
        emit_results(rows, config);
        throw;
    }
    emit_results(rows, config);
    for (const auto& r : rows) {
        out << "N=" << r.antennas << ' ' << to_string(r.oscillator) << ' ' << to_string(r.hardware)
            << " sum_rate=" << format_number(r.sum_rate);
        if (r.mc_sum_rate) out << " mc=" << format_number(*r.mc_sum_rate);
        out << '\n';
    }
    out << "wrote " << (std::filesystem::path(config.out_dir) / "sweep.csv").string() << '\n';
    return 0;
}

int cmd_verify(const ExperimentConfig& config, std::ostream& out) {
    const auto rows = run_verify(config);
    {
        auto file = open_in_out_dir(config, "verify.csv");
        write_verify_csv(file, rows);
    }
    {
        auto manifest = open_in_out_dir(config, "manifest.ini");
        write_manifest(manifest, config);
    }
    double worst = 0.0;
    int outside = 0;
    for (const auto& r : rows) {
        worst = std::max(worst, std::abs(r.z_score()));
        outside += std::abs(r.z_score()) > 3.0;
    }
    out << rows.size() << " moments compared, " << outside << " outside 3 standard errors, max |z| = "
        << format_number(worst) << '\n';
    return 0;
}

int cmd_power(const ExperimentConfig& config, std::ostream& out) {
    const auto rows = run_power(config);
    auto file = open_in_out_dir(config, "power.csv");
    write_power_csv(file, rows);
    out << "wrote " << rows.size() << " power rows\n";
    return 0;
}

int cmd_scaling(const ExperimentConfig& config, std::ostream& out) {
    const auto rows = run_scaling(config);
    auto file = open_in_out_dir(config, "scaling.csv");
    write_scaling_csv(file, rows);
    int ok = 0;
    for (const auto& r : rows) ok += r.satisfied;
    out << rows.size() << " exponent combinations, " << ok << " satisfy the scaling law\n";
    return 0;
}

std::string one_line(std::string text) {
    for (char& c : text) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    while (!text.empty() && text.back() == ' ') text.pop_back();
    return text;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Uplink rates of massive MIMO arrays with imperfect hardware"};
    app.require_subcommand(1);
    Overrides overrides;
    auto* sweep = app.add_subcommand("sweep", "network sum rate versus antenna count");
    auto* verify = app.add_subcommand("verify", "closed-form moments against the Monte Carlo oracle");
    auto* power = app.add_subcommand("power", "ADC/LNA/LO circuit power versus antenna count");
    auto* scaling = app.add_subcommand("scaling", "scaling-law feasibility over an exponent grid");
    for (auto* cmd : {sweep, verify, power, scaling}) add_common_options(cmd, overrides);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error[usage]: " << one_line(e.what()) << '\n';
        return 2;
    }

    try {
        const ExperimentConfig config = resolve(overrides, err);
        if (sweep->parsed()) return cmd_sweep(config, out);
        if (verify->parsed()) return cmd_verify(config, out);
        if (power->parsed()) return cmd_power(config, out);
        return cmd_scaling(config, out);
    } catch (const ConfigError& e) {
        err << "error[config]: " << one_line(e.what()) << '\n';
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error[io]: " << one_line(e.what()) << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        err << "error[invalid-input]: " << one_line(e.what()) << '\n';
        return 4;
    } catch (const std::domain_error& e) {
        err << "error[domain]: " << one_line(e.what()) << '\n';
        return 4;
    } catch (const std::exception& e) {
        err << "error[runtime]: " << one_line(e.what()) << '\n';
        return 1;
    }
}

}  // namespace mimohw
