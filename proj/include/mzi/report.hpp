// Copyright 2026 The mzisim Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Executes a scenario and assembles the JSON report plus CSV series.
 */

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "mzi/errors.hpp"
#include "mzi/json_io.hpp"
#include "mzi/pathsum.hpp"
#include "mzi/scenario.hpp"
#include "mzi/spectra.hpp"
#include "mzi/weakval.hpp"

namespace mzi {

enum class Command { Validate, Paths, Weak, Pointer, Spectrum, Block };

inline std::optional<Command> command_from_string(std::string_view name) {
    if (name == "validate") return Command::Validate;
    if (name == "paths") return Command::Paths;
    if (name == "weak") return Command::Weak;
    if (name == "pointer") return Command::Pointer;
    if (name == "spectrum") return Command::Spectrum;
    if (name == "block") return Command::Block;
    return std::nullopt;
}

constexpr std::string_view to_string(Command c) noexcept {
    switch (c) {
    case Command::Validate:
        return "validate";
    case Command::Paths:
        return "paths";
    case Command::Weak:
        return "weak";
    case Command::Pointer:
        return "pointer";
    case Command::Spectrum:
        return "spectrum";
    case Command::Block:
        return "block";
    }
    return "unknown";
}

/// Process exit status for each failure class.
enum class ExitCode : int { Ok = 0, Schema = 2, Network = 3, Runtime = 4 };

struct CsvFile {
    std::string name;
    std::string content;
};

struct RunResult {
    json_io::ordered_json report;
    std::vector<CsvFile> csv;
};

namespace report_detail {

using json_io::complex_to_json;
using json_io::format_double;
using json_io::ordered_json;

inline ordered_json peaks_to_json(const std::vector<SitePeak> &peaks) {
    ordered_json out = ordered_json::array();
    for (const auto &p : peaks) {
        out.push_back({{"site", p.site},
                       {"bin", p.bin},
                       {"power", p.power},
                       {"classification", std::string(to_string(p.classification))}});
    }
    return out;
}

inline std::string timeseries_csv(const Readout &r) {
    std::string out = "k,xbar,rate\n";
    for (std::size_t k = 0; k < r.xbar.size(); ++k) {
        out += std::to_string(k) + "," + format_double(r.xbar[k]) + "," +
               format_double(r.rate[k]) + "\n";
    }
    return out;
}

inline std::string spectrum_csv(const std::vector<double> &power) {
    std::string out = "bin,power\n";
    for (std::size_t k = 1; k < power.size(); ++k) {
        out += std::to_string(k) + "," + format_double(power[k]) + "\n";
    }
    return out;
}

inline ordered_json spectral_to_json(const SpectralReport &r, double sigma, int samples) {
    return {{"sigma", sigma},
            {"samples", samples},
            {"noise_floor", r.noise_floor},
            {"mean_rate", r.mean_rate},
            {"peaks", peaks_to_json(r.peaks)}};
}

[[noreturn]] inline void wrong_experiment(Command command, const Experiment &e,
                                          std::string_view wanted) {
    throw Error(ErrorCode::SchemaError, "/experiment/type",
                "subcommand '" + std::string(to_string(command)) + "' needs a '" +
                    std::string(wanted) + "' experiment, scenario has '" +
                    std::string(experiment_name(e)) + "'");
}

inline std::vector<std::string> sites_or_all(const std::vector<std::string> &sites,
                                             const PathEnsemble &ens) {
    return sites.empty() ? ens.site_labels : sites;
}

} // namespace report_detail

/// Detector the scenario post-selects on.
inline std::string scenario_detector(const Scenario &scenario, const Network &net) {
    if (scenario.detector) {
        return *scenario.detector;
    }
    if (net.detectors().empty()) {
        throw Error(ErrorCode::UnknownNode, "/detector", "network has no detector");
    }
    return net.detectors().front();
}

/// Runs `command` on an already-built network. The report always carries
/// the resolved scenario, the path table and (when the post-selection is
/// possible) relative amplitudes and site weak values.
inline RunResult run(const Scenario &scenario, const Network &net, Command command) {
    using namespace report_detail;
    RunResult result;
    auto &report = result.report;
    report["format"] = "mzisim-report/1";
    report["command"] = std::string(to_string(command));
    report["scenario"] = scenario_to_json(scenario);
    report["network"] = {{"nodes", net.nodes().size()},
                         {"arms", net.arms().size()},
                         {"source", net.source()},
                         {"detectors", net.detectors()},
                         {"sites", net.site_labels()}};
    if (command == Command::Validate) {
        report["valid"] = true;
        return result;
    }

    const auto detector = scenario_detector(scenario, net);
    const auto ens = enumerate_paths(net, detector);
    std::optional<RelativeAmplitudes> rel;
    if (std::abs(ens.total) > kVanishingTotal) {
        rel = relative_amplitudes(ens);
    }

    report["detector"] = detector;
    ordered_json paths = ordered_json::array();
    for (std::size_t i = 0; i < ens.paths.size(); ++i) {
        const auto &p = ens.paths[i];
        paths.push_back({{"arms", p.arms},
                         {"sites", p.sites},
                         {"blocked", p.blocked},
                         {"amplitude", complex_to_json(p.amplitude)},
                         {"relative_amplitude",
                          rel ? complex_to_json(rel->alpha[i]) : ordered_json(nullptr)}});
    }
    report["paths"] = std::move(paths);
    report["total_amplitude"] = complex_to_json(ens.total);
    report["detection_probability"] = detection_probability(ens);
    ordered_json terminals = ordered_json::object();
    for (const auto &[id, amp] : propagate_all(net).terminals) {
        terminals[id] = std::norm(amp);
    }
    report["terminal_probabilities"] = std::move(terminals);
    report["post_selection"] = rel ? "ok" : "vanishing_total";

    std::vector<std::string> weak_sites = ens.site_labels;
    if (const auto *e = std::get_if<WeakValuesExperiment>(&scenario.experiment)) {
        weak_sites = sites_or_all(e->sites, ens);
    }
    if (rel) {
        ordered_json weak = ordered_json::object();
        for (const auto &site : weak_sites) {
            weak[site] = complex_to_json(projector_weak_value(ens, site).value);
        }
        report["weak_values"] = std::move(weak);
    } else {
        report["weak_values"] = nullptr;
    }

    switch (command) {
    case Command::Validate:
    case Command::Paths:
        break;
    case Command::Weak:
        if (!rel) {
            (void)relative_amplitudes(ens);  // throws VanishingTotal
        }
        for (const auto &site : weak_sites) {
            (void)projector_weak_value(ens, site);  // surfaces UnknownLabel
        }
        break;
    case Command::Pointer: {
        const auto *e = std::get_if<PointerExperiment>(&scenario.experiment);
        if (!e) {
            wrong_experiment(command, scenario.experiment, "pointer");
        }
        ordered_json rows = ordered_json::array();
        for (const auto &site : sites_or_all(e->sites, ens)) {
            const auto w = projector_weak_value(ens, site).value;
            for (double g : e->g) {
                const PointerModel pm{e->sigma, g, site};
                const double shift = pointer_shift_exact(ens, pm);
                rows.push_back({{"site", site},
                                {"g", g},
                                {"shift", shift},
                                {"shift_over_g", g != 0.0 ? ordered_json(shift / g)
                                                          : ordered_json(nullptr)},
                                {"weak_value", complex_to_json(w)},
                                {"weak_regime", in_weak_regime(pm)}});
            }
        }
        report["pointer"] = {{"sigma", e->sigma}, {"results", std::move(rows)}};
        break;
    }
    case Command::Spectrum: {
        const auto *e = std::get_if<SpectralExperiment>(&scenario.experiment);
        if (!e) {
            wrong_experiment(command, scenario.experiment, "spectral");
        }
        const auto r = run_spectral_experiment(net, e->plan, e->sigma, e->noise, detector);
        report["spectral"] = spectral_to_json(r, e->sigma, e->plan.samples);
        result.csv.push_back({"timeseries.csv", timeseries_csv(r.readout)});
        result.csv.push_back({"spectrum.csv", spectrum_csv(r.power)});
        break;
    }
    case Command::Block: {
        const auto *e = std::get_if<BlockingSuiteExperiment>(&scenario.experiment);
        if (!e) {
            wrong_experiment(command, scenario.experiment, "blocking_suite");
        }
        const auto suite = run_blocking_suite(net, e->plan, e->sigma, e->blocks, detector);
        ordered_json cases = ordered_json::array();
        for (const auto &c : suite.cases) {
            ordered_json row{{"name", c.name},
                             {"blocked_site", c.blocked_site ? ordered_json(*c.blocked_site)
                                                             : ordered_json(nullptr)},
                             {"static_probability", c.static_probability},
                             {"mean_rate", c.report.mean_rate},
                             {"noise_floor", c.report.noise_floor},
                             {"peaks", peaks_to_json(c.report.peaks)}};
            cases.push_back(std::move(row));
            std::string prefix = c.blocked_site ? "block_" + *c.blocked_site : "baseline";
            result.csv.push_back({prefix + "_timeseries.csv", timeseries_csv(c.report.readout)});
            result.csv.push_back({prefix + "_spectrum.csv", spectrum_csv(c.report.power)});
        }
        // Per-site comparison, one column per configuration.
        ordered_json table = ordered_json::array();
        for (const auto &tone : e->plan.tones) {
            ordered_json row{{"site", tone.site}, {"bin", tone.bin}};
            for (const auto &c : suite.cases) {
                row[c.name] = c.peak_power(tone.site);
            }
            table.push_back(std::move(row));
        }
        report["blocking"] = {{"sigma", e->sigma},
                              {"samples", e->plan.samples},
                              {"cases", std::move(cases)},
                              {"peak_table", std::move(table)}};
        break;
    }
    }
    return result;
}

/// Exit status for an error; `building_network` marks failures while the
/// network was being assembled (including blocks).
inline ExitCode exit_code_for(const Error &err, bool building_network) {
    if (err.code() == ErrorCode::SchemaError) {
        return ExitCode::Schema;
    }
    if (building_network || is_network_error(err.code())) {
        return ExitCode::Network;
    }
    return ExitCode::Runtime;
}

inline json_io::ordered_json error_to_json(const Error &err, ExitCode exit) {
    json_io::ordered_json issues = json_io::ordered_json::array();
    for (const auto &issue : err.issues()) {
        json_io::ordered_json row{{"code", std::string(to_string(issue.code))},
                                  {"where", issue.where},
                                  {"message", issue.message}};
        if (issue.code == ErrorCode::NonUnitaryScatter) {
            row["deviation"] = issue.deviation;
        }
        issues.push_back(std::move(row));
    }
    return {{"error",
             {{"code", std::string(to_string(err.code()))},
              {"exit_code", static_cast<int>(exit)},
              {"issues", std::move(issues)}}}};
}

} // namespace mzi
