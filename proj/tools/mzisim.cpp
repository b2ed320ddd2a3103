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

// mzisim: run interferometer scenarios from the command line.
//
//   mzisim <validate|paths|weak|pointer|spectrum|block> scenario.json
//          [--out report.json] [--csv-dir dir] [--seed N] [--quiet]
//
// Exit codes: 0 success, 2 schema or usage error, 3 invalid network,
// 4 runtime failure (e.g. vanishing post-selection).

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mzi/report.hpp"
#include "mzi/scenario.hpp"

namespace fs = std::filesystem;

namespace {

struct Options {
    std::string file;
    std::string out;
    std::string csv_dir;
    std::optional<std::uint64_t> seed;
    bool quiet = false;
};

int fail(const mzi::Error &err, mzi::ExitCode exit) {
    std::cerr << mzi::json_io::dump(mzi::error_to_json(err, exit)) << '\n';
    return static_cast<int>(exit);
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw mzi::Error(mzi::ErrorCode::SchemaError, path, "cannot open scenario file");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) {
        throw mzi::Error(mzi::ErrorCode::InvalidArgument, path.string(), "cannot write file");
    }
}

int execute(mzi::Command command, const Options &opt) {
    mzi::Scenario scenario;
    try {
        scenario = mzi::parse_scenario(read_file(opt.file));
        if (opt.seed) {
            mzi::override_seed(scenario, *opt.seed);
        }
    } catch (const mzi::Error &err) {
        return fail(err, mzi::ExitCode::Schema);
    }

    std::optional<mzi::Network> net;
    try {
        net = mzi::build_scenario_network(scenario);
    } catch (const mzi::Error &err) {
        return fail(err, mzi::exit_code_for(err, true));
    }

    try {
        const auto result = mzi::run(scenario, *net, command);
        const auto text = mzi::json_io::dump(result.report) + "\n";
        if (!opt.out.empty()) {
            write_file(opt.out, text);
        } else if (!opt.quiet) {
            std::cout << text;
        }
        if (!opt.csv_dir.empty()) {
            fs::create_directories(opt.csv_dir);
            for (const auto &csv : result.csv) {
                write_file(fs::path(opt.csv_dir) / csv.name, csv.content);
            }
        }
    } catch (const mzi::Error &err) {
        return fail(err, mzi::exit_code_for(err, false));
    } catch (const std::exception &err) {
        return fail(mzi::Error(mzi::ErrorCode::InvalidArgument, "", err.what()),
                    mzi::ExitCode::Runtime);
    }
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Single-photon amplitudes, weak values and probe spectra for "
                 "Mach-Zehnder interferometer networks"};
    app.require_subcommand(1);

    Options opt;
    const std::pair<mzi::Command, const char *> commands[] = {
        {mzi::Command::Validate, "Parse the scenario and validate its network"},
        {mzi::Command::Paths, "Enumerate source-detector paths and amplitudes"},
        {mzi::Command::Weak, "Relative amplitudes and site weak values"},
        {mzi::Command::Pointer, "Finite-strength Gaussian pointer shifts"},
        {mzi::Command::Spectrum, "Frequency-tagged probe spectrum"},
        {mzi::Command::Block, "Blocking comparison suite"},
    };
    std::optional<mzi::Command> chosen;
    for (const auto &[command, help] : commands) {
        auto *sub = app.add_subcommand(std::string(mzi::to_string(command)), help);
        sub->add_option("file", opt.file, "Scenario JSON file")->required();
        sub->add_option("--out", opt.out, "Write the report here instead of stdout");
        sub->add_option("--csv-dir", opt.csv_dir, "Directory for CSV series");
        sub->add_option("--seed", opt.seed, "Override the scenario's noise seed");
        sub->add_flag("--quiet", opt.quiet, "Do not print the report to stdout");
        sub->callback([&chosen, command = command] { chosen = command; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return static_cast<int>(mzi::ExitCode::Schema);
    }
    return execute(*chosen, opt);
}
