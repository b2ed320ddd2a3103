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

#include <string>

#include "mzi/report.hpp"
#include "mzi/scenario.hpp"
#include "test_helpers.hpp"

using namespace mzi;

namespace {

Error parse_error(const std::string &text) {
    try {
        (void)parse_scenario(text);
    } catch (const Error &err) {
        return err;
    }
    FAIL("expected parse_scenario to throw");
    throw std::logic_error("unreachable");
}

double num(const json_io::ordered_json &v) { return v.get<double>(); }

} // namespace

TEST_CASE("Minimal scenario fills defaults", "[scenario]") {
    const auto s = parse_scenario(
        R"({"network": "standard_nested_mzi", "experiment": {"type": "weak_values"}})");
    REQUIRE(std::holds_alternative<NestedMziConventions>(s.network));
    CHECK(std::get<NestedMziConventions>(s.network) == NestedMziConventions{});
    REQUIRE(std::holds_alternative<WeakValuesExperiment>(s.experiment));
    CHECK(std::get<WeakValuesExperiment>(s.experiment).sites.empty());
    CHECK(s.block.empty());
    CHECK_FALSE(s.detector);
}

TEST_CASE("Schema errors carry the offending path", "[scenario]") {
    SECTION("unknown top-level key") {
        const auto err = parse_error(
            R"({"network": "standard_nested_mzi", "experiment": {"type": "paths"}, "netwrk": 1})");
        CHECK(err.code() == ErrorCode::SchemaError);
        CHECK(err.issues().front().where == "/netwrk");
    }
    SECTION("unknown nested key") {
        const auto err = parse_error(R"({"network": "standard_nested_mzi",
            "experiment": {"type": "spectral", "plan": {"tones": [{"site": "A", "delta": 0.1, "bni": 3}]}}})");
        CHECK(err.issues().front().where == "/experiment/plan/tones/0/bin");
    }
    SECTION("duplicate site bins") {
        const auto err = parse_error(R"({"network": "standard_nested_mzi",
            "experiment": {"type": "spectral", "plan": {"tones": [
                {"site": "A", "delta": 0.01, "bin": 13},
                {"site": "B", "delta": 0.01, "bin": 13}]}}})");
        CHECK(err.code() == ErrorCode::SchemaError);
        CHECK(err.issues().front().where == "/experiment/plan");
    }
    SECTION("wrong types") {
        CHECK(parse_error(R"({"network": 3, "experiment": {"type": "paths"}})").code() ==
              ErrorCode::SchemaError);
        CHECK(parse_error(R"({"network": "standard_nested_mzi",
                              "experiment": {"type": "pointer", "sigma": -1}})")
                  .issues()
                  .front()
                  .where == "/experiment/sigma");
        CHECK(parse_error(R"({"network": "standard_nested_mzi", "experiment": {"type": "x"}})")
                  .issues()
                  .front()
                  .where == "/experiment/type");
    }
    SECTION("malformed JSON") {
        CHECK(parse_error("{not json").code() == ErrorCode::SchemaError);
    }
}

TEST_CASE("Non-unitary override parses then fails to build", "[scenario]") {
    const auto s = parse_scenario(R"({
        "network": {"kind": "standard_nested_mzi",
                    "scatter": {"BS2": [[1, 1], [1, -1]]}},
        "experiment": {"type": "paths"}})");
    try {
        (void)build_scenario_network(s);
        FAIL("expected NonUnitaryScatter");
    } catch (const Error &err) {
        CHECK(err.code() == ErrorCode::NonUnitaryScatter);
        CHECK(exit_code_for(err, true) == ExitCode::Network);
    }
}

TEST_CASE("Explicit networks and blocks", "[scenario]") {
    const auto s = parse_scenario(R"({
        "network": {"kind": "explicit",
            "nodes": [{"id": "s", "kind": "source"},
                      {"id": "bs", "kind": "beam_splitter"},
                      {"id": "m", "kind": "mirror", "label": "X"},
                      {"id": "d", "kind": "detector", "label": "d"},
                      {"id": "k", "kind": "sink"}],
            "arms": [{"id": "a", "from": {"node": "s"}, "to": {"node": "bs", "port": 1}},
                     {"id": "b", "from": {"node": "bs"}, "to": {"node": "m"}, "phase": 0.5},
                     {"id": "c", "from": {"node": "m"}, "to": {"node": "d"},
                      "modulation": {"delta": 0.1, "freq": 3}},
                     {"id": "e", "from": {"node": "bs", "port": 1}, "to": {"node": "k"},
                      "label": "Y", "transmission": 0.5}]},
        "detector": "d",
        "experiment": {"type": "paths"}})");
    const auto net = build_scenario_network(s);
    CHECK(net.nodes().size() == 5);
    CHECK(net.arms()[1].static_phase == 0.5);
    CHECK(net.arms()[2].modulation == Modulation{0.1, 3.0});
    // bs input 1 -> output 0 through the Hadamard default: +1/sqrt2.
    REQUIRE_NEAR(propagate(net).at("d"), std::polar(1.0 / std::sqrt(2.0), 0.5), 1e-15);

    auto blocked = s;
    blocked.block = {"Y"};
    CHECK(build_scenario_network(blocked).arms()[3].blocked());
    blocked.block = {"nope"};
    try {
        (void)build_scenario_network(blocked);
        FAIL("expected UnknownLabel");
    } catch (const Error &err) {
        CHECK(exit_code_for(err, true) == ExitCode::Network);
    }
}

TEST_CASE("Scenario echo re-parses to an equal scenario", "[scenario]") {
    const char *docs[] = {
        R"({"network": "standard_nested_mzi", "experiment": {"type": "weak_values", "sites": ["A"]}})",
        R"({"network": "standard_nested_mzi", "block": ["F"], "detector": "D",
            "experiment": {"type": "pointer", "sigma": 0.3, "g": [0.1, 0.7]}})",
        R"({"network": {"kind": "standard_nested_mzi",
                        "scatter": {"BS1": [[{"re": 0.6}, {"im": 0.8}], [{"im": 0.8}, 0.6]]}},
            "experiment": {"type": "spectral", "sigma": 1.5,
                           "noise": {"std": 0.1, "seed": 18446744073709551615}}})",
        R"({"network": "standard_nested_mzi",
            "experiment": {"type": "blocking_suite", "blocks": ["E"],
                           "plan": {"samples": 256, "tones": [{"site": "C", "delta": 0.1, "bin": 7}]}}})",
    };
    for (const char *doc : docs) {
        const auto s = parse_scenario(doc);
        const auto text = json_io::dump(scenario_to_json(s));
        CHECK(parse_scenario(text) == s);
        CHECK(json_io::dump(scenario_to_json(parse_scenario(text))) == text);
    }
    const auto spec = build_scenario_network(parse_scenario(docs[0])).spec();
    Scenario explicit_scenario;
    explicit_scenario.network = spec;
    explicit_scenario.experiment = PathsExperiment{};
    const auto text = json_io::dump(scenario_to_json(explicit_scenario));
    CHECK(parse_scenario(text) == explicit_scenario);
}

TEST_CASE("Seventeen significant digits", "[scenario]") {
    CHECK(json_io::format_double(0.1) == "0.10000000000000001");
    CHECK(json_io::format_double(0.25) == "0.25");
    CHECK(json_io::format_double(-2.0 / 3.0) == "-0.66666666666666663");
    CHECK(json_io::format_double(-1e-300) == "-1e-300");
    json_io::ordered_json v{{"x", 1.0 / 3.0}, {"n", 3}, {"s", "a\"b"}};
    CHECK(json_io::dump(v, -1) == R"({"x":0.33333333333333331,"n":3,"s":"a\"b"})");
}

TEST_CASE("Weak values report", "[scenario]") {
    const auto s = parse_scenario(
        R"({"network": "standard_nested_mzi", "experiment": {"type": "weak_values"}})");
    const auto net = build_scenario_network(s);
    const auto r = run(s, net, Command::Weak).report;
    CHECK(r["detector"] == "D");
    CHECK(r["paths"].size() == 3);
    CHECK(num(r["detection_probability"]) == Catch::Approx(0.25).margin(1e-12));
    const auto &w = r["weak_values"];
    CHECK(num(w["A"]["re"]) == Catch::Approx(0.5).margin(1e-12));
    CHECK(num(w["B"]["re"]) == Catch::Approx(-0.5).margin(1e-12));
    CHECK(num(w["C"]["re"]) == Catch::Approx(1.0).margin(1e-12));
    CHECK(std::abs(num(w["E"]["re"])) < 1e-12);
    CHECK(std::abs(num(w["F"]["re"])) < 1e-12);
    double terminal_total = 0.0;
    for (const auto &[id, p] : r["terminal_probabilities"].items()) {
        terminal_total += num(p);
    }
    CHECK(terminal_total == Catch::Approx(1.0).margin(1e-12));

    // The echoed scenario re-parses.
    CHECK(parse_scenario(json_io::dump(r["scenario"])) == s);
}

TEST_CASE("Vanishing post-selection", "[scenario]") {
    auto s = parse_scenario(
        R"({"network": "standard_nested_mzi", "block": ["C"], "experiment": {"type": "weak_values"}})");
    const auto net = build_scenario_network(s);
    const auto paths = run(s, net, Command::Paths).report;
    CHECK(paths["post_selection"] == "vanishing_total");
    CHECK(paths["weak_values"].is_null());
    try {
        (void)run(s, net, Command::Weak);
        FAIL("expected VanishingTotal");
    } catch (const Error &err) {
        CHECK(err.code() == ErrorCode::VanishingTotal);
        CHECK(exit_code_for(err, false) == ExitCode::Runtime);
    }
}

TEST_CASE("Experiment-specific sections", "[scenario]") {
    SECTION("pointer") {
        const auto s = parse_scenario(R"({"network": "standard_nested_mzi",
            "experiment": {"type": "pointer", "sites": ["C"], "g": [0.5]}})");
        const auto r = run(s, build_scenario_network(s), Command::Pointer).report;
        REQUIRE(r["pointer"]["results"].size() == 1);
        const auto &row = r["pointer"]["results"][0];
        CHECK(row["site"] == "C");
        CHECK(row["weak_regime"] == false);
        CHECK(std::isfinite(num(row["shift"])));
    }
    SECTION("spectrum") {
        const auto s = parse_scenario(R"({"network": "standard_nested_mzi",
            "experiment": {"type": "spectral"}})");
        const auto result = run(s, build_scenario_network(s), Command::Spectrum);
        const auto direct = run_spectral_experiment(standard_nested_mzi(), standard_plan(0.01), 1.0);
        const auto &peaks = result.report["spectral"]["peaks"];
        REQUIRE(peaks.size() == 5);
        for (std::size_t i = 0; i < 5; ++i) {
            CHECK(num(peaks[i]["power"]) == direct.peaks[i].power);
            CHECK(peaks[i]["classification"] == std::string(to_string(direct.peaks[i].classification)));
        }
        REQUIRE(result.csv.size() == 2);
        CHECK(result.csv[0].name == "timeseries.csv");
        CHECK(result.csv[1].content.rfind("bin,power\n1,", 0) == 0);
        // Spectrum CSV row for bin 19 carries the C peak.
        const auto needle = "\n19," + json_io::format_double(direct.power[19]) + "\n";
        CHECK(result.csv[1].content.find(needle) != std::string::npos);
    }
    SECTION("blocking suite") {
        const auto s = parse_scenario(R"({"network": "standard_nested_mzi",
            "experiment": {"type": "blocking_suite"}})");
        const auto result = run(s, build_scenario_network(s), Command::Block);
        const auto &b = result.report["blocking"];
        CHECK(b["cases"].size() == 3);
        for (const auto &row : b["peak_table"]) {
            if (row["site"] == "A" || row["site"] == "B") {
                CHECK(num(row["baseline"]) > 1e-6);
                CHECK(num(row["block E"]) < kAbsentPower);
                CHECK(num(row["block F"]) < kAbsentPower);
            }
        }
        CHECK(result.csv.size() == 6);
    }
    SECTION("subcommand and experiment must agree") {
        const auto s = parse_scenario(
            R"({"network": "standard_nested_mzi", "experiment": {"type": "paths"}})");
        try {
            (void)run(s, build_scenario_network(s), Command::Spectrum);
            FAIL("expected SchemaError");
        } catch (const Error &err) {
            CHECK(exit_code_for(err, false) == ExitCode::Schema);
        }
    }
}

TEST_CASE("Seed override only touches noisy spectral runs", "[scenario]") {
    auto s = parse_scenario(R"({"network": "standard_nested_mzi",
        "experiment": {"type": "spectral", "noise": {"std": 0.001, "seed": 1}}})");
    override_seed(s, 77);
    CHECK(std::get<SpectralExperiment>(s.experiment).noise->seed == 77);
    auto quiet = parse_scenario(R"({"network": "standard_nested_mzi", "experiment": {"type": "paths"}})");
    const auto before = quiet;
    override_seed(quiet, 5);
    CHECK(quiet == before);
}

TEST_CASE("Error documents", "[scenario]") {
    const Error err(ErrorCode::NonUnitaryScatter, "BS2", "bad", 0.5);
    const auto doc = error_to_json(err, ExitCode::Network);
    CHECK(doc["error"]["code"] == "NonUnitaryScatter");
    CHECK(doc["error"]["exit_code"] == 3);
    CHECK(num(doc["error"]["issues"][0]["deviation"]) == 0.5);
}
