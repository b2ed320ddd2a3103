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
 * Scenario documents: which network to build and which experiment to run.
 *
 * Parsing is strict: unknown keys and malformed values raise SchemaError with
 * the JSON-pointer path of the offending key. Physical validity of the
 * network (unitarity, wiring) is checked later by build_network().
 *
 * Schema outline:
 *
 *     {
 *       "network": "standard_nested_mzi"
 *                | {"kind": "standard_nested_mzi", "scatter": {"BS2": [[z, z], [z, z]]}}
 *                | {"kind": "explicit", "nodes": [...], "arms": [...]},
 *       "block": ["E"],          // optional, applied before the experiment
 *       "detector": "D",         // optional, defaults to the first detector
 *       "experiment": {"type": "paths" | "weak_values" | "pointer"
 *                              | "spectral" | "blocking_suite", ...}
 *     }
 *
 * Complex numbers are {"re": x, "im": y} or plain reals.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "mzi/errors.hpp"
#include "mzi/json_io.hpp"
#include "mzi/netgraph.hpp"
#include "mzi/spectra.hpp"

namespace mzi {

struct PathsExperiment {
    bool operator==(const PathsExperiment &) const = default;
};

struct WeakValuesExperiment {
    std::vector<std::string> sites;  // empty: every site

    bool operator==(const WeakValuesExperiment &) const = default;
};

struct PointerExperiment {
    double sigma = 1.0;
    std::vector<double> g{0.5, 0.25, 0.125, 0.0625, 0.03125};
    std::vector<std::string> sites;  // empty: every site

    bool operator==(const PointerExperiment &) const = default;
};

struct SpectralExperiment {
    double sigma = 1.0;
    ModulationPlan plan = standard_plan(0.01);
    std::optional<NoiseSpec> noise;

    bool operator==(const SpectralExperiment &) const = default;
};

struct BlockingSuiteExperiment {
    double sigma = 1.0;
    ModulationPlan plan = standard_plan(0.01);
    std::vector<std::string> blocks{"E", "F"};

    bool operator==(const BlockingSuiteExperiment &) const = default;
};

using Experiment = std::variant<PathsExperiment, WeakValuesExperiment, PointerExperiment,
                                SpectralExperiment, BlockingSuiteExperiment>;

constexpr std::string_view experiment_name(const Experiment &e) noexcept {
    constexpr std::string_view names[] = {"paths", "weak_values", "pointer", "spectral",
                                          "blocking_suite"};
    return names[e.index()];
}

struct Scenario {
    std::variant<NestedMziConventions, NetworkSpec> network;
    std::vector<std::string> block;
    std::optional<std::string> detector;
    Experiment experiment;

    bool operator==(const Scenario &) const = default;
};

namespace scenario_detail {

using json_io::as_array;
using json_io::as_complex;
using json_io::as_integer;
using json_io::as_number;
using json_io::as_string;
using json_io::child_path;
using json_io::json;
using json_io::ObjectReader;
using json_io::ordered_json;
using json_io::schema_error;

inline ScatterMatrix parse_scatter(const json &v, const std::string &path) {
    as_array(v, path);
    if (v.size() != 2) {
        schema_error(path, "scatter matrix needs 2 rows");
    }
    ScatterMatrix s{};
    for (std::size_t r = 0; r < 2; ++r) {
        const auto rp = child_path(path, r);
        as_array(v[r], rp);
        if (v[r].size() != 2) {
            schema_error(rp, "scatter row needs 2 entries");
        }
        for (std::size_t c = 0; c < 2; ++c) {
            s[r][c] = as_complex(v[r][c], child_path(rp, c));
        }
    }
    return s;
}

inline ordered_json scatter_to_json(const ScatterMatrix &s) {
    ordered_json rows = ordered_json::array();
    for (const auto &row : s) {
        rows.push_back(
            ordered_json::array({json_io::complex_to_json(row[0]), json_io::complex_to_json(row[1])}));
    }
    return rows;
}

inline std::vector<std::string> parse_string_list(const json &v, const std::string &path) {
    as_array(v, path);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(as_string(v[i], child_path(path, i)));
    }
    return out;
}

inline PortRef parse_port(const json &v, const std::string &path) {
    ObjectReader obj(v, path);
    PortRef ref;
    ref.node = as_string(obj.required("node"), child_path(path, "node"));
    if (const auto *p = obj.optional("port")) {
        ref.port = static_cast<int>(as_integer(*p, child_path(path, "port")));
    }
    obj.finish();
    return ref;
}

inline Node parse_node(const json &v, const std::string &path) {
    ObjectReader obj(v, path);
    Node node;
    node.id = as_string(obj.required("id"), child_path(path, "id"));
    const auto kind_path = child_path(path, "kind");
    const auto kind = node_kind_from_string(as_string(obj.required("kind"), kind_path));
    if (!kind) {
        schema_error(kind_path, "unknown node kind");
    }
    node.kind = *kind;
    if (node.kind == NodeKind::BeamSplitter) {
        node.scatter = hadamard_scatter();
        if (const auto *s = obj.optional("scatter")) {
            node.scatter = parse_scatter(*s, child_path(path, "scatter"));
        }
    }
    if (node.kind == NodeKind::Mirror || node.kind == NodeKind::Detector) {
        if (const auto *l = obj.optional("label")) {
            node.label = as_string(*l, child_path(path, "label"));
        }
    }
    obj.finish();
    return node;
}

inline Arm parse_arm(const json &v, const std::string &path) {
    ObjectReader obj(v, path);
    Arm arm;
    arm.id = as_string(obj.required("id"), child_path(path, "id"));
    arm.from = parse_port(obj.required("from"), child_path(path, "from"));
    arm.to = parse_port(obj.required("to"), child_path(path, "to"));
    if (const auto *l = obj.optional("label")) {
        arm.label = as_string(*l, child_path(path, "label"));
    }
    if (const auto *p = obj.optional("phase")) {
        arm.static_phase = as_number(*p, child_path(path, "phase"));
    }
    if (const auto *t = obj.optional("transmission")) {
        arm.transmission = as_number(*t, child_path(path, "transmission"));
    }
    if (const auto *m = obj.optional("modulation")) {
        const auto mp = child_path(path, "modulation");
        ObjectReader mod(*m, mp);
        Modulation out;
        out.delta = as_number(mod.required("delta"), child_path(mp, "delta"));
        out.freq = as_number(mod.required("freq"), child_path(mp, "freq"));
        mod.finish();
        arm.modulation = out;
    }
    obj.finish();
    return arm;
}

inline std::variant<NestedMziConventions, NetworkSpec> parse_network(const json &v,
                                                                     const std::string &path) {
    if (v.is_string()) {
        if (v.get<std::string>() != "standard_nested_mzi") {
            schema_error(path, "unknown network name");
        }
        return NestedMziConventions{};
    }
    ObjectReader obj(v, path);
    const auto kind = as_string(obj.required("kind"), child_path(path, "kind"));
    if (kind == "standard_nested_mzi") {
        NestedMziConventions conv;
        if (const auto *s = obj.optional("scatter")) {
            const auto sp = child_path(path, "scatter");
            ObjectReader overrides(*s, sp);
            const std::pair<const char *, ScatterMatrix *> slots[] = {
                {"BS1", &conv.bs1}, {"BS2", &conv.bs2}, {"BS3", &conv.bs3}, {"BS4", &conv.bs4}};
            for (const auto &[name, slot] : slots) {
                if (const auto *m = overrides.optional(name)) {
                    *slot = parse_scatter(*m, child_path(sp, name));
                }
            }
            overrides.finish();
        }
        obj.finish();
        return conv;
    }
    if (kind == "explicit") {
        NetworkSpec spec;
        const auto np = child_path(path, "nodes");
        const auto &nodes = as_array(obj.required("nodes"), np);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            spec.nodes.push_back(parse_node(nodes[i], child_path(np, i)));
        }
        const auto ap = child_path(path, "arms");
        const auto &arms = as_array(obj.required("arms"), ap);
        for (std::size_t i = 0; i < arms.size(); ++i) {
            spec.arms.push_back(parse_arm(arms[i], child_path(ap, i)));
        }
        obj.finish();
        return spec;
    }
    schema_error(child_path(path, "kind"), "expected 'standard_nested_mzi' or 'explicit'");
}

inline double parse_sigma(ObjectReader &obj, double fallback) {
    if (const auto *s = obj.optional("sigma")) {
        const auto path = child_path(obj.path(), "sigma");
        const double sigma = as_number(*s, path);
        if (!(sigma > 0.0)) {
            schema_error(path, "sigma must be positive");
        }
        return sigma;
    }
    return fallback;
}

inline ModulationPlan parse_plan(const json &v, const std::string &path) {
    ObjectReader obj(v, path);
    ModulationPlan plan;
    plan.tones.clear();
    if (const auto *n = obj.optional("samples")) {
        plan.samples = static_cast<int>(as_integer(*n, child_path(path, "samples")));
    }
    const auto tp = child_path(path, "tones");
    const auto &tones = as_array(obj.required("tones"), tp);
    for (std::size_t i = 0; i < tones.size(); ++i) {
        const auto p = child_path(tp, i);
        ObjectReader t(tones[i], p);
        SiteTone tone;
        tone.site = as_string(t.required("site"), child_path(p, "site"));
        tone.delta = as_number(t.required("delta"), child_path(p, "delta"));
        tone.bin = static_cast<int>(as_integer(t.required("bin"), child_path(p, "bin")));
        t.finish();
        plan.tones.push_back(tone);
    }
    obj.finish();
    try {
        validate_plan(plan);
    } catch (const Error &err) {
        const auto &issue = err.issues().front();
        schema_error(path, issue.where + ": " + issue.message);
    }
    return plan;
}

inline ModulationPlan parse_plan_or_default(ObjectReader &obj) {
    if (const auto *p = obj.optional("plan")) {
        return parse_plan(*p, child_path(obj.path(), "plan"));
    }
    return standard_plan(0.01);
}

inline Experiment parse_experiment(const json &v, const std::string &path) {
    ObjectReader obj(v, path);
    const auto type_path = child_path(path, "type");
    const auto type = as_string(obj.required("type"), type_path);
    auto sites = [&](std::vector<std::string> &out) {
        if (const auto *s = obj.optional("sites")) {
            out = parse_string_list(*s, child_path(path, "sites"));
        }
    };
    Experiment out;
    if (type == "paths") {
        out = PathsExperiment{};
    } else if (type == "weak_values") {
        WeakValuesExperiment e;
        sites(e.sites);
        out = e;
    } else if (type == "pointer") {
        PointerExperiment e;
        e.sigma = parse_sigma(obj, e.sigma);
        if (const auto *g = obj.optional("g")) {
            const auto gp = child_path(path, "g");
            as_array(*g, gp);
            e.g.clear();
            for (std::size_t i = 0; i < g->size(); ++i) {
                e.g.push_back(as_number((*g)[i], child_path(gp, i)));
            }
        }
        sites(e.sites);
        out = e;
    } else if (type == "spectral") {
        SpectralExperiment e;
        e.sigma = parse_sigma(obj, e.sigma);
        e.plan = parse_plan_or_default(obj);
        if (const auto *n = obj.optional("noise")) {
            const auto np = child_path(path, "noise");
            ObjectReader noise(*n, np);
            NoiseSpec spec;
            spec.std = as_number(noise.required("std"), child_path(np, "std"));
            if (spec.std < 0.0) {
                schema_error(child_path(np, "std"), "noise std must be non-negative");
            }
            if (const auto *seed = noise.optional("seed")) {
                spec.seed = json_io::as_unsigned(*seed, child_path(np, "seed"));
            }
            noise.finish();
            e.noise = spec;
        }
        out = e;
    } else if (type == "blocking_suite") {
        BlockingSuiteExperiment e;
        e.sigma = parse_sigma(obj, e.sigma);
        e.plan = parse_plan_or_default(obj);
        if (const auto *b = obj.optional("blocks")) {
            e.blocks = parse_string_list(*b, child_path(path, "blocks"));
        }
        out = e;
    } else {
        schema_error(type_path, "unknown experiment type '" + type + "'");
    }
    obj.finish();
    return out;
}

inline ordered_json plan_to_json(const ModulationPlan &plan) {
    ordered_json tones = ordered_json::array();
    for (const auto &t : plan.tones) {
        tones.push_back({{"site", t.site}, {"delta", t.delta}, {"bin", t.bin}});
    }
    return {{"samples", plan.samples}, {"tones", tones}};
}

inline ordered_json network_to_json(const std::variant<NestedMziConventions, NetworkSpec> &net) {
    if (const auto *conv = std::get_if<NestedMziConventions>(&net)) {
        return {{"kind", "standard_nested_mzi"},
                {"scatter",
                 {{"BS1", scatter_to_json(conv->bs1)},
                  {"BS2", scatter_to_json(conv->bs2)},
                  {"BS3", scatter_to_json(conv->bs3)},
                  {"BS4", scatter_to_json(conv->bs4)}}}};
    }
    const auto &spec = std::get<NetworkSpec>(net);
    ordered_json nodes = ordered_json::array();
    for (const auto &n : spec.nodes) {
        ordered_json node{{"id", n.id}, {"kind", std::string(to_string(n.kind))}};
        if (n.kind == NodeKind::BeamSplitter) {
            node["scatter"] = scatter_to_json(n.scatter);
        }
        if ((n.kind == NodeKind::Mirror || n.kind == NodeKind::Detector) && !n.label.empty()) {
            node["label"] = n.label;
        }
        nodes.push_back(std::move(node));
    }
    ordered_json arms = ordered_json::array();
    for (const auto &a : spec.arms) {
        ordered_json arm{{"id", a.id},
                         {"from", {{"node", a.from.node}, {"port", a.from.port}}},
                         {"to", {{"node", a.to.node}, {"port", a.to.port}}}};
        if (a.label) {
            arm["label"] = *a.label;
        }
        arm["phase"] = a.static_phase;
        arm["transmission"] = a.transmission;
        if (a.modulation) {
            arm["modulation"] = {{"delta", a.modulation->delta}, {"freq", a.modulation->freq}};
        }
        arms.push_back(std::move(arm));
    }
    return {{"kind", "explicit"}, {"nodes", nodes}, {"arms", arms}};
}

inline ordered_json experiment_to_json(const Experiment &experiment) {
    ordered_json out{{"type", std::string(experiment_name(experiment))}};
    std::visit(
        [&](const auto &e) {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, WeakValuesExperiment>) {
                out["sites"] = e.sites;
            } else if constexpr (std::is_same_v<T, PointerExperiment>) {
                out["sigma"] = e.sigma;
                out["g"] = e.g;
                out["sites"] = e.sites;
            } else if constexpr (std::is_same_v<T, SpectralExperiment>) {
                out["sigma"] = e.sigma;
                out["plan"] = plan_to_json(e.plan);
                if (e.noise) {
                    out["noise"] = {{"std", e.noise->std}, {"seed", e.noise->seed}};
                }
            } else if constexpr (std::is_same_v<T, BlockingSuiteExperiment>) {
                out["sigma"] = e.sigma;
                out["plan"] = plan_to_json(e.plan);
                out["blocks"] = e.blocks;
            }
        },
        experiment);
    return out;
}

} // namespace scenario_detail

/// Parses a scenario document. Throws mzi::Error with code SchemaError.
inline Scenario parse_scenario(std::string_view text) {
    using namespace scenario_detail;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &err) {
        schema_error("", std::string("malformed JSON: ") + err.what());
    }
    ObjectReader obj(doc, "");
    Scenario scenario;
    scenario.network = parse_network(obj.required("network"), "/network");
    if (const auto *b = obj.optional("block")) {
        scenario.block = parse_string_list(*b, "/block");
    }
    if (const auto *d = obj.optional("detector")) {
        scenario.detector = as_string(*d, "/detector");
    }
    scenario.experiment = parse_experiment(obj.required("experiment"), "/experiment");
    obj.finish();
    return scenario;
}

/// Fully resolved scenario (defaults filled in); parse_scenario() of its dump
/// yields an equal Scenario.
inline json_io::ordered_json scenario_to_json(const Scenario &scenario) {
    using namespace scenario_detail;
    ordered_json out;
    out["network"] = network_to_json(scenario.network);
    out["block"] = scenario.block;
    if (scenario.detector) {
        out["detector"] = *scenario.detector;
    }
    out["experiment"] = experiment_to_json(scenario.experiment);
    return out;
}

/// Overrides the noise seed of a spectral scenario; other experiments have no
/// random component.
inline void override_seed(Scenario &scenario, std::uint64_t seed) {
    if (auto *e = std::get_if<SpectralExperiment>(&scenario.experiment); e && e->noise) {
        e->noise->seed = seed;
    }
}

/// Builds the scenario's network and applies its blocks.
inline Network build_scenario_network(const Scenario &scenario) {
    Network net = std::visit(
        [](const auto &choice) {
            using T = std::decay_t<decltype(choice)>;
            if constexpr (std::is_same_v<T, NestedMziConventions>) {
                return standard_nested_mzi(choice);
            } else {
                return build_network(choice);
            }
        },
        scenario.network);
    for (const auto &site : scenario.block) {
        net = apply_block(net, site);
    }
    return net;
}

} // namespace mzi
