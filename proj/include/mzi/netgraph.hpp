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
 * Interferometer networks as validated, immutable DAGs of optical elements.
 *
 * A network is described by a NetworkSpec (plain node and arm lists) and
 * turned into a Network by build_network(), which checks every structural
 * invariant and reports all violations at once.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mzi/errors.hpp"

namespace mzi {

using Amplitude = std::complex<double>;

/// Row = output port, column = input port: out = S * in.
using ScatterMatrix = std::array<std::array<Amplitude, 2>, 2>;

inline constexpr double kUnitarityTolerance = 1e-12;

enum class NodeKind { Source, BeamSplitter, Mirror, Block, Detector, Sink };

constexpr std::string_view to_string(NodeKind kind) noexcept {
    switch (kind) {
    case NodeKind::Source:
        return "source";
    case NodeKind::BeamSplitter:
        return "beam_splitter";
    case NodeKind::Mirror:
        return "mirror";
    case NodeKind::Block:
        return "block";
    case NodeKind::Detector:
        return "detector";
    case NodeKind::Sink:
        return "sink";
    }
    return "unknown";
}

inline std::optional<NodeKind> node_kind_from_string(std::string_view name) {
    for (auto kind : {NodeKind::Source, NodeKind::BeamSplitter, NodeKind::Mirror,
                      NodeKind::Block, NodeKind::Detector, NodeKind::Sink}) {
        if (to_string(kind) == name) {
            return kind;
        }
    }
    return std::nullopt;
}

constexpr int in_port_count(NodeKind kind) noexcept {
    switch (kind) {
    case NodeKind::Source:
        return 0;
    case NodeKind::BeamSplitter:
        return 2;
    default:
        return 1;
    }
}

constexpr int out_port_count(NodeKind kind) noexcept {
    switch (kind) {
    case NodeKind::BeamSplitter:
        return 2;
    case NodeKind::Detector:
    case NodeKind::Sink:
        return 0;
    default:
        return 1;
    }
}

/// Real balanced splitter: out0 = (in0 + in1)/sqrt2, out1 = (in0 - in1)/sqrt2.
inline ScatterMatrix hadamard_scatter() {
    const double h = 1.0 / std::numbers::sqrt2;
    return {{{Amplitude{h}, Amplitude{h}}, {Amplitude{h}, Amplitude{-h}}}};
}

inline ScatterMatrix identity_scatter() {
    return {{{Amplitude{1.0}, Amplitude{0.0}}, {Amplitude{0.0}, Amplitude{1.0}}}};
}

/// Largest entrywise deviation of S^dagger S from the identity.
inline double unitarity_deviation(const ScatterMatrix &s) {
    double worst = 0.0;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            Amplitude acc{};
            for (int k = 0; k < 2; ++k) {
                acc += std::conj(s[k][i]) * s[k][j];
            }
            if (i == j) {
                acc -= 1.0;
            }
            worst = std::max(worst, std::abs(acc));
        }
    }
    return worst;
}

struct Node {
    std::string id;
    NodeKind kind = NodeKind::Sink;
    ScatterMatrix scatter{};  // beam splitters only
    std::string label;        // site tag for mirrors, port tag for detectors

    bool operator==(const Node &) const = default;
};

struct PortRef {
    std::string node;
    int port = 0;

    bool operator==(const PortRef &) const = default;
};

/// Periodic transverse displacement applied at a site; `freq` counts cycles
/// per sampling window.
struct Modulation {
    double delta = 0.0;
    double freq = 0.0;

    bool operator==(const Modulation &) const = default;
};

struct Arm {
    std::string id;
    PortRef from;
    PortRef to;
    std::optional<std::string> label;
    double static_phase = 0.0;
    double transmission = 1.0;  // 0 iff blocked
    std::optional<Modulation> modulation;

    [[nodiscard]] bool blocked() const noexcept { return transmission == 0.0; }
    /// Amplitude factor t * exp(i phase) picked up along the arm.
    [[nodiscard]] Amplitude factor() const {
        return transmission * std::polar(1.0, static_phase);
    }

    bool operator==(const Arm &) const = default;
};

struct NetworkSpec {
    std::vector<Node> nodes;
    std::vector<Arm> arms;

    bool operator==(const NetworkSpec &) const = default;
};

class Network;
Network build_network(NetworkSpec spec);

/// Validated interferometer graph. Only build_network() creates one, so every
/// instance satisfies the structural invariants.
class Network {
  public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    [[nodiscard]] const NetworkSpec &spec() const noexcept { return spec_; }
    [[nodiscard]] const std::vector<Node> &nodes() const noexcept {
        return spec_.nodes;
    }
    [[nodiscard]] const std::vector<Arm> &arms() const noexcept {
        return spec_.arms;
    }
    [[nodiscard]] const std::string &source() const noexcept {
        return spec_.nodes[source_].id;
    }
    [[nodiscard]] std::size_t source_index() const noexcept { return source_; }
    [[nodiscard]] const std::vector<std::string> &detectors() const noexcept {
        return detectors_;
    }
    /// Node indices in an order where every arm points forward.
    [[nodiscard]] const std::vector<std::size_t> &topological_order() const noexcept {
        return topo_;
    }

    [[nodiscard]] std::size_t node_index(std::string_view id) const {
        auto it = node_lookup_.find(id);
        return it == node_lookup_.end() ? npos : it->second;
    }
    [[nodiscard]] std::size_t arm_index(std::string_view id) const {
        auto it = arm_lookup_.find(id);
        return it == arm_lookup_.end() ? npos : it->second;
    }
    /// Arm leaving `port` of node `node`, or npos.
    [[nodiscard]] std::size_t out_arm(std::size_t node, int port) const {
        return out_arms_[node][static_cast<std::size_t>(port)];
    }
    /// Arm entering `port` of node `node`, or npos when the port is unwired.
    [[nodiscard]] std::size_t in_arm(std::size_t node, int port) const {
        return in_arms_[node][static_cast<std::size_t>(port)];
    }

    /// Arm that carries a site label. A mirror label resolves to the arm
    /// feeding the mirror when no arm carries the label itself.
    [[nodiscard]] std::size_t site_arm(std::string_view site) const {
        for (std::size_t i = 0; i < spec_.arms.size(); ++i) {
            if (spec_.arms[i].label && *spec_.arms[i].label == site) {
                return i;
            }
        }
        for (std::size_t n = 0; n < spec_.nodes.size(); ++n) {
            const auto &node = spec_.nodes[n];
            if (node.kind == NodeKind::Mirror && node.label == site) {
                return in_arm(n, 0);
            }
        }
        return npos;
    }

    /// Every site tag in the network (arm labels and mirror labels), sorted.
    [[nodiscard]] std::vector<std::string> site_labels() const {
        std::set<std::string> labels;
        for (const auto &arm : spec_.arms) {
            if (arm.label) {
                labels.insert(*arm.label);
            }
        }
        for (const auto &node : spec_.nodes) {
            if (node.kind == NodeKind::Mirror && !node.label.empty()) {
                labels.insert(node.label);
            }
        }
        return {labels.begin(), labels.end()};
    }

    bool operator==(const Network &other) const { return spec_ == other.spec_; }

  private:
    Network() = default;
    friend Network build_network(NetworkSpec spec);

    NetworkSpec spec_;
    std::size_t source_ = 0;
    std::vector<std::string> detectors_;
    std::vector<std::size_t> topo_;
    std::map<std::string, std::size_t, std::less<>> node_lookup_;
    std::map<std::string, std::size_t, std::less<>> arm_lookup_;
    std::vector<std::array<std::size_t, 2>> in_arms_;
    std::vector<std::array<std::size_t, 2>> out_arms_;
};

namespace detail {

inline bool finite(Amplitude a) {
    return std::isfinite(a.real()) && std::isfinite(a.imag());
}

inline std::string port_name(const PortRef &ref) {
    return ref.node + ":" + std::to_string(ref.port);
}

} // namespace detail

/// Checks every invariant of a network description and returns all findings.
/// An empty result means build_network() will succeed.
inline std::vector<Issue> validate_network(const NetworkSpec &spec) {
    std::vector<Issue> issues;
    auto report = [&](ErrorCode code, std::string where, std::string message,
                      double deviation = 0.0) {
        issues.push_back(Issue{code, std::move(where), std::move(message), deviation});
    };

    std::map<std::string, std::size_t, std::less<>> nodes;
    std::size_t sources = 0;
    std::set<std::string> mirror_labels;
    std::set<std::string> detector_labels;
    for (std::size_t i = 0; i < spec.nodes.size(); ++i) {
        const auto &node = spec.nodes[i];
        if (node.id.empty()) {
            report(ErrorCode::DuplicateId, "nodes[" + std::to_string(i) + "]",
                   "node id must not be empty");
        } else if (!nodes.emplace(node.id, i).second) {
            report(ErrorCode::DuplicateId, node.id, "duplicate node id");
        }
        if (node.kind == NodeKind::Source) {
            ++sources;
        }
        if (node.kind == NodeKind::BeamSplitter) {
            bool ok = true;
            for (const auto &row : node.scatter) {
                for (const auto &entry : row) {
                    ok = ok && detail::finite(entry);
                }
            }
            const double dev = ok ? unitarity_deviation(node.scatter) : std::numeric_limits<double>::infinity();
            if (!(dev <= kUnitarityTolerance)) {
                report(ErrorCode::NonUnitaryScatter, node.id,
                       "scatter matrix deviates from unitarity by " +
                           std::to_string(dev),
                       dev);
            }
        }
        if (node.kind == NodeKind::Mirror && !node.label.empty() &&
            !mirror_labels.insert(node.label).second) {
            report(ErrorCode::DuplicateLabel, node.id,
                   "mirror label '" + node.label + "' used twice");
        }
        if (node.kind == NodeKind::Detector && !node.label.empty() &&
            !detector_labels.insert(node.label).second) {
            report(ErrorCode::DuplicateLabel, node.id,
                   "detector label '" + node.label + "' used twice");
        }
    }
    if (sources != 1) {
        report(ErrorCode::SourceCount, "",
               "expected exactly one source, found " + std::to_string(sources));
    }

    std::set<std::string> arm_ids;
    std::set<std::string> arm_labels;
    std::map<std::pair<std::string, int>, std::string> used_out;
    std::map<std::pair<std::string, int>, std::string> used_in;
    bool wiring_ok = true;
    for (std::size_t i = 0; i < spec.arms.size(); ++i) {
        const auto &arm = spec.arms[i];
        const std::string where = arm.id.empty() ? "arms[" + std::to_string(i) + "]" : arm.id;
        if (arm.id.empty() || !arm_ids.insert(arm.id).second) {
            report(ErrorCode::DuplicateId, where, "arm id missing or duplicated");
        }
        if (arm.label && !arm_labels.insert(*arm.label).second) {
            report(ErrorCode::DuplicateLabel, where,
                   "site label '" + *arm.label + "' used on more than one arm");
        }
        if (!std::isfinite(arm.static_phase) || !std::isfinite(arm.transmission) ||
            arm.transmission < 0.0 || arm.transmission > 1.0) {
            report(ErrorCode::InvalidArm, where,
                   "phase must be finite and transmission within [0, 1]");
        }
        if (arm.modulation &&
            (!std::isfinite(arm.modulation->delta) || arm.modulation->delta < 0.0 ||
             !std::isfinite(arm.modulation->freq))) {
            report(ErrorCode::InvalidArm, where,
                   "modulation needs a finite non-negative delta and finite freq");
        }

        auto check_end = [&](const PortRef &ref, bool outgoing) {
            auto it = nodes.find(ref.node);
            if (it == nodes.end()) {
                report(ErrorCode::UnknownNode, where, "unknown node '" + ref.node + "'");
                wiring_ok = false;
                return;
            }
            const auto kind = spec.nodes[it->second].kind;
            const int ports = outgoing ? out_port_count(kind) : in_port_count(kind);
            if (ref.port < 0 || ref.port >= ports) {
                report(ErrorCode::BadPort, where,
                       std::string(outgoing ? "output" : "input") + " port " +
                           detail::port_name(ref) + " does not exist on a " +
                           std::string(to_string(kind)));
                wiring_ok = false;
                return;
            }
            auto &used = outgoing ? used_out : used_in;
            auto [slot, fresh] = used.emplace(std::pair{ref.node, ref.port}, where);
            if (!fresh) {
                report(ErrorCode::PortConflict, where,
                       "port " + detail::port_name(ref) + " already used by arm '" +
                           slot->second + "'");
                wiring_ok = false;
            }
        };
        check_end(arm.from, true);
        check_end(arm.to, false);
    }

    // Every output must lead somewhere; beam-splitter inputs may stay empty
    // (vacuum), all other inputs must be fed.
    for (const auto &node : spec.nodes) {
        for (int p = 0; p < out_port_count(node.kind); ++p) {
            if (!used_out.contains({node.id, p})) {
                report(ErrorCode::DanglingPort, detail::port_name({node.id, p}),
                       "output port is not wired");
            }
        }
        if (node.kind == NodeKind::BeamSplitter) {
            continue;
        }
        for (int p = 0; p < in_port_count(node.kind); ++p) {
            if (!used_in.contains({node.id, p})) {
                report(ErrorCode::DanglingPort, detail::port_name({node.id, p}),
                       "input port is not wired");
            }
        }
    }

    if (wiring_ok && nodes.size() == spec.nodes.size()) {
        // Kahn's algorithm.
        std::vector<int> indegree(spec.nodes.size(), 0);
        std::vector<std::vector<std::size_t>> succ(spec.nodes.size());
        for (const auto &arm : spec.arms) {
            const auto from = nodes.at(arm.from.node);
            const auto to = nodes.at(arm.to.node);
            succ[from].push_back(to);
            ++indegree[to];
        }
        std::vector<std::size_t> ready;
        for (std::size_t i = 0; i < indegree.size(); ++i) {
            if (indegree[i] == 0) {
                ready.push_back(i);
            }
        }
        std::size_t visited = 0;
        while (!ready.empty()) {
            const auto n = ready.back();
            ready.pop_back();
            ++visited;
            for (auto m : succ[n]) {
                if (--indegree[m] == 0) {
                    ready.push_back(m);
                }
            }
        }
        if (visited != spec.nodes.size()) {
            report(ErrorCode::CyclicGraph, "", "network contains a directed cycle");
        }
    }
    return issues;
}

/// Validates `spec` and returns the immutable network, or throws mzi::Error
/// listing every violated invariant.
inline Network build_network(NetworkSpec spec) {
    if (auto issues = validate_network(spec); !issues.empty()) {
        throw Error(std::move(issues));
    }

    Network net;
    net.spec_ = std::move(spec);
    const auto &nodes = net.spec_.nodes;
    const auto &arms = net.spec_.arms;

    net.in_arms_.assign(nodes.size(), {Network::npos, Network::npos});
    net.out_arms_.assign(nodes.size(), {Network::npos, Network::npos});
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        net.node_lookup_.emplace(nodes[i].id, i);
        if (nodes[i].kind == NodeKind::Source) {
            net.source_ = i;
        }
        if (nodes[i].kind == NodeKind::Detector) {
            net.detectors_.push_back(nodes[i].id);
        }
    }
    std::vector<int> indegree(nodes.size(), 0);
    for (std::size_t a = 0; a < arms.size(); ++a) {
        net.arm_lookup_.emplace(arms[a].id, a);
        const auto from = net.node_lookup_.at(arms[a].from.node);
        const auto to = net.node_lookup_.at(arms[a].to.node);
        net.out_arms_[from][static_cast<std::size_t>(arms[a].from.port)] = a;
        net.in_arms_[to][static_cast<std::size_t>(arms[a].to.port)] = a;
        ++indegree[to];
    }

    // Deterministic topological order: lowest declared index first.
    std::set<std::size_t> ready;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (indegree[i] == 0) {
            ready.insert(i);
        }
    }
    while (!ready.empty()) {
        const auto n = *ready.begin();
        ready.erase(ready.begin());
        net.topo_.push_back(n);
        for (auto a : net.out_arms_[n]) {
            if (a == Network::npos) {
                continue;
            }
            const auto to = net.node_lookup_.at(arms[a].to.node);
            if (--indegree[to] == 0) {
                ready.insert(to);
            }
        }
    }
    return net;
}

/// Scatter matrices for the four splitters of the nested interferometer.
struct NestedMziConventions {
    ScatterMatrix bs1 = hadamard_scatter();
    ScatterMatrix bs2 = hadamard_scatter();
    ScatterMatrix bs3 = hadamard_scatter();
    ScatterMatrix bs4 = hadamard_scatter();

    bool operator==(const NestedMziConventions &) const = default;
};

/// Node-and-arm description of the nested Mach-Zehnder interferometer.
///
/// The source feeds BS1. BS1 output 0 runs through mirror C to BS4 input 0;
/// output 1 runs through mirror E into BS2. BS2 splits into arms A and B,
/// which recombine at BS3; BS3 output 1 (arm F, via mirror F) enters BS4
/// input 1, output 0 is discarded. BS4 output 0 is detector D.
///
/// Each mirror sits between two arm segments; the upstream segment carries
/// the site label (id "E", "A", ...) and the downstream one has id "E.2".
inline NetworkSpec standard_nested_mzi_spec(const NestedMziConventions &conv = {}) {
    NetworkSpec spec;
    auto node = [&](std::string id, NodeKind kind, std::string label = {},
                    ScatterMatrix scatter = {}) {
        spec.nodes.push_back(Node{std::move(id), kind, scatter, std::move(label)});
    };
    node("source", NodeKind::Source);
    node("BS1", NodeKind::BeamSplitter, {}, conv.bs1);
    node("BS2", NodeKind::BeamSplitter, {}, conv.bs2);
    node("BS3", NodeKind::BeamSplitter, {}, conv.bs3);
    node("BS4", NodeKind::BeamSplitter, {}, conv.bs4);
    for (const char *site : {"A", "B", "C", "E", "F"}) {
        node(std::string("M") + site, NodeKind::Mirror, site);
    }
    node("D", NodeKind::Detector, "D");
    node("sink3", NodeKind::Sink);
    node("sink4", NodeKind::Sink);

    auto arm = [&](std::string id, PortRef from, PortRef to,
                   std::optional<std::string> label = std::nullopt) {
        Arm a;
        a.id = std::move(id);
        a.from = std::move(from);
        a.to = std::move(to);
        a.label = std::move(label);
        spec.arms.push_back(std::move(a));
    };
    auto mirrored = [&](const std::string &site, PortRef from, PortRef to) {
        arm(site, std::move(from), {"M" + site, 0}, site);
        arm(site + ".2", {"M" + site, 0}, std::move(to));
    };
    arm("in", {"source", 0}, {"BS1", 0});
    mirrored("C", {"BS1", 0}, {"BS4", 0});
    mirrored("E", {"BS1", 1}, {"BS2", 0});
    mirrored("A", {"BS2", 0}, {"BS3", 0});
    mirrored("B", {"BS2", 1}, {"BS3", 1});
    mirrored("F", {"BS3", 1}, {"BS4", 1});
    arm("out3", {"BS3", 0}, {"sink3", 0});
    arm("out.D", {"BS4", 0}, {"D", 0});
    arm("out4", {"BS4", 1}, {"sink4", 0});
    return spec;
}

/// The nested interferometer as a validated network. With the default
/// conventions the arm BS3 -> BS4 (site F) carries no amplitude.
inline Network standard_nested_mzi(const NestedMziConventions &conv = {}) {
    return build_network(standard_nested_mzi_spec(conv));
}

/// Copy of `net` with the transmission of the site's arm replaced.
inline Network with_transmission(const Network &net, std::string_view site,
                                 double transmission) {
    const auto arm = net.site_arm(site);
    if (arm == Network::npos) {
        throw Error(ErrorCode::UnknownLabel, std::string(site),
                    "no arm or mirror carries this site label");
    }
    NetworkSpec spec = net.spec();
    spec.arms[arm].transmission = transmission;
    return build_network(std::move(spec));
}

/// Copy of `net` with the arm at `site` blocked (transmission 0).
inline Network apply_block(const Network &net, std::string_view site) {
    return with_transmission(net, site, 0.0);
}

} // namespace mzi
