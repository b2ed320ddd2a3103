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
 * Source-to-detector transition amplitudes, computed two independent ways:
 * forward propagation of port amplitudes in topological order, and explicit
 * enumeration of every path with the product of its element coefficients.
 */

#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mzi/errors.hpp"
#include "mzi/netgraph.hpp"

namespace mzi {

/// Port amplitudes of one forward sweep through a network.
struct Propagation {
    std::vector<Amplitude> arm_in;   // amplitude entering each arm
    std::vector<Amplitude> arm_out;  // after the arm's t * exp(i phase)
    std::map<std::string, Amplitude> terminals;  // detectors and sinks by id
};

/// Injects unit amplitude at the source and sweeps the network once.
inline Propagation propagate_all(const Network &net) {
    const auto &nodes = net.nodes();
    const auto &arms = net.arms();
    Propagation out;
    out.arm_in.assign(arms.size(), Amplitude{});
    out.arm_out.assign(arms.size(), Amplitude{});

    auto incoming = [&](std::size_t n, int port) {
        const auto a = net.in_arm(n, port);
        return a == Network::npos ? Amplitude{} : out.arm_out[a];
    };
    auto emit = [&](std::size_t n, int port, Amplitude amp) {
        const auto a = net.out_arm(n, port);
        out.arm_in[a] = amp;
        out.arm_out[a] = amp * arms[a].factor();
    };

    for (auto n : net.topological_order()) {
        const auto &node = nodes[n];
        switch (node.kind) {
        case NodeKind::Source:
            emit(n, 0, Amplitude{1.0});
            break;
        case NodeKind::BeamSplitter: {
            const Amplitude in0 = incoming(n, 0);
            const Amplitude in1 = incoming(n, 1);
            for (int p = 0; p < 2; ++p) {
                const auto &row = node.scatter[static_cast<std::size_t>(p)];
                emit(n, p, row[0] * in0 + row[1] * in1);
            }
            break;
        }
        case NodeKind::Mirror:
            emit(n, 0, incoming(n, 0));
            break;
        case NodeKind::Block:
            emit(n, 0, Amplitude{});
            break;
        case NodeKind::Detector:
        case NodeKind::Sink:
            out.terminals[node.id] = incoming(n, 0);
            break;
        }
    }
    return out;
}

/// Amplitude arriving at each detector.
inline std::map<std::string, Amplitude> propagate(const Network &net) {
    auto sweep = propagate_all(net);
    std::map<std::string, Amplitude> result;
    for (const auto &id : net.detectors()) {
        result[id] = sweep.terminals.at(id);
    }
    return result;
}

/// Amplitude entering the arm that carries `site`.
inline Amplitude site_amplitude(const Network &net, std::string_view site) {
    const auto arm = net.site_arm(site);
    if (arm == Network::npos) {
        throw Error(ErrorCode::UnknownLabel, std::string(site), "unknown site label");
    }
    return propagate_all(net).arm_in[arm];
}

struct Path {
    std::vector<std::string> arms;   // arm ids, source to detector
    std::vector<std::string> sites;  // distinct site tags passed, in order
    Amplitude amplitude;
    bool blocked = false;  // passes a zero-transmission arm or a Block node

    [[nodiscard]] bool visits(std::string_view site) const {
        return std::find(sites.begin(), sites.end(), site) != sites.end();
    }
};

/// All ways from the source to one detector. The (source, detector) pair
/// plays the role of the pre- and post-selected states.
struct PathEnsemble {
    std::string source;
    std::string detector;
    std::vector<Path> paths;
    Amplitude total;
    std::vector<std::string> site_labels;  // every site known to the network

    [[nodiscard]] bool knows_site(std::string_view site) const {
        return std::find(site_labels.begin(), site_labels.end(), site) !=
               site_labels.end();
    }
};

/// Exhaustive depth-first enumeration of source -> detector paths. Blocked
/// paths stay in the ensemble with amplitude 0 so that path identities are
/// stable across blocking experiments.
inline PathEnsemble enumerate_paths(const Network &net, std::string_view detector) {
    const auto target = net.node_index(detector);
    if (target == Network::npos || net.nodes()[target].kind != NodeKind::Detector) {
        throw Error(ErrorCode::UnknownNode, std::string(detector), "not a detector");
    }
    const auto &nodes = net.nodes();
    const auto &arms = net.arms();

    PathEnsemble ens;
    ens.source = net.source();
    ens.detector = std::string(detector);
    ens.site_labels = net.site_labels();

    Path current;
    current.amplitude = Amplitude{1.0};

    auto add_site = [](Path &path, const std::string &site) {
        if (!site.empty() && !path.visits(site)) {
            path.sites.push_back(site);
        }
    };

    // Follows arm `a` from its entry; `current` already holds the factors up
    // to the node that emitted it.
    auto walk = [&](auto &&self, std::size_t a) -> void {
        const Path saved = current;
        const auto &arm = arms[a];
        current.arms.push_back(arm.id);
        if (arm.label) {
            add_site(current, *arm.label);
        }
        current.amplitude *= arm.factor();
        current.blocked = current.blocked || arm.blocked();

        const auto n = net.node_index(arm.to.node);
        const auto &node = nodes[n];
        switch (node.kind) {
        case NodeKind::Detector:
            if (n == target) {
                ens.paths.push_back(current);
            }
            break;
        case NodeKind::Sink:
        case NodeKind::Source:
            break;
        case NodeKind::Mirror:
            add_site(current, node.label);
            self(self, net.out_arm(n, 0));
            break;
        case NodeKind::Block:
            current.amplitude = Amplitude{};
            current.blocked = true;
            self(self, net.out_arm(n, 0));
            break;
        case NodeKind::BeamSplitter: {
            const auto in = static_cast<std::size_t>(arm.to.port);
            const Path entry = current;
            for (int p = 0; p < 2; ++p) {
                current = entry;
                current.amplitude *= node.scatter[static_cast<std::size_t>(p)][in];
                self(self, net.out_arm(n, p));
            }
            break;
        }
        }
        current = saved;
    };
    walk(walk, net.out_arm(net.source_index(), 0));

    for (auto &path : ens.paths) {
        if (path.blocked) {
            path.amplitude = Amplitude{};
        }
        ens.total += path.amplitude;
    }
    return ens;
}

/// |A|^2 for the ensemble's total amplitude.
inline double detection_probability(const PathEnsemble &ens) {
    return std::norm(ens.total);
}

/// Number of paths whose amplitude is not exactly zero.
inline std::size_t nonzero_path_count(const PathEnsemble &ens) {
    return static_cast<std::size_t>(std::count_if(
        ens.paths.begin(), ens.paths.end(),
        [](const Path &p) { return p.amplitude != Amplitude{}; }));
}

} // namespace mzi
