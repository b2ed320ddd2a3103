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
 * Random layered interferometers for property testing.
 */

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "mzi/netgraph.hpp"

namespace mzi {

/// Unitary built from three angles:
/// [[cos t e^{i a}, sin t e^{i b}], [-sin t e^{-i b}, cos t e^{-i a}]].
inline ScatterMatrix unitary_from_angles(double theta, double alpha, double beta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {{{c * std::polar(1.0, alpha), s * std::polar(1.0, beta)},
             {-s * std::polar(1.0, -beta), c * std::polar(1.0, -alpha)}}};
}

template <class Rng> ScatterMatrix random_unitary(Rng &rng) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    // theta = asin(sqrt(u)) spreads |S_00|^2 uniformly on [0, 1].
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double theta = std::asin(std::sqrt(unit(rng)));
    return unitary_from_angles(theta, angle(rng), angle(rng));
}

struct RandomNetworkOptions {
    int max_splitters = 8;
    int min_splitters = 1;
    /// Probability that a mirror with a site label is placed on an arm.
    double mirror_probability = 0.3;
    /// Probability that an arm is blocked. Zero keeps probability conserved.
    double block_probability = 0.0;
};

/// Layered DAG: each layer has one beam splitter that takes one or two of
/// the currently open outputs and opens two new ones. Remaining ends become
/// detectors or sinks (at least one detector).
template <class Rng>
NetworkSpec random_network_spec(Rng &rng, const RandomNetworkOptions &opt = {}) {
    std::uniform_int_distribution<int> splitter_count(opt.min_splitters,
                                                      opt.max_splitters);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);

    NetworkSpec spec;
    spec.nodes.push_back(Node{"source", NodeKind::Source, {}, {}});
    std::vector<PortRef> open{{"source", 0}};
    int arm_count = 0;
    int site_count = 0;

    auto connect = [&](const PortRef &from, const PortRef &to) {
        Arm arm;
        arm.static_phase = phase(rng);
        arm.transmission = unit(rng) < opt.block_probability ? 0.0 : 1.0;
        if (unit(rng) < opt.mirror_probability) {
            const std::string site = "S" + std::to_string(site_count++);
            const std::string mirror = "M" + site;
            spec.nodes.push_back(Node{mirror, NodeKind::Mirror, {}, site});
            arm.id = "a" + std::to_string(arm_count++);
            arm.from = from;
            arm.to = {mirror, 0};
            arm.label = site;
            spec.arms.push_back(arm);
            Arm tail;
            tail.id = "a" + std::to_string(arm_count++);
            tail.from = {mirror, 0};
            tail.to = to;
            tail.static_phase = phase(rng);
            spec.arms.push_back(tail);
            return;
        }
        arm.id = "a" + std::to_string(arm_count++);
        arm.from = from;
        arm.to = to;
        spec.arms.push_back(arm);
    };
    auto take_open = [&] {
        std::uniform_int_distribution<std::size_t> pick(0, open.size() - 1);
        const auto i = pick(rng);
        PortRef ref = open[i];
        open.erase(open.begin() + static_cast<std::ptrdiff_t>(i));
        return ref;
    };

    const int splitters = splitter_count(rng);
    for (int b = 0; b < splitters; ++b) {
        const std::string id = "BS" + std::to_string(b);
        spec.nodes.push_back(Node{id, NodeKind::BeamSplitter, random_unitary(rng), {}});
        const int inputs = (open.size() >= 2 && unit(rng) < 0.6) ? 2 : 1;
        if (inputs == 2) {
            connect(take_open(), {id, 0});
            connect(take_open(), {id, 1});
        } else {
            std::uniform_int_distribution<int> port(0, 1);
            connect(take_open(), {id, port(rng)});
        }
        open.push_back({id, 0});
        open.push_back({id, 1});
    }

    int detectors = 0;
    int sinks = 0;
    for (std::size_t i = 0; i < open.size(); ++i) {
        const bool detector = i == 0 || unit(rng) < 0.5;
        const std::string id = detector ? "D" + std::to_string(detectors++)
                                        : "sink" + std::to_string(sinks++);
        spec.nodes.push_back(
            Node{id, detector ? NodeKind::Detector : NodeKind::Sink, {}, detector ? id : ""});
        connect(open[i], {id, 0});
    }
    return spec;
}

} // namespace mzi
