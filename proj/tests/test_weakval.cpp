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

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "mzi/random_network.hpp"
#include "mzi/weakval.hpp"
#include "quadrature_oracle.hpp"
#include "test_helpers.hpp"

using namespace mzi;

namespace {

std::size_t route_index(const PathEnsemble &ens, const std::string &route) {
    for (std::size_t i = 0; i < ens.paths.size(); ++i) {
        std::string key;
        for (const auto &s : ens.paths[i].sites) {
            key += s;
        }
        if (key == route) {
            return i;
        }
    }
    FAIL("route not found: " << route);
    return 0;
}

} // namespace

TEST_CASE("Relative amplitudes of the standard network", "[weakval]") {
    const auto ens = enumerate_paths(standard_nested_mzi(), "D");
    const auto rel = relative_amplitudes(ens);
    REQUIRE(rel.alpha.size() == 3);
    REQUIRE_NEAR(rel.alpha[route_index(ens, "C")], Amplitude(1.0), 1e-12);
    REQUIRE_NEAR(rel.alpha[route_index(ens, "EAF")], Amplitude(0.5), 1e-12);
    REQUIRE_NEAR(rel.alpha[route_index(ens, "EBF")], Amplitude(-0.5), 1e-12);
    REQUIRE_NEAR(rel.alpha[route_index(ens, "EAF")] + rel.alpha[route_index(ens, "EBF")],
                 Amplitude{}, 1e-12);
}

TEST_CASE("Relative amplitudes edge cases", "[weakval]") {
    SECTION("single path normalizes to 1") {
        NetworkSpec spec;
        spec.nodes = {{"s", NodeKind::Source, {}, {}}, {"d", NodeKind::Detector, {}, "d"}};
        Arm arm;
        arm.id = "a";
        arm.from = {"s", 0};
        arm.to = {"d", 0};
        arm.static_phase = 1.3;
        spec.arms.push_back(arm);
        const auto rel = relative_amplitudes(enumerate_paths(build_network(spec), "d"));
        REQUIRE(rel.alpha.size() == 1);
        REQUIRE_NEAR(rel.alpha[0], Amplitude(1.0), 1e-15);
    }
    SECTION("vanishing total") {
        const auto ens = enumerate_paths(apply_block(standard_nested_mzi(), "C"), "D");
        try {
            (void)relative_amplitudes(ens);
            FAIL("expected VanishingTotal");
        } catch (const Error &err) {
            CHECK(err.code() == ErrorCode::VanishingTotal);
        }
        CHECK_THROWS_AS(projector_weak_value(ens, "A"), Error);
    }
}

TEST_CASE("Projector weak values per site", "[weakval]") {
    const auto ens = enumerate_paths(standard_nested_mzi(), "D");
    REQUIRE_NEAR(projector_weak_value(ens, "E").value, Amplitude{}, 1e-12);
    REQUIRE_NEAR(projector_weak_value(ens, "F").value, Amplitude{}, 1e-12);
    REQUIRE_NEAR(projector_weak_value(ens, "A").value, Amplitude(0.5), 1e-12);
    REQUIRE_NEAR(projector_weak_value(ens, "B").value, Amplitude(-0.5), 1e-12);
    REQUIRE_NEAR(projector_weak_value(ens, "C").value, Amplitude(1.0), 1e-12);
    CHECK(projector_weak_value(ens, "A").site == "A");

    const auto blocked = enumerate_paths(apply_block(standard_nested_mzi(), "E"), "D");
    REQUIRE_NEAR(projector_weak_value(blocked, "C").value, Amplitude(1.0), 1e-12);
    REQUIRE_NEAR(projector_weak_value(blocked, "A").value, Amplitude{}, 1e-12);

    try {
        (void)projector_weak_value(ens, "Q");
        FAIL("expected UnknownLabel");
    } catch (const Error &err) {
        CHECK(err.code() == ErrorCode::UnknownLabel);
    }
}

TEST_CASE("Weak observables", "[weakval]") {
    const auto ens = enumerate_paths(standard_nested_mzi(), "D");
    const auto rel = relative_amplitudes(ens);
    const auto c = route_index(ens, "C");
    const auto eaf = route_index(ens, "EAF");
    const auto ebf = route_index(ens, "EBF");

    REQUIRE_NEAR(weak_observable(rel, Observable{{1.0, 1.0, 1.0}}), Amplitude(1.0), 1e-12);
    REQUIRE_NEAR(weak_observable(rel, Observable::projector(3, eaf)), Amplitude(0.5), 1e-12);
    REQUIRE_NEAR(weak_observable(rel, Observable::projector(3, eaf)),
                 projector_weak_value(ens, "A").value, 1e-12);

    Observable mixed{std::vector<Amplitude>(3)};
    mixed.eigenvalues[c] = 0.0;
    mixed.eigenvalues[eaf] = 1.0;
    mixed.eigenvalues[ebf] = -1.0;
    REQUIRE_NEAR(weak_observable(rel, mixed), Amplitude(1.0), 1e-12);

    try {
        (void)weak_observable(rel, Observable{{1.0, 2.0}});
        FAIL("expected LengthMismatch");
    } catch (const Error &err) {
        CHECK(err.code() == ErrorCode::LengthMismatch);
    }
}

TEST_CASE("Weak value properties on random networks", "[weakval]") {
    std::mt19937_64 rng(4242);
    std::normal_distribution<double> normal;
    RandomNetworkOptions opt;
    opt.mirror_probability = 0.6;
    int checked = 0;
    for (int trial = 0; trial < 150; ++trial) {
        const auto net = build_network(random_network_spec(rng, opt));
        for (const auto &d : net.detectors()) {
            const auto ens = enumerate_paths(net, d);
            if (std::abs(ens.total) < 1e-6) {
                continue;
            }
            ++checked;
            const auto rel = relative_amplitudes(ens);
            Amplitude sum{};
            for (auto a : rel.alpha) {
                sum += a;
            }
            REQUIRE_NEAR(sum, Amplitude(1.0), 1e-12);

            // Linearity in B.
            const auto n = rel.alpha.size();
            Observable b1{std::vector<Amplitude>(n)};
            Observable b2{std::vector<Amplitude>(n)};
            Observable combo{std::vector<Amplitude>(n)};
            const Amplitude s{normal(rng), normal(rng)};
            const Amplitude t{normal(rng), normal(rng)};
            for (std::size_t i = 0; i < n; ++i) {
                b1.eigenvalues[i] = {normal(rng), normal(rng)};
                b2.eigenvalues[i] = {normal(rng), normal(rng)};
                combo.eigenvalues[i] = s * b1.eigenvalues[i] + t * b2.eigenvalues[i];
            }
            const double scale = 1.0 + std::abs(weak_observable(rel, combo));
            REQUIRE_NEAR(weak_observable(rel, combo),
                         s * weak_observable(rel, b1) + t * weak_observable(rel, b2),
                         1e-12 * scale * 10.0);

            // Invariance under a common complex factor on every path amplitude.
            PathEnsemble scaled = ens;
            const Amplitude k = std::polar(0.37, 2.1);
            scaled.total = {};
            for (auto &p : scaled.paths) {
                p.amplitude *= k;
                scaled.total += p.amplitude;
            }
            for (const auto &site : ens.site_labels) {
                REQUIRE_NEAR(projector_weak_value(scaled, site).value,
                             projector_weak_value(ens, site).value, 1e-10);
            }
        }
    }
    CHECK(checked > 50);
}

TEST_CASE("Weak values over a partition of paths sum to one", "[weakval]") {
    const auto ens = enumerate_paths(standard_nested_mzi(), "D");
    const auto sum = projector_weak_value(ens, "A").value +
                     projector_weak_value(ens, "B").value +
                     projector_weak_value(ens, "C").value;
    REQUIRE_NEAR(sum, Amplitude(1.0), 1e-12);
}

TEST_CASE("Gaussian overlap integrals", "[weakval]") {
    for (double sigma : {0.5, 1.0, 3.0}) {
        for (auto [a, b] : {std::pair{0.0, 0.0}, {0.3, -1.2}, {2.0, 2.5}}) {
            const auto num = test::oracle::overlap(a, b, sigma);
            CHECK(gaussian_overlap(a, b, sigma) == Catch::Approx(num.norm).margin(1e-12));
            CHECK(0.5 * (a + b) * gaussian_overlap(a, b, sigma) ==
                  Catch::Approx(num.first).margin(1e-12));
        }
    }
}

TEST_CASE("Exact pointer shift", "[weakval]") {
    const auto ens = enumerate_paths(standard_nested_mzi(), "D");
    const double sigma = 1.0;

    SECTION("matches quadrature at finite coupling") {
        for (const char *site : {"A", "B", "C", "E"}) {
            for (double g : {0.05, 0.5, 1.0, 2.0}) {
                const Amplitude through = site_path_amplitude(ens, site);
                const auto q = test::oracle::pointer_mean(
                    {{ens.total - through, 0.0}, {through, g}}, sigma);
                CHECK(pointer_shift_exact(ens, {sigma, g, site}) ==
                      Catch::Approx(q).margin(1e-8));
            }
        }
    }
    SECTION("single branch through the site moves rigidly") {
        // Site C carries the whole amplitude once E is blocked.
        const auto blocked = enumerate_paths(apply_block(standard_nested_mzi(), "E"), "D");
        for (double g : {0.01, 0.3, 4.0}) {
            CHECK(pointer_shift_exact(blocked, {sigma, g, "C"}) == Catch::Approx(g).epsilon(1e-14));
        }
    }
    SECTION("zero weak value at E") {
        // No amplitude passes E alone, so nothing is displaced.
        for (double g : {0.01, 0.5, 1.0}) {
            const double shift = pointer_shift_exact(ens, {sigma, g, "E"});
            CHECK(std::abs(shift) < 1e-15);
        }
    }
    SECTION("site A is symmetric: shift is g/2 for every g") {
        for (double g : {0.01, 0.125, 0.5, 2.0}) {
            CHECK(pointer_shift_exact(ens, {sigma, g, "A"}) == Catch::Approx(0.5 * g).epsilon(1e-14));
        }
    }
    SECTION("second-order approach to Re W at site B") {
        const double w = projector_weak_value(ens, "B").value.real();
        double previous = 0.0;
        for (double g : {sigma / 8, sigma / 16, sigma / 32}) {
            const double err = std::abs(pointer_shift_exact(ens, {sigma, g, "B"}) / g - w);
            if (previous > 0.0) {
                const double ratio = previous / err;
                CHECK(ratio == Catch::Approx(4.0).margin(1.0));
            }
            previous = err;
        }
    }
    SECTION("destructive interference of pointer branches") {
        PathEnsemble fake;
        fake.detector = "D";
        fake.site_labels = {"X"};
        Path p1;
        p1.amplitude = 1.0;
        p1.sites = {"X"};
        Path p2;
        p2.amplitude = -1.0 + 1e-9;
        fake.paths = {p1, p2};
        fake.total = p1.amplitude + p2.amplitude;
        try {
            (void)pointer_shift_exact(fake, {1.0, 1e-9, "X"});
            FAIL("expected DegeneratePointer");
        } catch (const Error &err) {
            CHECK(err.code() == ErrorCode::DegeneratePointer);
        }
    }
    CHECK(in_weak_regime({1.0, 0.125, "A"}));
    CHECK_FALSE(in_weak_regime({1.0, 0.2, "A"}));
}
