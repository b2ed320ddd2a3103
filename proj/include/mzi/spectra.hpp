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
 * Frequency-tagged probe experiment.
 *
 * Every modulated site displaces the transverse pointer of the paths through
 * it by delta * sigma * sin(2 pi bin k / N) at sample k. The detector's mean
 * transverse position is sampled over one window and Fourier analysed; each
 * site's bin then shows how strongly that site marks the detected light.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mzi/errors.hpp"
#include "mzi/fft.hpp"
#include "mzi/netgraph.hpp"
#include "mzi/pathsum.hpp"
#include "mzi/weakval.hpp"

namespace mzi {

/// Peaks below this are reported as absent.
inline constexpr double kAbsentPower = 1e-20;
/// Noise floor = this factor times the median off-site bin power.
inline constexpr double kFloorFactor = 5.0;

struct SiteTone {
    std::string site;
    double delta = 0.0;  // displacement amplitude in units of sigma
    int bin = 0;         // cycles per window

    bool operator==(const SiteTone &) const = default;
};

struct ModulationPlan {
    std::vector<SiteTone> tones;
    int samples = 4096;

    bool operator==(const ModulationPlan &) const = default;
};

inline void validate_plan(const ModulationPlan &plan) {
    std::vector<Issue> issues;
    if (plan.samples < 4 || !is_power_of_two(static_cast<std::size_t>(plan.samples))) {
        issues.push_back({ErrorCode::InvalidPlan, "samples",
                          "sample count must be a power of two >= 4"});
    }
    std::set<std::string> sites;
    std::set<int> bins;
    for (const auto &tone : plan.tones) {
        if (!sites.insert(tone.site).second) {
            issues.push_back({ErrorCode::InvalidPlan, tone.site, "site listed twice"});
        }
        if (!bins.insert(tone.bin).second) {
            issues.push_back({ErrorCode::InvalidPlan, tone.site,
                              "bin " + std::to_string(tone.bin) + " already used"});
        }
        if (tone.bin <= 0 || 2 * tone.bin >= plan.samples) {
            issues.push_back({ErrorCode::InvalidPlan, tone.site,
                              "bin must satisfy 0 < bin < samples/2"});
        }
        if (!(tone.delta >= 0.0) || !std::isfinite(tone.delta)) {
            issues.push_back({ErrorCode::InvalidPlan, tone.site,
                              "delta must be finite and non-negative"});
        }
    }
    if (!issues.empty()) {
        throw Error(std::move(issues));
    }
}

/// Bins 13, 17, 19, 23, 29 for sites A, B, C, E, F, all with the same delta.
inline ModulationPlan standard_plan(double delta, int samples = 4096) {
    ModulationPlan plan;
    plan.samples = samples;
    const std::pair<const char *, int> bins[] = {
        {"A", 13}, {"B", 17}, {"C", 19}, {"E", 23}, {"F", 29}};
    for (const auto &[site, bin] : bins) {
        plan.tones.push_back({site, delta, bin});
    }
    return plan;
}

/// Plan assembled from the modulation fields stored on the network's arms.
/// Each modulated arm must carry a site label and an integer frequency.
inline ModulationPlan plan_from_arms(const Network &net, int samples = 4096) {
    ModulationPlan plan;
    plan.samples = samples;
    for (const auto &arm : net.arms()) {
        if (!arm.modulation) {
            continue;
        }
        const double bin = arm.modulation->freq;
        if (!arm.label || bin != std::round(bin)) {
            throw Error(ErrorCode::InvalidPlan, arm.id,
                        "modulated arm needs a site label and an integer freq");
        }
        plan.tones.push_back({*arm.label, arm.modulation->delta, static_cast<int>(bin)});
    }
    validate_plan(plan);
    return plan;
}

struct Readout {
    std::vector<double> xbar;  // mean transverse position at each sample
    std::vector<double> rate;  // post-selected norm at each sample
};

/// Samples the detector's pointer mean and rate over one modulation window.
inline Readout readout_timeseries(const Network &net, const ModulationPlan &plan,
                                  double sigma, std::string_view detector = "D") {
    validate_plan(plan);
    const auto ens = enumerate_paths(net, detector);
    for (const auto &tone : plan.tones) {
        if (!ens.knows_site(tone.site)) {
            throw Error(ErrorCode::UnknownLabel, tone.site, "plan names an unknown site");
        }
    }

    // Tones acting on each path.
    std::vector<std::vector<const SiteTone *>> path_tones(ens.paths.size());
    for (std::size_t i = 0; i < ens.paths.size(); ++i) {
        for (const auto &tone : plan.tones) {
            if (ens.paths[i].visits(tone.site)) {
                path_tones[i].push_back(&tone);
            }
        }
    }

    const auto n = static_cast<std::size_t>(plan.samples);
    // One table of sin(2 pi m / N); bins are integers so every phase is exact.
    std::vector<double> sine(n);
    for (std::size_t m = 0; m < n; ++m) {
        sine[m] = std::sin(2.0 * std::numbers::pi * static_cast<double>(m) /
                           static_cast<double>(n));
    }

    Readout out;
    out.xbar.resize(n);
    out.rate.resize(n);
    std::vector<PointerBranch> branches(ens.paths.size());
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < ens.paths.size(); ++i) {
            double offset = 0.0;
            for (const auto *tone : path_tones[i]) {
                const auto phase = (static_cast<std::size_t>(tone->bin) * k) % n;
                offset += tone->delta * sigma * sine[phase];
            }
            branches[i] = {ens.paths[i].amplitude, offset};
        }
        try {
            const auto moments = pointer_moments(branches, sigma);
            out.xbar[k] = moments.mean;
            out.rate[k] = moments.norm;
        } catch (const Error &err) {
            if (err.code() != ErrorCode::DegeneratePointer) {
                throw;
            }
            throw Error(ErrorCode::DegeneratePointer, "sample " + std::to_string(k),
                        "post-selected pointer norm vanished");
        }
    }
    return out;
}

enum class PeakClass { Strong, BelowThreshold, Absent };

constexpr std::string_view to_string(PeakClass c) noexcept {
    switch (c) {
    case PeakClass::Strong:
        return "strong";
    case PeakClass::BelowThreshold:
        return "below_threshold";
    case PeakClass::Absent:
        return "absent";
    }
    return "unknown";
}

struct SitePeak {
    std::string site;
    int bin = 0;
    double power = 0.0;
    PeakClass classification = PeakClass::Absent;
};

struct NoiseSpec {
    double std = 0.0;
    std::uint64_t seed = 0;

    bool operator==(const NoiseSpec &) const = default;
};

struct SpectralReport {
    Readout readout;             // xbar includes any added noise
    std::vector<double> power;   // length N/2, power[0] = 0
    std::vector<SitePeak> peaks; // plan order
    double noise_floor = 0.0;
    double mean_rate = 0.0;
};

/// Standard normal deviates from a seeded 64-bit Mersenne Twister via
/// Box-Muller, so a seed reproduces the same noise on every platform.
class GaussianNoise {
  public:
    explicit GaussianNoise(std::uint64_t seed) : rng_(seed) {}

    double operator()() {
        if (spare_) {
            const double v = *spare_;
            spare_.reset();
            return v;
        }
        double u1 = 0.0;
        while (u1 == 0.0) {
            u1 = uniform();
        }
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(t);
        return r * std::cos(t);
    }

  private:
    double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

    std::mt19937_64 rng_;
    std::optional<double> spare_;
};

inline double median(std::vector<double> values) {
    if (values.empty()) {
        return 0.0;
    }
    const auto mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid),
                     values.end());
    const double upper = values[mid];
    if (values.size() % 2 == 1) {
        return upper;
    }
    const double lower =
        *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

/// Classifies each site peak against `floor`.
inline PeakClass classify_peak(double power, double floor) {
    if (power < kAbsentPower) {
        return PeakClass::Absent;
    }
    return power > floor ? PeakClass::Strong : PeakClass::BelowThreshold;
}

inline SpectralReport run_spectral_experiment(const Network &net, const ModulationPlan &plan,
                                              double sigma,
                                              const std::optional<NoiseSpec> &noise = {},
                                              std::string_view detector = "D") {
    SpectralReport report;
    report.readout = readout_timeseries(net, plan, sigma, detector);
    auto &xbar = report.readout.xbar;
    if (noise && noise->std > 0.0) {
        GaussianNoise gauss(noise->seed);
        for (auto &x : xbar) {
            x += noise->std * gauss();
        }
    }
    report.power = spectrum(xbar);

    std::vector<bool> assigned(report.power.size(), false);
    for (const auto &tone : plan.tones) {
        assigned[static_cast<std::size_t>(tone.bin)] = true;
    }
    std::vector<double> off_site;
    for (std::size_t k = 1; k < report.power.size(); ++k) {
        if (!assigned[k]) {
            off_site.push_back(report.power[k]);
        }
    }
    report.noise_floor = kFloorFactor * median(std::move(off_site));
    for (const auto &tone : plan.tones) {
        const double p = report.power[static_cast<std::size_t>(tone.bin)];
        report.peaks.push_back({tone.site, tone.bin, p, classify_peak(p, report.noise_floor)});
    }

    double sum = 0.0;
    for (double r : report.readout.rate) {
        sum += r;
    }
    report.mean_rate = sum / static_cast<double>(report.readout.rate.size());
    return report;
}

struct BlockingCase {
    std::string name;                  // "baseline" or "block <site>"
    std::optional<std::string> blocked_site;
    double static_probability = 0.0;   // |A|^2 without modulation
    SpectralReport report;

    [[nodiscard]] double peak_power(std::string_view site) const {
        for (const auto &peak : report.peaks) {
            if (peak.site == site) {
                return peak.power;
            }
        }
        throw Error(ErrorCode::UnknownLabel, std::string(site), "site not in plan");
    }
};

struct BlockingReport {
    std::vector<BlockingCase> cases;  // baseline first
};

/// Baseline plus one run per blocked site (default: the two arms joining the
/// inner interferometer to the outer one, E and F). Reports only; callers do
/// the comparing.
inline BlockingReport run_blocking_suite(const Network &net, const ModulationPlan &plan,
                                         double sigma,
                                         const std::vector<std::string> &blocks = {"E", "F"},
                                         std::string_view detector = "D") {
    BlockingReport out;
    auto run_case = [&](std::string name, std::optional<std::string> site,
                        const Network &config) {
        BlockingCase c;
        c.name = std::move(name);
        c.blocked_site = std::move(site);
        c.static_probability = detection_probability(enumerate_paths(config, detector));
        c.report = run_spectral_experiment(config, plan, sigma, std::nullopt, detector);
        out.cases.push_back(std::move(c));
    };
    run_case("baseline", std::nullopt, net);
    for (const auto &site : blocks) {
        run_case("block " + site, site, apply_block(net, site));
    }
    return out;
}

} // namespace mzi
