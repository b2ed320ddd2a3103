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
 * Relative path amplitudes, projector weak values and the finite-strength
 * Gaussian pointer.
 *
 * For a post-selected ensemble with path amplitudes A_i and total A, the
 * relative amplitudes are alpha_i = A_i / A. A weakly coupled meter for an
 * observable with per-path values B_i reads sum_i B_i alpha_i; a site
 * projector picks out the alpha_i of the paths through that site.
 */

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mzi/errors.hpp"
#include "mzi/pathsum.hpp"

namespace mzi {

/// |A| at or below this is treated as an impossible post-selection.
inline constexpr double kVanishingTotal = 1e-14;
/// Post-selected pointer norms below this are treated as fully destructive.
inline constexpr double kDegenerateNorm = 1e-14;

struct RelativeAmplitudes {
    std::vector<Amplitude> alpha;  // same order as PathEnsemble::paths
};

struct WeakValue {
    std::string site;
    Amplitude value;
};

/// Per-path eigenvalues B_i of an observable diagonal in the path basis.
struct Observable {
    std::vector<Amplitude> eigenvalues;

    /// B_i = value * delta_{i, index}.
    static Observable projector(std::size_t paths, std::size_t index,
                                Amplitude value = Amplitude{1.0}) {
        Observable obs{std::vector<Amplitude>(paths)};
        obs.eigenvalues.at(index) = value;
        return obs;
    }
};

namespace detail {

inline void require_post_selection(const PathEnsemble &ens) {
    if (!(std::abs(ens.total) > kVanishingTotal)) {
        throw Error(ErrorCode::VanishingTotal, ens.detector,
                    "total amplitude vanishes; post-selection is impossible");
    }
}

inline void require_site(const PathEnsemble &ens, std::string_view site) {
    if (!ens.knows_site(site)) {
        throw Error(ErrorCode::UnknownLabel, std::string(site), "unknown site label");
    }
}

} // namespace detail

inline RelativeAmplitudes relative_amplitudes(const PathEnsemble &ens) {
    detail::require_post_selection(ens);
    RelativeAmplitudes rel;
    rel.alpha.reserve(ens.paths.size());
    for (const auto &path : ens.paths) {
        rel.alpha.push_back(path.amplitude / ens.total);
    }
    return rel;
}

/// Sum of A_i over the paths through `site` (not normalized).
inline Amplitude site_path_amplitude(const PathEnsemble &ens, std::string_view site) {
    detail::require_site(ens, site);
    Amplitude sum{};
    for (const auto &path : ens.paths) {
        if (path.visits(site)) {
            sum += path.amplitude;
        }
    }
    return sum;
}

/// Weak value of the projector onto `site`: the sum of relative amplitudes
/// of the paths passing it.
inline WeakValue projector_weak_value(const PathEnsemble &ens, std::string_view site) {
    detail::require_site(ens, site);
    const auto rel = relative_amplitudes(ens);
    Amplitude value{};
    for (std::size_t i = 0; i < ens.paths.size(); ++i) {
        if (ens.paths[i].visits(site)) {
            value += rel.alpha[i];
        }
    }
    return {std::string(site), value};
}

/// sum_i B_i alpha_i.
inline Amplitude weak_observable(const RelativeAmplitudes &rel, const Observable &obs) {
    if (obs.eigenvalues.size() != rel.alpha.size()) {
        throw Error(ErrorCode::LengthMismatch, "",
                    "observable has " + std::to_string(obs.eigenvalues.size()) +
                        " values for " + std::to_string(rel.alpha.size()) + " paths");
    }
    Amplitude sum{};
    for (std::size_t i = 0; i < rel.alpha.size(); ++i) {
        sum += obs.eigenvalues[i] * rel.alpha[i];
    }
    return sum;
}

/// Position pointer of spread `sigma` displaced by `g` on the branch through
/// `site`.
struct PointerModel {
    double sigma = 1.0;
    double g = 0.0;
    std::string site;
};

/// One Gaussian component A * G(x - offset) of a pointer wavefunction, with
/// G(x) = (2 pi sigma^2)^(-1/4) exp(-x^2 / (4 sigma^2)).
struct PointerBranch {
    Amplitude amplitude;
    double offset = 0.0;
};

struct PointerMoments {
    double norm = 0.0;  // integral of |f|^2
    double mean = 0.0;  // <x> of |f|^2 / norm
};

/// Integral of G(x - a) G(x - b).
inline double gaussian_overlap(double a, double b, double sigma) {
    const double d = a - b;
    return std::exp(-d * d / (8.0 * sigma * sigma));
}

/// Norm and mean position of f(x) = sum_k A_k G(x - offset_k), in closed form.
inline PointerMoments pointer_moments(std::span<const PointerBranch> branches,
                                      double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw Error(ErrorCode::InvalidArgument, "sigma", "pointer width must be positive");
    }
    double norm = 0.0;
    double first = 0.0;
    for (std::size_t i = 0; i < branches.size(); ++i) {
        const auto &bi = branches[i];
        norm += std::norm(bi.amplitude);
        first += std::norm(bi.amplitude) * bi.offset;
        for (std::size_t j = i + 1; j < branches.size(); ++j) {
            const auto &bj = branches[j];
            const double cross = 2.0 * (std::conj(bi.amplitude) * bj.amplitude).real() *
                                 gaussian_overlap(bi.offset, bj.offset, sigma);
            norm += cross;
            first += cross * 0.5 * (bi.offset + bj.offset);
        }
    }
    if (!(norm >= kDegenerateNorm)) {
        throw Error(ErrorCode::DegeneratePointer, "",
                    "post-selected pointer norm " + std::to_string(norm) +
                        " is below threshold");
    }
    return {norm, first / norm};
}

/// Exact mean pointer shift after post-selection, with the branch through the
/// site displaced by g and the rest left in place.
inline double pointer_shift_exact(const PathEnsemble &ens, const PointerModel &pm) {
    const Amplitude through = site_path_amplitude(ens, pm.site);
    const PointerBranch branches[] = {{ens.total - through, 0.0}, {through, pm.g}};
    return pointer_moments(branches, pm.sigma).mean;
}

/// Coupling strengths up to sigma/8 count as weak for reporting.
inline bool in_weak_regime(const PointerModel &pm) {
    return std::abs(pm.g) <= pm.sigma / 8.0;
}

} // namespace mzi
