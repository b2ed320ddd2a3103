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
 * Iterative radix-2 Cooley-Tukey FFT and the one-sided power spectrum.
 */

#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "mzi/errors.hpp"

namespace mzi {

constexpr bool is_power_of_two(std::size_t n) noexcept { return std::has_single_bit(n); }

/// In-place forward transform X_k = sum_j x_j exp(-2 pi i j k / N).
inline void fft_inplace(std::span<std::complex<double>> data) {
    const std::size_t n = data.size();
    if (!is_power_of_two(n)) {
        throw Error(ErrorCode::InvalidArgument, "fft",
                    "length " + std::to_string(n) + " is not a power of two");
    }
    if (n == 1) {
        return;
    }
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) {
            j ^= bit;
        }
        j ^= bit;
        if (i < j) {
            std::swap(data[i], data[j]);
        }
    }
    // Twiddles evaluated directly (not by recurrence) to keep rounding flat.
    std::vector<std::complex<double>> twiddle(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        twiddle[k] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) /
                                         static_cast<double>(n));
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t stride = n / len;
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const auto u = data[start + k];
                const auto v = data[start + k + half] * twiddle[k * stride];
                data[start + k] = u + v;
                data[start + k + half] = u - v;
            }
        }
    }
}

/// One-sided amplitude-normalized power, length N/2, with power[0] = 0 (DC
/// dropped). A bin-aligned a * sin(2 pi k0 j / N) gives power[k0] = a^2.
inline std::vector<double> spectrum(std::span<const double> x) {
    std::vector<std::complex<double>> work(x.begin(), x.end());
    fft_inplace(work);
    const std::size_t n = x.size();
    std::vector<double> power(n / 2, 0.0);
    const double scale = 2.0 / static_cast<double>(n);
    for (std::size_t k = 1; k < n / 2; ++k) {
        power[k] = std::norm(work[k] * scale);
    }
    return power;
}

} // namespace mzi
