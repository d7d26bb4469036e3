// Copyright 2026 The dropscan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Complex spherical harmonics up to rank 2, orthonormal on the unit sphere,
// with the Condon-Shortley phase: Y_{j,-m} = (-1)^m conj(Y_{jm}).
// beta is the polar angle, alpha the azimuth.

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "error.hpp"

namespace dropscan {

inline constexpr int kMaxRank = 2;

inline bool valid_harmonic(int j, int m) { return j >= 0 && j <= kMaxRank && m >= -j && m <= j; }

inline std::complex<double> spherical_harmonic(int j, int m, double beta, double alpha) {
    if (!valid_harmonic(j, m)) {
        throw Error("spherical_harmonic: invalid (j, m) = (" + std::to_string(j) + ", " + std::to_string(m) + ")");
    }
    constexpr double pi = std::numbers::pi;
    const double c = std::cos(beta);
    const double s = std::sin(beta);
    const std::complex<double> phase = std::polar(1.0, m * alpha);
    switch (j) {
    case 0:
        return 0.5 / std::sqrt(pi);
    case 1:
        if (m == 0) {
            return std::sqrt(3.0 / (4.0 * pi)) * c;
        }
        return -m * std::sqrt(3.0 / (8.0 * pi)) * s * phase;
    default:
        switch (m) {
        case 0:
            return std::sqrt(5.0 / (16.0 * pi)) * (3.0 * c * c - 1.0);
        case 1:
        case -1:
            return -m * std::sqrt(15.0 / (8.0 * pi)) * s * c * phase;
        default:
            return std::sqrt(15.0 / (32.0 * pi)) * s * s * phase;
        }
    }
}

/// Droplet prefactor s_j = sqrt((2j+1) / 4pi).
inline double rank_prefactor(int j) { return std::sqrt((2.0 * j + 1.0) / (4.0 * std::numbers::pi)); }

}  // namespace dropscan
