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

/**
 * @file sampling.hpp
 * Sampling grids on the sphere and their quadrature weights.
 *
 * Weights are normalized to sum to one. Discrete scalar products multiply by
 * 4*pi (kQuadratureScale) so they converge to the surface integral over the
 * unit sphere.
 */

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"
#include "log.hpp"

namespace dropscan {

inline constexpr double kQuadratureScale = 4.0 * std::numbers::pi;

struct GridPoint {
    double beta = 0.0;   ///< polar angle in [0, pi]
    double alpha = 0.0;  ///< azimuth in [0, 2pi]

    friend bool operator==(const GridPoint &, const GridPoint &) = default;
};

enum class GridScheme { Equiangular, Imported };

class SamplingGrid {
  public:
    SamplingGrid(GridScheme scheme, std::string name, std::vector<GridPoint> points, std::vector<double> weights,
                 int resolution = 0, bool duplicate_seam = false)
        : scheme_(scheme), name_(std::move(name)), points_(std::move(points)), weights_(std::move(weights)),
          resolution_(resolution), duplicate_seam_(duplicate_seam) {
        if (points_.size() != weights_.size()) {
            throw Error("SamplingGrid: points and weights differ in length");
        }
        if (points_.empty()) {
            throw Error("SamplingGrid: no points");
        }
        constexpr double eps = 1e-12;
        for (std::size_t i = 0; i < points_.size(); ++i) {
            const auto &p = points_[i];
            if (!(p.beta >= -eps && p.beta <= std::numbers::pi + eps) ||
                !(p.alpha >= -eps && p.alpha <= 2.0 * std::numbers::pi + eps)) {
                throw Error("SamplingGrid: point " + std::to_string(i) + " outside beta in [0,pi], alpha in [0,2pi]");
            }
            if (!(weights_[i] >= 0.0)) {
                throw Error("SamplingGrid: negative weight at point " + std::to_string(i));
            }
        }
    }

    GridScheme scheme() const { return scheme_; }
    /// "equiangular:M=<M>" or "imported:<name>".
    const std::string &name() const { return name_; }
    const std::vector<GridPoint> &points() const { return points_; }
    const std::vector<double> &weights() const { return weights_; }
    std::size_t size() const { return points_.size(); }
    /// M for equiangular grids, 0 otherwise.
    int resolution() const { return resolution_; }
    bool duplicate_seam() const { return duplicate_seam_; }

    /// Characteristic angular spacing: pi/M, or sqrt(4pi/N) for imported grids.
    double spacing() const {
        if (scheme_ == GridScheme::Equiangular) {
            return std::numbers::pi / resolution_;
        }
        return std::sqrt(4.0 * std::numbers::pi / static_cast<double>(points_.size()));
    }

    double weight_sum() const {
        double s = 0.0;
        for (double w : weights_) {
            s += w;
        }
        return s;
    }

    friend bool operator==(const SamplingGrid &, const SamplingGrid &) = default;

  private:
    GridScheme scheme_;
    std::string name_;
    std::vector<GridPoint> points_;
    std::vector<double> weights_;
    int resolution_;
    bool duplicate_seam_;
};

using GridPtr = std::shared_ptr<const SamplingGrid>;

/// (M+1) polar x 2M azimuthal lattice with spacing pi/M and band-area weights.
///
/// With `duplicate_seam` the azimuth alpha = 2pi is sampled as well and both
/// seam columns carry half weight, giving (M+1) x (2M+1) points.
inline GridPtr equiangular_grid(int M, bool duplicate_seam = true) {
    if (M < 2) {
        throw Error("equiangular_grid: M must be >= 2");
    }
    const double d = std::numbers::pi / M;
    const int n_alpha = duplicate_seam ? 2 * M + 1 : 2 * M;
    std::vector<GridPoint> pts;
    std::vector<double> w;
    pts.reserve(static_cast<std::size_t>((M + 1) * n_alpha));
    w.reserve(pts.capacity());
    const double scale = 1.0 / (4.0 * M);
    for (int k = 0; k <= M; ++k) {
        const double theta = k * d;
        double band;
        if (k == 0 || k == M) {
            band = scale * (1.0 - std::cos(d / 2.0));
        } else {
            // cos(t - d/2) - cos(t + d/2), written without cancellation.
            band = scale * 2.0 * std::sin(theta) * std::sin(d / 2.0);
        }
        for (int l = 0; l < n_alpha; ++l) {
            const bool seam = duplicate_seam && (l == 0 || l == n_alpha - 1);
            // Exact endpoints keep alpha inside [0, 2pi].
            const double alpha = (l == 2 * M) ? 2.0 * std::numbers::pi : l * d;
            const double beta = (k == M) ? std::numbers::pi : theta;
            pts.push_back({beta, alpha});
            w.push_back(seam ? band / 2.0 : band);
        }
    }
    return std::make_shared<const SamplingGrid>(GridScheme::Equiangular, "equiangular:M=" + std::to_string(M),
                                                std::move(pts), std::move(w), M, duplicate_seam);
}

enum class WeightPolicy {
    /// Every line must carry a weight.
    Require,
    /// A file with no weight column at all gets equal weights (logged).
    EqualFallback,
};

/// Parses "beta alpha w" lines (radians, '#' comments). Weights are rescaled to sum to 1.
inline GridPtr parse_grid(std::istream &in, const std::string &name, WeightPolicy policy = WeightPolicy::Require) {
    std::vector<GridPoint> pts;
    std::vector<double> w;
    std::string line;
    std::size_t line_no = 0;
    int columns = -1;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream ls(line);
        std::vector<double> vals;
        std::string tok;
        while (ls >> tok) {
            try {
                std::size_t used = 0;
                vals.push_back(std::stod(tok, &used));
                if (used != tok.size()) {
                    throw std::invalid_argument(tok);
                }
            } catch (const std::exception &) {
                throw Error("grid '" + name + "' line " + std::to_string(line_no) + ": malformed number '" + tok + "'");
            }
        }
        if (vals.empty()) {
            continue;
        }
        const bool fallback_ok = policy == WeightPolicy::EqualFallback && vals.size() == 2 && columns != 3;
        if (vals.size() != 3 && !fallback_ok) {
            throw Error("grid '" + name + "' line " + std::to_string(line_no) + ": expected 'beta alpha weight', got " +
                        std::to_string(vals.size()) + " field(s)");
        }
        if (columns == 2 && vals.size() == 3) {
            throw Error("grid '" + name + "' line " + std::to_string(line_no) +
                        ": weight column present after weightless lines");
        }
        columns = static_cast<int>(vals.size());
        if (!std::isfinite(vals[0]) || !std::isfinite(vals[1])) {
            throw Error("grid '" + name + "' line " + std::to_string(line_no) + ": non-finite angle");
        }
        if (vals[0] < -1e-12 || vals[0] > std::numbers::pi + 1e-12 || vals[1] < -1e-12 ||
            vals[1] > 2.0 * std::numbers::pi + 1e-12) {
            throw Error("grid '" + name + "' line " + std::to_string(line_no) +
                        ": angle outside beta in [0,pi], alpha in [0,2pi]");
        }
        double weight = 1.0;
        if (vals.size() == 3) {
            weight = vals[2];
            if (!(weight >= 0.0) || !std::isfinite(weight)) {
                throw Error("grid '" + name + "' line " + std::to_string(line_no) + ": negative or invalid weight");
            }
        }
        pts.push_back({std::clamp(vals[0], 0.0, std::numbers::pi), std::clamp(vals[1], 0.0, 2.0 * std::numbers::pi)});
        w.push_back(weight);
    }
    if (pts.empty()) {
        throw Error("grid '" + name + "': no points");
    }
    if (columns == 2) {
        log_warning("grid '" + name + "' has no weight column; using equal weights");
    }
    double total = 0.0;
    for (double x : w) {
        total += x;
    }
    if (!(total > 0.0)) {
        throw Error("grid '" + name + "': weights sum to zero");
    }
    if (std::abs(total - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "grid '" << name << "' weights rescaled by " << 1.0 / total;
        log_warning(msg.str());
    }
    for (double &x : w) {
        x /= total;
    }
    return std::make_shared<const SamplingGrid>(GridScheme::Imported, "imported:" + name, std::move(pts),
                                                std::move(w));
}

inline GridPtr load_grid(const std::string &path, WeightPolicy policy = WeightPolicy::Require) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open grid file '" + path + "'");
    }
    std::string name = path;
    if (auto slash = name.find_last_of('/'); slash != std::string::npos) {
        name = name.substr(slash + 1);
    }
    if (auto dot = name.find_last_of('.'); dot != std::string::npos && dot > 0) {
        name = name.substr(0, dot);
    }
    return parse_grid(in, name, policy);
}

/// "equiangular:M=<M>" (optionally ",seam=0") or "file:<path>".
inline GridPtr grid_from_spec(const std::string &spec) {
    if (spec.rfind("equiangular:", 0) == 0) {
        std::string rest = spec.substr(12);
        bool seam = true;
        if (auto comma = rest.find(','); comma != std::string::npos) {
            const std::string opt = rest.substr(comma + 1);
            rest = rest.substr(0, comma);
            if (opt == "seam=0") {
                seam = false;
            } else if (opt != "seam=1") {
                throw Error("grid spec '" + spec + "': unknown option '" + opt + "'");
            }
        }
        if (rest.rfind("M=", 0) != 0) {
            throw Error("grid spec '" + spec + "': expected equiangular:M=<int>");
        }
        int M = 0;
        try {
            std::size_t used = 0;
            M = std::stoi(rest.substr(2), &used);
            if (used != rest.size() - 2) {
                throw std::invalid_argument(rest);
            }
        } catch (const std::exception &) {
            throw Error("grid spec '" + spec + "': bad M");
        }
        return equiangular_grid(M, seam);
    }
    if (spec.rfind("file:", 0) == 0) {
        return load_grid(spec.substr(5));
    }
    throw Error("grid spec '" + spec + "': expected equiangular:M=<M> or file:<path>");
}

/// The 8 x 15 grid used for the reference experiments.
inline GridPtr default_grid() { return equiangular_grid(7, true); }

}  // namespace dropscan
