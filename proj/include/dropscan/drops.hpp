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
 * @file drops.hpp
 * Droplet bookkeeping and the DROPS operator/function correspondence for one
 * and two qubits: axial tensor operators T_{j0}^{(l)}, the scanning rotation,
 * ideal basis droplets of Pauli words, and spherical-harmonic coefficients.
 */

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "harmonics.hpp"
#include "qcore.hpp"
#include "sampling.hpp"

namespace dropscan {

/// Qubit subset a droplet component acts on.
enum class Label { Empty, One, Two, Both };

inline std::string label_name(Label l) {
    switch (l) {
    case Label::Empty:
        return "empty";
    case Label::One:
        return "1";
    case Label::Two:
        return "2";
    case Label::Both:
        return "12";
    }
    return "?";
}

inline Label label_from_name(const std::string &s) {
    if (s == "empty" || s == "0") {
        return Label::Empty;
    }
    if (s == "1") {
        return Label::One;
    }
    if (s == "2") {
        return Label::Two;
    }
    if (s == "12") {
        return Label::Both;
    }
    throw Error("unknown droplet label '" + s + "'");
}

/// Rank value marking a droplet summed over all ranks of its label.
inline constexpr int kCombinedRank = -1;

struct DropletKey {
    Label label = Label::Empty;
    int rank = 0;

    friend auto operator<=>(const DropletKey &, const DropletKey &) = default;
};

inline std::string to_string(const DropletKey &k) {
    return label_name(k.label) + (k.rank == kCombinedRank ? std::string(":all") : ":" + std::to_string(k.rank));
}

/// Legal (label, rank) pairs for an n-qubit system, in canonical order.
inline std::vector<DropletKey> droplet_keys(std::size_t n) {
    switch (n) {
    case 1:
        return {{Label::Empty, 0}, {Label::One, 1}};
    case 2:
        return {{Label::Empty, 0}, {Label::One, 1}, {Label::Two, 1},
                {Label::Both, 0},  {Label::Both, 1}, {Label::Both, 2}};
    default:
        throw Error("droplet_keys: only 1 or 2 qubits are supported");
    }
}

inline bool is_legal(std::size_t n, const DropletKey &key) {
    if (n != 1 && n != 2) {
        return false;
    }
    for (const auto &k : droplet_keys(n)) {
        if (k == key) {
            return true;
        }
    }
    return false;
}

/// Complex droplet values on the points of a grid.
struct Droplet {
    DropletKey key;
    GridPtr grid;
    std::vector<complex> values;

    Droplet(DropletKey k, GridPtr g) : key(k), grid(std::move(g)), values(grid ? grid->size() : 0) {
        if (!grid) {
            throw Error("Droplet: null grid");
        }
    }
    Droplet(DropletKey k, GridPtr g, std::vector<complex> v) : key(k), grid(std::move(g)), values(std::move(v)) {
        if (!grid || values.size() != grid->size()) {
            throw Error("Droplet: value count does not match grid");
        }
    }

    std::size_t size() const { return values.size(); }

    /// sqrt(sum |f|^2) over grid points (unweighted).
    double l2_norm() const {
        double s = 0.0;
        for (const auto &v : values) {
            s += std::norm(v);
        }
        return std::sqrt(s);
    }

    Droplet &operator+=(const Droplet &o) {
        if (!same_grid(*grid, *o.grid)) {
            throw Error("Droplet: grid mismatch in sum");
        }
        for (std::size_t i = 0; i < values.size(); ++i) {
            values[i] += o.values[i];
        }
        return *this;
    }

    static bool same_grid(const SamplingGrid &a, const SamplingGrid &b) { return &a == &b || a == b; }
};

/// Discrete overlap 4pi * sum_i w_i conj(a_i) b_i.
inline complex discrete_scalar_product(const Droplet &a, const Droplet &b) {
    if (!Droplet::same_grid(*a.grid, *b.grid)) {
        throw Error("discrete_scalar_product: droplets live on different grids");
    }
    const auto &w = a.grid->weights();
    complex acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        acc += w[i] * std::conj(a.values[i]) * b.values[i];
    }
    return kQuadratureScale * acc;
}

/// T_{j0}^{(l)} for one or two qubits; Hermitian with tr(T^2) = 1.
inline ComplexMatrix axial_tensor(std::size_t n, const DropletKey &key) {
    if (!is_legal(n, key)) {
        throw Error("axial_tensor: illegal key " + to_string(key) + " for " + std::to_string(n) + " qubit(s)");
    }
    using std::numbers::sqrt2;
    using std::numbers::sqrt3;
    if (n == 1) {
        return key.label == Label::Empty ? (1.0 / sqrt2) * ComplexMatrix::identity(2)
                                         : (1.0 / sqrt2) * pauli(Axis::Z);
    }
    const auto xx = pauli_word({Axis::X, Axis::X});
    const auto yy = pauli_word({Axis::Y, Axis::Y});
    const auto zz = pauli_word({Axis::Z, Axis::Z});
    switch (key.label) {
    case Label::Empty:
        return 0.5 * ComplexMatrix::identity(4);
    case Label::One:
        return 0.5 * embedded_pauli(Axis::Z, 1, 2);
    case Label::Two:
        return 0.5 * embedded_pauli(Axis::Z, 2, 2);
    case Label::Both:
        break;
    }
    switch (key.rank) {
    case 0:
        return (1.0 / (2.0 * sqrt3)) * (xx + yy + zz);
    case 1:
        return (1.0 / (2.0 * sqrt2)) * (pauli_word({Axis::X, Axis::Y}) - pauli_word({Axis::Y, Axis::X}));
    default:
        return (-1.0 / (2.0 * std::sqrt(6.0))) * (xx + yy - 2.0 * zz);
    }
}

/// Single-qubit exp(-i alpha sz/2) exp(-i beta sy/2).
inline ComplexMatrix rotation_qubit(double beta, double alpha) {
    const double c = std::cos(beta / 2.0);
    const double s = std::sin(beta / 2.0);
    const complex em = std::polar(1.0, -alpha / 2.0);
    const complex ep = std::polar(1.0, alpha / 2.0);
    return ComplexMatrix(2, 2, {em * c, -em * s, ep * s, ep * c});
}

/// R_{alpha beta} = exp(-i alpha F_z) exp(-i beta F_y) with F = sum of sigma/2 over all n qubits.
inline ComplexMatrix rotation_operator(std::size_t n, double beta, double alpha) {
    if (n < 1 || n > kMaxQubits) {
        throw Error("rotation_operator: qubit count out of range");
    }
    const ComplexMatrix r = rotation_qubit(beta, alpha);
    ComplexMatrix out = r;
    for (std::size_t k = 1; k < n; ++k) {
        out = kron(out, r);
    }
    return out;
}

/// Rotated axial tensor R T_{j0} R^dagger.
inline ComplexMatrix rotated_axial_tensor(std::size_t n, const DropletKey &key, double beta, double alpha) {
    const ComplexMatrix r = rotation_operator(n, beta, alpha);
    return r * axial_tensor(n, key) * r.adjoint();
}

/// Droplet of an arbitrary operator by direct trace: s_j tr(T_{j,ab}^dagger A).
///
/// This is the noiseless reference for the scanning pipelines. `key.rank` may
/// be kCombinedRank to sum all ranks of the label.
inline Droplet operator_droplet(const ComplexMatrix &a, std::size_t n, DropletKey key, const GridPtr &grid) {
    std::vector<DropletKey> parts;
    if (key.rank == kCombinedRank) {
        for (const auto &k : droplet_keys(n)) {
            if (k.label == key.label) {
                parts.push_back(k);
            }
        }
    } else {
        parts.push_back(key);
    }
    if (parts.empty() || !is_legal(n, parts.front())) {
        throw Error("operator_droplet: illegal key " + to_string(key));
    }
    Droplet d(key, grid);
    for (std::size_t i = 0; i < grid->size(); ++i) {
        const auto &p = grid->points()[i];
        complex v = 0.0;
        for (const auto &k : parts) {
            v += rank_prefactor(k.rank) * operator_scalar_product(rotated_axial_tensor(n, k, p.beta, p.alpha), a);
        }
        d.values[i] = v;
    }
    return d;
}

struct HarmonicTerm {
    int j;
    int m;
    complex coefficient;
};

/// Label carried by a Pauli word: the set of qubits with a non-identity factor.
inline Label word_label(std::span<const Axis> word) {
    const bool first = !word.empty() && word[0] != Axis::I;
    const bool second = word.size() > 1 && word[1] != Axis::I;
    if (word.size() == 1) {
        return first ? Label::One : Label::Empty;
    }
    if (first && second) {
        return Label::Both;
    }
    if (first) {
        return Label::One;
    }
    return second ? Label::Two : Label::Empty;
}

/// Spherical-harmonic expansion of the ideal basis droplet of a Pauli word.
inline std::vector<HarmonicTerm> basis_expansion(std::span<const Axis> word) {
    using std::numbers::sqrt2;
    using std::numbers::sqrt3;
    const complex i = kI;
    auto linear = [&](Axis a, double scale) -> std::vector<HarmonicTerm> {
        switch (a) {
        case Axis::X:
            return {{1, -1, scale}, {1, 1, -scale}};
        case Axis::Y:
            return {{1, -1, i * scale}, {1, 1, i * scale}};
        case Axis::Z:
            return {{1, 0, sqrt2 * scale}};
        case Axis::I:
            break;
        }
        return {};
    };
    if (word.size() == 1) {
        if (word[0] == Axis::I) {
            return {{0, 0, sqrt2}};
        }
        return linear(word[0], 1.0);
    }
    if (word.size() != 2) {
        throw Error("basis_expansion: only 1- and 2-qubit words are supported");
    }
    const Axis a = word[0];
    const Axis b = word[1];
    if (a == Axis::I && b == Axis::I) {
        return {{0, 0, 1.0}};
    }
    if (b == Axis::I) {
        return linear(a, 1.0 / sqrt2);
    }
    if (a == Axis::I) {
        return linear(b, 1.0 / sqrt2);
    }
    const double h = 0.5;
    const double r3 = 1.0 / sqrt3;
    const double r6 = 1.0 / std::sqrt(6.0);
    const double r2 = 1.0 / sqrt2;
    using A = Axis;
    if (a == A::X && b == A::X) {
        return {{0, 0, r3}, {2, -2, h}, {2, 0, -r6}, {2, 2, h}};
    }
    if (a == A::X && b == A::Y) {
        return {{1, 0, r2}, {2, -2, i * h}, {2, 2, -i * h}};
    }
    if (a == A::X && b == A::Z) {
        return {{1, -1, -i * h}, {1, 1, -i * h}, {2, -1, h}, {2, 1, -h}};
    }
    if (a == A::Y && b == A::X) {
        return {{1, 0, -r2}, {2, -2, i * h}, {2, 2, -i * h}};
    }
    if (a == A::Y && b == A::Y) {
        return {{0, 0, r3}, {2, -2, -h}, {2, 0, -r6}, {2, 2, -h}};
    }
    if (a == A::Y && b == A::Z) {
        return {{1, -1, h}, {1, 1, -h}, {2, -1, i * h}, {2, 1, i * h}};
    }
    if (a == A::Z && b == A::X) {
        return {{1, -1, i * h}, {1, 1, i * h}, {2, -1, h}, {2, 1, -h}};
    }
    if (a == A::Z && b == A::Y) {
        return {{1, -1, -h}, {1, 1, h}, {2, -1, i * h}, {2, 1, i * h}};
    }
    return {{0, 0, r3}, {2, 0, std::sqrt(2.0 / 3.0)}};
}

/// Ideal basis droplet f_{sigma-word} evaluated on a grid.
///
/// The droplet is the rank-summed view of its label (key.rank = kCombinedRank).
inline Droplet basis_droplet(std::span<const Axis> word, const GridPtr &grid) {
    if (word.empty() || word.size() > 2) {
        throw Error("basis_droplet: only 1- and 2-qubit Pauli words are supported");
    }
    const auto terms = basis_expansion(word);
    Droplet d({word_label(word), kCombinedRank}, grid);
    for (std::size_t i = 0; i < grid->size(); ++i) {
        const auto &p = grid->points()[i];
        complex v = 0.0;
        for (const auto &t : terms) {
            v += t.coefficient * spherical_harmonic(t.j, t.m, p.beta, p.alpha);
        }
        d.values[i] = v;
    }
    return d;
}

inline Droplet basis_droplet(std::initializer_list<Axis> word, const GridPtr &grid) {
    return basis_droplet(std::span<const Axis>(word.begin(), word.size()), grid);
}

/// Coefficients c_jm for j <= 2, stored at index j*j + j + m.
struct HarmonicCoefficients {
    std::array<complex, 9> c{};

    static constexpr std::size_t index(int j, int m) { return static_cast<std::size_t>(j * j + j + m); }
    complex &operator()(int j, int m) { return c[index(j, m)]; }
    const complex &operator()(int j, int m) const { return c[index(j, m)]; }

    /// Evaluates sum c_jm Y_jm at one point.
    complex evaluate(double beta, double alpha) const {
        complex v = 0.0;
        for (int j = 0; j <= kMaxRank; ++j) {
            for (int m = -j; m <= j; ++m) {
                v += (*this)(j, m) * spherical_harmonic(j, m, beta, alpha);
            }
        }
        return v;
    }
};

namespace detail {
/// Solves A x = b for a small dense complex system (partial pivoting).
template <std::size_t N>
std::array<complex, N> solve_dense(std::array<std::array<complex, N>, N> a, std::array<complex, N> b) {
    for (std::size_t col = 0; col < N; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < N; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) {
                piv = r;
            }
        }
        if (std::abs(a[piv][col]) < 1e-14) {
            throw Error("harmonic_coefficients: grid cannot resolve rank-2 harmonics (singular Gram matrix)");
        }
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = col + 1; r < N; ++r) {
            const complex f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < N; ++c) {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    std::array<complex, N> x{};
    for (std::size_t r = N; r-- > 0;) {
        complex acc = b[r];
        for (std::size_t c = r + 1; c < N; ++c) {
            acc -= a[r][c] * x[c];
        }
        x[r] = acc / a[r][r];
    }
    return x;
}
}  // namespace detail

/// Discrete Gram matrix G[a][b] = 4pi sum_i w_i conj(Y_a) Y_b of the harmonics
/// j <= 2 (index j*j + j + m); the identity on an exact quadrature.
using HarmonicGram = std::array<std::array<complex, 9>, 9>;

namespace detail {
inline void harmonics_at(const GridPoint &p, std::array<complex, 9> &y) {
    for (int j = 0; j <= kMaxRank; ++j) {
        for (int m = -j; m <= j; ++m) {
            y[HarmonicCoefficients::index(j, m)] = spherical_harmonic(j, m, p.beta, p.alpha);
        }
    }
}
}  // namespace detail

inline HarmonicGram harmonic_gram(const SamplingGrid &grid) {
    HarmonicGram gram{};
    std::array<complex, 9> y{};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        detail::harmonics_at(grid.points()[i], y);
        const double w = kQuadratureScale * grid.weights()[i];
        for (std::size_t r = 0; r < 9; ++r) {
            const complex wr = w * std::conj(y[r]);
            for (std::size_t c = 0; c < 9; ++c) {
                gram[r][c] += wr * y[c];
            }
        }
    }
    return gram;
}

/// Band-limited (j <= 2) harmonic expansion of a droplet.
///
/// The projections <Y_jm|f> use the grid's discrete scalar product and are
/// corrected by the inverse discrete Gram matrix of the harmonics, so a
/// band-limited droplet is recovered exactly on any grid that resolves rank 2.
inline HarmonicCoefficients harmonic_coefficients(const Droplet &d) {
    const auto &grid = *d.grid;
    if (grid.weights().size() != grid.size()) {
        throw Error("harmonic_coefficients: grid has no weights");
    }
    std::array<complex, 9> proj{};
    std::array<complex, 9> y{};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        detail::harmonics_at(grid.points()[i], y);
        const double w = kQuadratureScale * grid.weights()[i];
        for (std::size_t r = 0; r < 9; ++r) {
            proj[r] += w * std::conj(y[r]) * d.values[i];
        }
    }
    HarmonicCoefficients out;
    out.c = detail::solve_dense<9>(harmonic_gram(grid), proj);
    return out;
}

/// Samples a harmonic expansion on a grid.
inline Droplet droplet_from_coefficients(const HarmonicCoefficients &c, DropletKey key, const GridPtr &grid) {
    Droplet d(key, grid);
    for (std::size_t i = 0; i < grid->size(); ++i) {
        d.values[i] = c.evaluate(grid->points()[i].beta, grid->points()[i].alpha);
    }
    return d;
}

}  // namespace dropscan
