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
 * @file tomography.hpp
 * Scanning tomography pipelines: detection settings, state tomography for one
 * and two qubits, single-qubit process tomography with an ancilla, matrix
 * reconstruction, fidelities, a linear-inversion baseline and a sampling study.
 *
 * Every pipeline runs in one of two modes. Ideal mode evaluates the required
 * Pauli expectations by direct trace on the scanned state; sampled mode draws
 * shots for each detection circuit with a seed derived from (master seed,
 * grid point, circuit, initialisation), so results do not depend on the order
 * in which grid points are processed.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "circuits.hpp"
#include "drops.hpp"
#include "error.hpp"
#include "qcore.hpp"
#include "sampling.hpp"

namespace dropscan {

/// Shots per detection circuit and grid point; std::nullopt means ideal mode.
using ShotSpec = std::optional<std::uint64_t>;
inline constexpr ShotSpec kIdeal = std::nullopt;

enum class TomographyMode { State, Process };

/// Reconstruction scale for state droplets (one or two qubits).
///
/// The ideal droplet of a Pauli word sigma_k is the operator droplet for one
/// qubit and half of it for two, while <f_sk|f_sk> = 2^n for operator
/// droplets. Either way the overlap of the basis droplet with the droplet of
/// rho = sum r_k sigma_k is 2 r_k, so r_k = overlap / 2.
inline constexpr double kStateKappa = 0.5;

/// Reconstruction scale for single-qubit process droplets.
///
/// The ancilla readout delivers tr(T U)/4 per rank (the prepared state carries
/// a factor 1/4 and sigma+ picks one off-diagonal block) and <f_sk|f_sk> = 2,
/// hence c_k = 4/2 * overlap.
inline constexpr double kProcessKappa = 2.0;

/// One measurement configuration contributing to a droplet value.
struct DetectionSetting {
    DropletKey key;
    /// Pauli word whose expectation the setting realises (qubit 0 first).
    std::vector<Axis> word;
    /// Local detection rotation per qubit; nullopt where sigma_z is read directly.
    std::vector<std::optional<U3Angles>> rotations;
    /// z-string (over basis-index bits) read from the counts.
    std::size_t mask = 0;
    /// Coefficient multiplying the expectation in the droplet value.
    complex weight = 0.0;
    /// Identifier of the measurement circuit, e.g. "xy"; equal ids share a circuit.
    std::string circuit;
};

/// U3 angles of V with V^dagger sigma_z V = sigma_axis.
inline std::optional<U3Angles> detection_rotation(Axis a) {
    switch (a) {
    case Axis::X:
        return U3Angles{-std::numbers::pi / 2.0, 0.0, 0.0};
    case Axis::Y:
        return U3Angles{-std::numbers::pi / 2.0, 0.0, -std::numbers::pi / 2.0};
    default:
        return std::nullopt;
    }
}

namespace detail {
inline DetectionSetting make_setting(DropletKey key, std::vector<Axis> word, complex weight) {
    DetectionSetting s;
    s.key = key;
    s.weight = weight;
    const std::size_t width = word.size();
    for (std::size_t q = 0; q < width; ++q) {
        s.rotations.push_back(detection_rotation(word[q]));
        if (word[q] != Axis::I) {
            s.mask |= std::size_t{1} << (width - 1 - q);
        }
        const char c = word[q] == Axis::I ? 'z' : static_cast<char>(std::tolower(axis_char(word[q])));
        s.circuit.push_back(c);
    }
    s.word = std::move(word);
    return s;
}
}  // namespace detail

/// Settings whose weighted expectations sum to the droplet value at one point.
///
/// State mode: s_j <T_j0^(l)> expanded into Pauli words. Process mode (n = 1,
/// ancilla on qubit 0): s_j (<s0x T> + i <s0y T>) / (2 sqrt 2) per rank.
inline std::vector<DetectionSetting> detection_settings(std::size_t n, DropletKey key,
                                                        TomographyMode mode = TomographyMode::State) {
    using A = Axis;
    using detail::make_setting;
    using std::numbers::sqrt2;
    using std::numbers::sqrt3;
    if (!is_legal(n, key)) {
        throw Error("detection_settings: illegal key " + to_string(key) + " for " + std::to_string(n) +
                    " qubit(s)");
    }
    const double s = rank_prefactor(key.rank);
    if (mode == TomographyMode::Process) {
        if (n != 1) {
            throw Error("detection_settings: process mode supports one system qubit");
        }
        const A sys = key.label == Label::Empty ? A::I : A::Z;
        const double w = s / (2.0 * sqrt2);
        return {make_setting(key, {A::X, sys}, w), make_setting(key, {A::Y, sys}, kI * w)};
    }
    if (n == 1) {
        if (key.label == Label::Empty) {
            return {make_setting(key, {A::I}, s / sqrt2)};
        }
        return {make_setting(key, {A::Z}, s / sqrt2)};
    }
    switch (key.label) {
    case Label::Empty:
        return {make_setting(key, {A::I, A::I}, s / 2.0)};
    case Label::One:
        return {make_setting(key, {A::Z, A::I}, s / 2.0)};
    case Label::Two:
        return {make_setting(key, {A::I, A::Z}, s / 2.0)};
    case Label::Both:
        break;
    }
    if (key.rank == 0) {
        const double w = s / (2.0 * sqrt3);
        return {make_setting(key, {A::X, A::X}, w), make_setting(key, {A::Y, A::Y}, w),
                make_setting(key, {A::Z, A::Z}, w)};
    }
    if (key.rank == 1) {
        const double w = s / (2.0 * sqrt2);
        return {make_setting(key, {A::X, A::Y}, w), make_setting(key, {A::Y, A::X}, -w)};
    }
    const double w = s / (2.0 * std::sqrt(6.0));
    return {make_setting(key, {A::X, A::X}, -w), make_setting(key, {A::Y, A::Y}, -w),
            make_setting(key, {A::Z, A::Z}, 2.0 * w)};
}

/// All settings for every legal key of an n-qubit state (or process) scan.
inline std::vector<DetectionSetting> all_detection_settings(std::size_t n, TomographyMode mode) {
    std::vector<DetectionSetting> out;
    for (const auto &k : droplet_keys(n)) {
        auto s = detection_settings(n, k, mode);
        out.insert(out.end(), s.begin(), s.end());
    }
    return out;
}

/// Detection block of a setting as a circuit of the given width.
inline Circuit detection_circuit(const DetectionSetting &s) {
    Circuit c(s.word.size(), "detect " + s.circuit);
    for (std::size_t q = 0; q < s.rotations.size(); ++q) {
        if (s.rotations[q]) {
            c.add(Gate::u3(q, *s.rotations[q]));
        }
    }
    return c;
}

/// Collection of droplets produced by one tomography run.
struct DropletSet {
    std::size_t qubits = 0;
    TomographyMode mode = TomographyMode::State;
    GridPtr grid;
    ShotSpec shots;
    std::uint64_t seed = 0;
    std::map<DropletKey, Droplet> droplets;

    bool ideal() const { return !shots.has_value(); }

    const Droplet &at(DropletKey key) const {
        auto it = droplets.find(key);
        if (it == droplets.end()) {
            throw Error("DropletSet: missing droplet " + to_string(key));
        }
        return it->second;
    }

    /// Rank-summed droplet f^(l) = sum_j f_j^(l); a derived view.
    Droplet combined(Label label) const {
        Droplet out({label, kCombinedRank}, grid);
        bool any = false;
        for (const auto &[k, d] : droplets) {
            if (k.label == label) {
                out += d;
                any = true;
            }
        }
        if (!any) {
            throw Error("DropletSet: no droplets with label " + label_name(label));
        }
        return out;
    }

    void require_complete() const {
        for (const auto &k : droplet_keys(qubits)) {
            (void)at(k);
        }
    }
};

namespace detail {

/// Expectation <psi|P|psi> of a Pauli word.
inline double pauli_expectation(const StateVector &psi, std::span<const Axis> word) {
    return expectation(pauli_word(word), psi.density()).real();
}

/// Per-point work shared by the state and process pipelines.
///
/// `prepared` holds the state(s) before the scanning rotation (several for
/// temporal averaging); `scan_qubits` are rotated by (R_ab)^{-1}.
inline void scan_point(const std::vector<StateVector> &prepared, const std::vector<std::size_t> &scan_qubits,
                       const GridPoint &p, std::size_t point_index, const std::vector<DetectionSetting> &settings,
                       const ShotSpec &shots, std::uint64_t seed, std::map<DropletKey, Droplet> &out) {
    const std::size_t width = prepared.front().qubits();
    Circuit rot(width, "scan");
    for (auto q : scan_qubits) {
        rot.add(scan_rotation_gate(p.beta, p.alpha, q));
    }
    std::vector<StateVector> rotated;
    rotated.reserve(prepared.size());
    for (const auto &psi : prepared) {
        rotated.push_back(run_statevector(rot, psi));
    }

    // Expectation per setting, averaged over the prepared runs.
    std::map<std::string, std::vector<ZExpectations>> sampled;
    if (shots) {
        std::size_t circuit_index = 0;
        for (const auto &s : settings) {
            if (sampled.count(s.circuit)) {
                continue;
            }
            const Circuit det = detection_circuit(s);
            auto &runs = sampled[s.circuit];
            for (std::size_t r = 0; r < rotated.size(); ++r) {
                const auto run_seed = derive_seed(seed, {point_index, circuit_index, r});
                runs.push_back(expectations_from_counts(sample_counts(det, rotated[r], *shots, run_seed)));
            }
            ++circuit_index;
        }
    }
    for (const auto &s : settings) {
        double e = 0.0;
        if (shots) {
            for (const auto &z : sampled.at(s.circuit)) {
                e += z[s.mask];
            }
        } else {
            for (const auto &psi : rotated) {
                e += pauli_expectation(psi, s.word);
            }
        }
        e /= static_cast<double>(rotated.size());
        out.at(s.key).values[point_index] += s.weight * e;
    }
}

inline void check_shots(const ShotSpec &shots) {
    if (shots && *shots < 1) {
        throw Error("shots must be >= 1 or ideal");
    }
}

}  // namespace detail

/// Scans a prepared n-qubit state (prep applied to |0...0>) over the grid.
inline DropletSet state_tomography(const Circuit &prep, std::size_t n, const GridPtr &grid,
                                   const ShotSpec &shots = kIdeal, std::uint64_t seed = 0) {
    if (n != 1 && n != 2) {
        throw Error("state_tomography: only 1 or 2 qubits are supported");
    }
    if (prep.width() != n) {
        throw Error("state_tomography: preparation circuit has width " + std::to_string(prep.width()) +
                    ", expected " + std::to_string(n));
    }
    if (!grid) {
        throw Error("state_tomography: null grid");
    }
    detail::check_shots(shots);
    DropletSet ds{n, TomographyMode::State, grid, shots, seed, {}};
    for (const auto &k : droplet_keys(n)) {
        ds.droplets.emplace(k, Droplet(k, grid));
    }
    const auto settings = all_detection_settings(n, TomographyMode::State);
    const std::vector<StateVector> prepared{run_statevector(prep)};
    std::vector<std::size_t> qubits(n);
    for (std::size_t q = 0; q < n; ++q) {
        qubits[q] = q;
    }
    for (std::size_t i = 0; i < grid->size(); ++i) {
        detail::scan_point(prepared, qubits, grid->points()[i], i, settings, shots, seed, ds.droplets);
    }
    return ds;
}

/// Initial states |0 b> over all basis states b of the system register.
///
/// Averaging expectations over runs from these states emulates an ancilla in
/// |0> (turned into |+> by the preparation) next to a maximally mixed system.
inline std::vector<StateVector> temporal_average_inputs(std::size_t system_qubits) {
    if (system_qubits < 1 || system_qubits + 1 > kMaxQubits) {
        throw Error("temporal_average_inputs: unsupported system size");
    }
    std::vector<StateVector> out;
    const std::size_t dim = std::size_t{1} << system_qubits;
    for (std::size_t b = 0; b < dim; ++b) {
        out.push_back(StateVector::basis(system_qubits + 1, b));
    }
    return out;
}

/// Arithmetic mean of z-string expectations over one run per basis state.
inline ZExpectations temporal_average(std::span<const ZExpectations> runs, std::size_t mixed_qubits) {
    const std::size_t expected = std::size_t{1} << mixed_qubits;
    if (runs.size() != expected) {
        throw Error("temporal_average: expected " + std::to_string(expected) + " runs, got " +
                    std::to_string(runs.size()));
    }
    ZExpectations out{runs.front().width, std::vector<double>(runs.front().by_mask.size())};
    for (const auto &r : runs) {
        if (r.by_mask.size() != out.by_mask.size()) {
            throw Error("temporal_average: runs differ in width");
        }
        for (std::size_t m = 0; m < out.by_mask.size(); ++m) {
            out.by_mask[m] += r.by_mask[m];
        }
    }
    for (auto &v : out.by_mask) {
        v /= static_cast<double>(runs.size());
    }
    return out;
}

/// Preparation and mapping block for process tomography: H on the ancilla
/// (qubit 0) followed by the controlled process on the system qubits.
inline Circuit process_mapping_circuit(const ComplexMatrix &u) {
    require_unitary(u, "process_mapping_circuit");
    const std::size_t n = qubit_count_for_dim(u.rows());
    Circuit c(n + 1, "process mapping");
    c.add(Gate::h(0));
    std::vector<std::size_t> targets;
    for (std::size_t q = 1; q <= n; ++q) {
        targets.push_back(q);
    }
    c.add(Gate::controlled(u, 0, targets));
    return c;
}

/// Scans the droplets of a single-qubit unitary using an ancilla qubit.
///
/// Resulting values equal s_j tr(T_{j,ab} u) / 4.
inline DropletSet process_tomography(const ComplexMatrix &u, const GridPtr &grid, const ShotSpec &shots = kIdeal,
                                     std::uint64_t seed = 0) {
    if (u.rows() != 2 || u.cols() != 2) {
        throw Error("process_tomography: expected a 2x2 unitary");
    }
    require_unitary(u, "process_tomography");
    if (!grid) {
        throw Error("process_tomography: null grid");
    }
    detail::check_shots(shots);
    DropletSet ds{1, TomographyMode::Process, grid, shots, seed, {}};
    for (const auto &k : droplet_keys(1)) {
        ds.droplets.emplace(k, Droplet(k, grid));
    }
    const auto settings = all_detection_settings(1, TomographyMode::Process);
    const Circuit mapping = process_mapping_circuit(u);
    std::vector<StateVector> prepared;
    for (const auto &init : temporal_average_inputs(1)) {
        prepared.push_back(run_statevector(mapping, init));
    }
    for (std::size_t i = 0; i < grid->size(); ++i) {
        detail::scan_point(prepared, {1}, grid->points()[i], i, settings, shots, seed, ds.droplets);
    }
    return ds;
}

/// Pauli words of n qubits in base-4 order (I, X, Y, Z), qubit 0 most significant.
inline std::vector<std::vector<Axis>> pauli_words(std::size_t n) {
    static constexpr Axis order[] = {Axis::I, Axis::X, Axis::Y, Axis::Z};
    std::vector<std::vector<Axis>> out;
    const std::size_t count = std::size_t{1} << (2 * n);
    for (std::size_t k = 0; k < count; ++k) {
        std::vector<Axis> w(n);
        for (std::size_t q = 0; q < n; ++q) {
            w[q] = order[(k >> (2 * (n - 1 - q))) & 3];
        }
        out.push_back(std::move(w));
    }
    return out;
}

inline std::string word_name(std::span<const Axis> w) {
    std::string s;
    for (auto a : w) {
        s.push_back(axis_char(a));
    }
    return s;
}

/// Raw Pauli-basis overlaps <f_sigma_k | f^(l(k))> of a droplet set, unscaled.
inline std::vector<complex> basis_overlaps(const DropletSet &ds) {
    ds.require_complete();
    std::map<Label, Droplet> combined;
    for (const auto &k : droplet_keys(ds.qubits)) {
        if (!combined.count(k.label)) {
            combined.emplace(k.label, ds.combined(k.label));
        }
    }
    std::vector<complex> out;
    for (const auto &w : pauli_words(ds.qubits)) {
        const Droplet basis = basis_droplet(w, ds.grid);
        out.push_back(discrete_scalar_product(basis, combined.at(word_label(w))));
    }
    return out;
}

struct DensityEstimate {
    /// Coefficients r_k of rho = sum r_k sigma_k before post-processing (pauli_words order).
    std::vector<complex> r;
    /// Symmetrised, trace-normalised estimate.
    ComplexMatrix rho;
};

/// Density matrix from state droplets: r_k = kappa <f_sigma_k | f^(l)>,
/// rho = sum r_k sigma_k, then (rho + rho^dagger)/2 scaled to unit trace.
inline DensityEstimate reconstruct_density(const DropletSet &ds, double kappa = kStateKappa) {
    if (ds.mode != TomographyMode::State) {
        throw Error("reconstruct_density: droplet set is not from state tomography");
    }
    const auto overlaps = basis_overlaps(ds);
    const auto words = pauli_words(ds.qubits);
    const std::size_t dim = std::size_t{1} << ds.qubits;
    DensityEstimate est{{}, ComplexMatrix::zeros(dim)};
    for (std::size_t k = 0; k < words.size(); ++k) {
        est.r.push_back(kappa * overlaps[k]);
        est.rho = est.rho + est.r.back() * pauli_word(words[k]);
    }
    ComplexMatrix sym = 0.5 * (est.rho + est.rho.adjoint());
    const double tr = sym.trace().real();
    if (!(std::abs(tr) > 1e-12)) {
        throw InvariantViolation("reconstruct_density: reconstructed trace vanishes");
    }
    est.rho = (1.0 / tr) * sym;
    return est;
}

struct ProcessEstimate {
    /// c_k of U = sum c_k sigma_k for k = I, X, Y, Z, before normalisation.
    std::vector<complex> c;
    /// sum c_k sigma_k rescaled to Frobenius norm sqrt(2).
    ComplexMatrix u;
};

/// Unitary from process droplets: c_k = kappa <f_sigma_k | f^(l)>.
///
/// The estimate is rescaled to the Frobenius norm of a unitary, sqrt(2), so
/// that quadrature error cannot push the fidelity above one.
inline ProcessEstimate reconstruct_process(const DropletSet &ds, double kappa = kProcessKappa) {
    if (ds.mode != TomographyMode::Process || ds.qubits != 1) {
        throw Error("reconstruct_process: droplet set is not from single-qubit process tomography");
    }
    const auto overlaps = basis_overlaps(ds);
    const auto words = pauli_words(1);
    ProcessEstimate est{{}, ComplexMatrix::zeros(2)};
    for (std::size_t k = 0; k < words.size(); ++k) {
        est.c.push_back(kappa * overlaps[k]);
        est.u = est.u + est.c.back() * pauli_word(words[k]);
    }
    const double frob = std::sqrt(operator_scalar_product(est.u, est.u).real());
    if (!(frob > 1e-12)) {
        throw InvariantViolation("reconstruct_process: reconstructed operator vanishes");
    }
    est.u = (std::sqrt(2.0) / frob) * est.u;
    return est;
}

/// Derives kappa for an n-qubit state or single-qubit process scan on `grid`
/// by demanding that the identity component of a reference round trip is exact.
inline double calibrate_kappa(std::size_t n, TomographyMode mode, const GridPtr &grid) {
    if (mode == TomographyMode::State) {
        const auto ds = state_tomography(Circuit(n, "reference |0>"), n, grid);
        const auto ov = basis_overlaps(ds);
        return (1.0 / static_cast<double>(std::size_t{1} << n)) / ov.front().real();
    }
    const auto ds = process_tomography(ComplexMatrix::identity(2), grid);
    return 1.0 / basis_overlaps(ds).front().real();
}

/// Normalised overlap tr(rho sigma) / sqrt(tr rho^2 tr sigma^2).
inline double state_fidelity(const ComplexMatrix &rho, const ComplexMatrix &target) {
    if (rho.rows() != target.rows() || !rho.is_square() || !target.is_square()) {
        throw Error("state_fidelity: dimension mismatch");
    }
    const double p1 = (rho * rho).trace().real();
    const double p2 = (target * target).trace().real();
    if (!(p1 > 0.0) || !(p2 > 0.0)) {
        throw Error("state_fidelity: zero-purity input");
    }
    return (rho * target).trace().real() / std::sqrt(p1 * p2);
}

/// |tr(U U_t^dagger)| / 2^N, insensitive to global phase.
inline double process_fidelity(const ComplexMatrix &u, const ComplexMatrix &target) {
    if (u.rows() != target.rows() || u.cols() != target.cols() || !u.is_square()) {
        throw Error("process_fidelity: dimension mismatch");
    }
    return std::abs((u * target.adjoint()).trace()) / static_cast<double>(u.rows());
}

/// Extra local rotation appended to a preparation.
struct InjectedError {
    std::size_t qubit = 0;
    U3Angles angles;
};

/// Preparation followed by the given local U3 rotations.
inline Circuit inject_error(const Circuit &prep, std::span<const InjectedError> extra) {
    Circuit c = prep;
    for (const auto &e : extra) {
        c.add(Gate::u3(e.qubit, e.angles));
    }
    return c;
}

/// Grid point maximising Re f; for rank-1 state droplets this is the Bloch direction.
inline GridPoint droplet_peak(const Droplet &d) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < d.values.size(); ++i) {
        if (d.values[i].real() > d.values[best].real()) {
            best = i;
        }
    }
    return d.grid->points()[best];
}

/// Great-circle angle between two directions on the sphere.
inline double angular_distance(const GridPoint &a, const GridPoint &b) {
    const double c = std::sin(a.beta) * std::sin(b.beta) * std::cos(a.alpha - b.alpha) +
                     std::cos(a.beta) * std::cos(b.beta);
    return std::acos(std::clamp(c, -1.0, 1.0));
}

/// Angle between a direction and the closest of the six coordinate half-axes.
inline double axis_tilt(const GridPoint &p) {
    const double v[3] = {std::sin(p.beta) * std::cos(p.alpha), std::sin(p.beta) * std::sin(p.alpha),
                         std::cos(p.beta)};
    double m = 0.0;
    for (double c : v) {
        m = std::max(m, std::abs(c));
    }
    return std::acos(std::clamp(m, -1.0, 1.0));
}

/// Single-qubit linear inversion from sigma_x, sigma_y, sigma_z readouts
/// (shots/3 each), with eigenvalues clipped to [0, 1] and renormalised.
inline ComplexMatrix standard_tomography_baseline(const Circuit &prep, const ShotSpec &shots, std::uint64_t seed) {
    if (prep.width() != 1) {
        throw Error("standard_tomography_baseline: single-qubit preparations only");
    }
    detail::check_shots(shots);
    const StateVector psi = run_statevector(prep);
    double v[3];
    const Axis axes[3] = {Axis::X, Axis::Y, Axis::Z};
    const std::uint64_t per_axis = shots ? std::max<std::uint64_t>(1, *shots / 3) : 0;
    for (std::size_t a = 0; a < 3; ++a) {
        const std::vector<Axis> word{axes[a]};
        if (!shots) {
            v[a] = detail::pauli_expectation(psi, word);
            continue;
        }
        Circuit det(1, "baseline");
        if (auto r = detection_rotation(axes[a])) {
            det.add(Gate::u3(0, *r));
        }
        const auto counts = sample_counts(det, psi, per_axis, derive_seed(seed, {a}));
        v[a] = expectations_from_counts(counts)[1];
    }
    // Eigenvalues of (1 + v.sigma)/2 are (1 +- |v|)/2; clipping to [0,1] and
    // renormalising amounts to shrinking v onto the unit ball.
    const double len = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    const double scale = len > 1.0 ? 1.0 / len : 1.0;
    ComplexMatrix rho = 0.5 * ComplexMatrix::identity(2);
    for (std::size_t a = 0; a < 3; ++a) {
        rho = rho + (0.5 * scale * v[a]) * pauli(axes[a]);
    }
    return rho;
}

struct StudyRow {
    std::string scheme;  ///< grid name, or "standard" for the baseline
    std::uint64_t total_shots = 0;
    std::uint64_t shots_per_point = 0;
    std::size_t repeats = 0;
    double mean_fidelity = 0.0;
    double stddev = 0.0;
};

/// Mean and sample standard deviation.
inline std::pair<double, double> mean_stddev(std::span<const double> xs) {
    if (xs.empty()) {
        return {0.0, 0.0};
    }
    double m = 0.0;
    for (double x : xs) {
        m += x;
    }
    m /= static_cast<double>(xs.size());
    double v = 0.0;
    for (double x : xs) {
        v += (x - m) * (x - m);
    }
    const double sd = xs.size() > 1 ? std::sqrt(v / static_cast<double>(xs.size() - 1)) : 0.0;
    return {m, sd};
}

/// Compares grids (and the linear-inversion baseline) at equal total shot budgets.
///
/// For each grid and budget N_tot the state is scanned `repeats` times with
/// round(N_tot / N_p) shots per point and reconstructed; the table holds mean
/// fidelity and standard deviation, sorted by (scheme, N_tot). An empty
/// budget list runs each grid once in ideal mode.
inline std::vector<StudyRow> sampling_study(const Circuit &state, std::span<const GridPtr> grids,
                                            std::span<const std::uint64_t> budgets, std::size_t repeats,
                                            std::uint64_t seed, bool include_baseline = true) {
    const std::size_t n = state.width();
    if (n != 1 && n != 2) {
        throw Error("sampling_study: only 1 or 2 qubits are supported");
    }
    if (grids.empty()) {
        throw Error("sampling_study: no grids");
    }
    if (repeats < 1) {
        throw Error("sampling_study: repeats must be >= 1");
    }
    for (const auto &g : grids) {
        for (auto b : budgets) {
            if (b < g->size()) {
                throw Error("sampling_study: budget " + std::to_string(b) + " is smaller than the " +
                            std::to_string(g->size()) + " points of grid " + g->name());
            }
        }
    }
    const ComplexMatrix target = run_statevector(state).density();
    std::vector<StudyRow> rows;
    for (std::size_t gi = 0; gi < grids.size(); ++gi) {
        const auto &g = grids[gi];
        if (budgets.empty()) {
            const auto est = reconstruct_density(state_tomography(state, n, g));
            rows.push_back({g->name(), 0, 0, 1, state_fidelity(est.rho, target), 0.0});
            continue;
        }
        for (std::size_t bi = 0; bi < budgets.size(); ++bi) {
            const auto per_point = static_cast<std::uint64_t>(
                std::llround(static_cast<double>(budgets[bi]) / static_cast<double>(g->size())));
            std::vector<double> fid;
            for (std::size_t r = 0; r < repeats; ++r) {
                const auto run_seed = derive_seed(seed, {gi, bi, r});
                const auto est = reconstruct_density(state_tomography(state, n, g, per_point, run_seed));
                fid.push_back(state_fidelity(est.rho, target));
            }
            const auto [m, sd] = mean_stddev(fid);
            rows.push_back({g->name(), budgets[bi], per_point, repeats, m, sd});
        }
    }
    if (include_baseline && n == 1 && !budgets.empty()) {
        for (std::size_t bi = 0; bi < budgets.size(); ++bi) {
            std::vector<double> fid;
            for (std::size_t r = 0; r < repeats; ++r) {
                const auto run_seed = derive_seed(seed, {grids.size(), bi, r});
                fid.push_back(state_fidelity(standard_tomography_baseline(state, budgets[bi], run_seed), target));
            }
            const auto [m, sd] = mean_stddev(fid);
            rows.push_back({"standard", budgets[bi], budgets[bi] / 3, repeats, m, sd});
        }
    }
    std::stable_sort(rows.begin(), rows.end(), [](const StudyRow &a, const StudyRow &b) {
        return a.scheme != b.scheme ? a.scheme < b.scheme : a.total_shots < b.total_shots;
    });
    return rows;
}

// ---------------------------------------------------------------------------
// Builtin preparations and target processes.

/// Single-qubit preparation of a0|0> + a1|1> (normalised) by one U3 gate,
/// exact up to global phase.
inline Circuit prep_from_amplitudes(complex a0, complex a1, std::string label) {
    const double norm = std::sqrt(std::norm(a0) + std::norm(a1));
    if (!(norm > 0.0)) {
        throw Error("prep_from_amplitudes: zero vector");
    }
    const double theta = 2.0 * std::atan2(std::abs(a1), std::abs(a0));
    const double phi = (std::abs(a0) > 0.0 && std::abs(a1) > 0.0) ? std::arg(a1) - std::arg(a0) : 0.0;
    Circuit c(1, std::move(label));
    c.add(Gate::u3(0, theta, phi, 0.0));
    return c;
}

struct BuiltinState {
    std::string name;
    std::string description;
    Circuit prep;
};

inline std::vector<BuiltinState> builtin_states() {
    std::vector<BuiltinState> out;
    {
        Circuit c(1, "|0>");
        out.push_back({"zero", "|0>", c});
    }
    {
        Circuit c(1, "(|0>+|1>)/sqrt2");
        c.add(Gate::h(0));
        out.push_back({"plus", "(|0>+|1>)/sqrt2", c});
    }
    {
        Circuit c(1, "(|0>+i|1>)/sqrt2");
        c.add(Gate::u3(0, std::numbers::pi / 2.0, std::numbers::pi / 2.0, 0.0));
        out.push_back({"plus-i", "(|0>+i|1>)/sqrt2", c});
    }
    out.push_back({"table2", "0.885|0>+0.466|1> (normalised)", prep_from_amplitudes(0.885, 0.466, "0.885|0>+0.466|1>")});
    {
        Circuit c(2, "(|00>+|11>)/sqrt2");
        c.add(Gate::h(0));
        c.add(Gate::cnot(0, 1));
        out.push_back({"bell", "(|00>+|11>)/sqrt2", c});
    }
    {
        Circuit c(2, "(|00>+|01>)/sqrt2");
        c.add(Gate::h(1));
        out.push_back({"00+01", "(|00>+|01>)/sqrt2", c});
    }
    out.push_back({"study", "(-0.69-0.098i)|0>+(0.66+0.30i)|1> (normalised)",
                   prep_from_amplitudes({-0.69, -0.098}, {0.66, 0.30}, "(-0.69-0.098i)|0>+(0.66+0.30i)|1>")});
    return out;
}

inline BuiltinState builtin_state(const std::string &name) {
    for (auto &s : builtin_states()) {
        if (s.name == name) {
            return s;
        }
    }
    throw Error("unknown builtin state '" + name + "'");
}

struct BuiltinProcess {
    std::string name;
    ComplexMatrix u;
};

inline std::vector<BuiltinProcess> builtin_processes() {
    return {{"H", hadamard_matrix()},
            {"X", pauli(Axis::X)},
            {"Ry(3pi/2)", u3_matrix(3.0 * std::numbers::pi / 2.0, 0.0, 0.0)},
            {"I", ComplexMatrix::identity(2)}};
}

inline ComplexMatrix builtin_process(const std::string &name) {
    for (auto &p : builtin_processes()) {
        if (p.name == name || (name == "Ry" && p.name == "Ry(3pi/2)")) {
            return p.u;
        }
    }
    throw Error("unknown builtin process '" + name + "'");
}

}  // namespace dropscan
