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
 * @file circuits.hpp
 * Gate-level circuits, ideal statevector execution and seeded shot sampling.
 *
 * Gates act on 0-based qubit indices (qubit 0 = most significant bit). Every
 * circuit ends with a computational-basis measurement of all qubits; the
 * measurement is implicit and never stored as a gate.
 */

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"
#include "log.hpp"
#include "qcore.hpp"

namespace dropscan {

struct U3Angles {
    double theta = 0.0;
    double phi = 0.0;
    double lambda = 0.0;

    friend bool operator==(const U3Angles &, const U3Angles &) = default;
};

/// U3(theta, phi, lambda) = RZ(phi) RY(theta) RZ(lambda) up to global phase.
inline ComplexMatrix u3_matrix(double theta, double phi, double lambda) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return ComplexMatrix(2, 2,
                         {c, -std::polar(1.0, lambda) * s, std::polar(1.0, phi) * s,
                          std::polar(1.0, lambda + phi) * c});
}

inline ComplexMatrix u3_matrix(const U3Angles &a) { return u3_matrix(a.theta, a.phi, a.lambda); }

inline ComplexMatrix hadamard_matrix() {
    const double h = 1.0 / std::numbers::sqrt2;
    return ComplexMatrix(2, 2, {h, h, h, -h});
}

/// Block matrix diag(1, u): u acts on the targets when the control is |1>.
inline ComplexMatrix controlled_u(const ComplexMatrix &u) {
    if (!u.is_square() || !is_power_of_two(u.rows()) || 2 * u.rows() > kMaxDim) {
        throw Error("controlled_u: target matrix must be 2^N x 2^N with N <= 2");
    }
    require_unitary(u, "controlled_u");
    const std::size_t n = u.rows();
    ComplexMatrix out = ComplexMatrix::identity(2 * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            out(n + r, n + c) = u(r, c);
        }
    }
    return out;
}

enum class GateKind { U3, H, X, CNOT, ControlledU, Barrier };

class Gate {
  public:
    static Gate u3(std::size_t q, double theta, double phi, double lambda) {
        if (!std::isfinite(theta) || !std::isfinite(phi) || !std::isfinite(lambda)) {
            throw Error("U3 gate: angles must be finite");
        }
        Gate g(GateKind::U3, {q});
        g.angles_ = {theta, phi, lambda};
        return g;
    }
    static Gate u3(std::size_t q, const U3Angles &a) { return u3(q, a.theta, a.phi, a.lambda); }
    static Gate h(std::size_t q) { return Gate(GateKind::H, {q}); }
    static Gate x(std::size_t q) { return Gate(GateKind::X, {q}); }
    static Gate cnot(std::size_t control, std::size_t target) {
        if (control == target) {
            throw Error("CNOT: control and target coincide");
        }
        return Gate(GateKind::CNOT, {control, target});
    }
    /// Controlled unitary with `u` acting on consecutive listed targets (first target most significant).
    static Gate controlled(const ComplexMatrix &u, std::size_t control, std::vector<std::size_t> targets) {
        require_unitary(u, "ControlledU gate");
        if (u.rows() != (std::size_t{1} << targets.size())) {
            throw Error("ControlledU gate: matrix size does not match target count");
        }
        std::vector<std::size_t> qubits{control};
        for (auto t : targets) {
            if (t == control) {
                throw Error("ControlledU gate: target equals control");
            }
            qubits.push_back(t);
        }
        Gate g(GateKind::ControlledU, std::move(qubits));
        g.matrix_ = u;
        return g;
    }
    static Gate barrier() { return Gate(GateKind::Barrier, {}); }

    GateKind kind() const { return kind_; }
    const std::vector<std::size_t> &qubits() const { return qubits_; }
    const U3Angles &angles() const { return angles_; }
    /// Target unitary of a ControlledU gate.
    const ComplexMatrix &target_matrix() const { return matrix_; }

    /// Unitary on the gate's own qubits, in the order of qubits().
    ComplexMatrix unitary() const {
        switch (kind_) {
        case GateKind::U3:
            return u3_matrix(angles_);
        case GateKind::H:
            return hadamard_matrix();
        case GateKind::X:
            return pauli(Axis::X);
        case GateKind::CNOT:
            return controlled_u(pauli(Axis::X));
        case GateKind::ControlledU:
            return controlled_u(matrix_);
        case GateKind::Barrier:
            return ComplexMatrix::identity(1);
        }
        throw Error("Gate: unknown kind");
    }

    friend bool operator==(const Gate &, const Gate &) = default;

  private:
    Gate(GateKind kind, std::vector<std::size_t> qubits) : kind_(kind), qubits_(std::move(qubits)) {}

    GateKind kind_;
    std::vector<std::size_t> qubits_;
    U3Angles angles_{};
    ComplexMatrix matrix_;
};

/// Inverse scanning rotation (R_{alpha beta})^{-1} = U3(-beta, 0, -alpha) on one qubit.
///
/// Out-of-range angles are folded back (beta into [0, pi] with the matching
/// half-turn of alpha, alpha into [0, 2pi]) and a warning is logged.
inline Gate scan_rotation_gate(double beta, double alpha, std::size_t qubit = 0) {
    if (!std::isfinite(beta) || !std::isfinite(alpha)) {
        throw Error("scan_rotation_gate: angles must be finite");
    }
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double b0 = beta;
    const double a0 = alpha;
    if (beta < 0.0 || beta > std::numbers::pi) {
        beta = std::fmod(beta, two_pi);
        if (beta < 0.0) {
            beta += two_pi;
        }
        if (beta > std::numbers::pi) {
            beta = two_pi - beta;
            alpha += std::numbers::pi;
        }
    }
    if (alpha < 0.0 || alpha > two_pi) {
        alpha = std::fmod(alpha, two_pi);
        if (alpha < 0.0) {
            alpha += two_pi;
        }
    }
    if (beta != b0 || alpha != a0) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "scan angles (beta=" << b0 << ", alpha=" << a0 << ") wrapped to (" << beta << ", " << alpha
            << ")";
        log_warning(msg.str());
    }
    return Gate::u3(qubit, -beta, 0.0, -alpha);
}

class Circuit {
  public:
    explicit Circuit(std::size_t width, std::string label = {}) : width_(width), label_(std::move(label)) {
        if (width < 1 || width > kMaxQubits) {
            throw Error("Circuit: width must be between 1 and 3");
        }
    }

    Circuit &add(Gate g) {
        for (auto q : g.qubits()) {
            if (q >= width_) {
                throw Error("Circuit: qubit index " + std::to_string(q) + " outside width " +
                            std::to_string(width_));
            }
        }
        gates_.push_back(std::move(g));
        return *this;
    }

    Circuit &append(const Circuit &other) {
        if (other.width_ != width_) {
            throw Error("Circuit: cannot append circuits of different width");
        }
        for (const auto &g : other.gates_) {
            gates_.push_back(g);
        }
        return *this;
    }

    std::size_t width() const { return width_; }
    const std::string &label() const { return label_; }
    void set_label(std::string label) { label_ = std::move(label); }
    const std::vector<Gate> &gates() const { return gates_; }

    friend bool operator==(const Circuit &, const Circuit &) = default;

  private:
    std::size_t width_;
    std::string label_;
    std::vector<Gate> gates_;
};

namespace detail {

/// Applies a 2^k unitary to the listed qubits of a raw amplitude vector in place.
inline void apply_local(std::vector<complex> &amps, std::size_t width, const ComplexMatrix &u,
                        const std::vector<std::size_t> &qubits) {
    const std::size_t k = qubits.size();
    const std::size_t sub = std::size_t{1} << k;
    std::size_t qubit_bits = 0;
    for (auto q : qubits) {
        qubit_bits |= std::size_t{1} << (width - 1 - q);
    }
    std::vector<std::size_t> idx(sub);
    std::vector<complex> in(sub);
    for (std::size_t base = 0; base < amps.size(); ++base) {
        if (base & qubit_bits) {
            continue;
        }
        for (std::size_t local = 0; local < sub; ++local) {
            std::size_t full = base;
            for (std::size_t j = 0; j < k; ++j) {
                if (local & (std::size_t{1} << (k - 1 - j))) {
                    full |= std::size_t{1} << (width - 1 - qubits[j]);
                }
            }
            idx[local] = full;
            in[local] = amps[full];
        }
        for (std::size_t r = 0; r < sub; ++r) {
            complex acc = 0.0;
            for (std::size_t c = 0; c < sub; ++c) {
                acc += u(r, c) * in[c];
            }
            amps[idx[r]] = acc;
        }
    }
}

}  // namespace detail

/// Full 2^width unitary of a gate placed in a circuit of the given width.
inline ComplexMatrix embed_gate(const Gate &g, std::size_t width) {
    const std::size_t dim = std::size_t{1} << width;
    ComplexMatrix out(dim, dim);
    if (g.kind() == GateKind::Barrier) {
        return ComplexMatrix::identity(dim);
    }
    const ComplexMatrix u = g.unitary();
    for (std::size_t c = 0; c < dim; ++c) {
        std::vector<complex> col(dim);
        col[c] = 1.0;
        detail::apply_local(col, width, u, g.qubits());
        for (std::size_t r = 0; r < dim; ++r) {
            out(r, c) = col[r];
        }
    }
    return out;
}

/// Product of all gate unitaries (last gate left-most).
inline ComplexMatrix circuit_unitary(const Circuit &c) {
    ComplexMatrix u = ComplexMatrix::identity(std::size_t{1} << c.width());
    for (const auto &g : c.gates()) {
        u = embed_gate(g, c.width()) * u;
    }
    return u;
}

inline StateVector run_statevector(const Circuit &c, const StateVector &initial) {
    if (initial.qubits() != c.width() || initial.dim() != (std::size_t{1} << c.width())) {
        throw Error("run_statevector: initial state has " + std::to_string(initial.qubits()) +
                    " qubits, circuit has " + std::to_string(c.width()));
    }
    std::vector<complex> amps(initial.amplitudes().begin(), initial.amplitudes().end());
    for (const auto &g : c.gates()) {
        if (g.kind() == GateKind::Barrier) {
            continue;
        }
        detail::apply_local(amps, c.width(), g.unitary(), g.qubits());
    }
    double n2 = 0.0;
    for (const auto &a : amps) {
        n2 += std::norm(a);
    }
    if (std::abs(n2 - 1.0) > kTolerances.norm * static_cast<double>(1 + c.gates().size())) {
        throw InvariantViolation("run_statevector: norm drifted to " + std::to_string(n2));
    }
    return StateVector::normalized(std::move(amps));
}

inline StateVector run_statevector(const Circuit &c) {
    return run_statevector(c, StateVector::basis(c.width()));
}

/// Born-rule probabilities of the computational basis outcomes.
inline std::vector<double> probabilities(const StateVector &psi) {
    std::vector<double> p(psi.dim());
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        p[i] = std::norm(psi[i]);
    }
    return p;
}

/// Bitstring of a basis index, qubit 0 first.
inline std::string bitstring(std::size_t index, std::size_t width) {
    std::string s(width, '0');
    for (std::size_t q = 0; q < width; ++q) {
        if (index & (std::size_t{1} << (width - 1 - q))) {
            s[q] = '1';
        }
    }
    return s;
}

/// Measurement record: number of shots per computational-basis outcome.
class Counts {
  public:
    Counts(std::size_t width, std::vector<std::uint64_t> by_index) : width_(width), by_index_(std::move(by_index)) {
        if (by_index_.size() != (std::size_t{1} << width)) {
            throw Error("Counts: outcome table size must be 2^width");
        }
        for (auto n : by_index_) {
            shots_ += n;
        }
    }

    std::size_t width() const { return width_; }
    std::uint64_t shots() const { return shots_; }
    std::uint64_t operator[](std::size_t index) const { return by_index_.at(index); }
    const std::vector<std::uint64_t> &by_index() const { return by_index_; }

    std::uint64_t count(const std::string &bits) const {
        if (bits.size() != width_) {
            throw Error("Counts: bitstring width mismatch");
        }
        std::size_t index = 0;
        for (char b : bits) {
            if (b != '0' && b != '1') {
                throw Error("Counts: invalid bitstring '" + bits + "'");
            }
            index = (index << 1) | static_cast<std::size_t>(b == '1');
        }
        return by_index_[index];
    }

    /// Nonzero outcomes keyed by bitstring.
    std::map<std::string, std::uint64_t> as_map() const {
        std::map<std::string, std::uint64_t> m;
        for (std::size_t i = 0; i < by_index_.size(); ++i) {
            if (by_index_[i] != 0) {
                m.emplace(bitstring(i, width_), by_index_[i]);
            }
        }
        return m;
    }

    friend bool operator==(const Counts &, const Counts &) = default;

  private:
    std::size_t width_;
    std::vector<std::uint64_t> by_index_;
    std::uint64_t shots_ = 0;
};

/// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Per-run seed from a master seed and a path of indices (grid point, circuit, ...).
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = mix64(master);
    for (auto v : path) {
        h = mix64(h ^ mix64(v + 0x632be59bd9b4e019ULL));
    }
    return h;
}

/// Multinomial draw by sequential conditional binomials.
template <class Rng>
std::vector<std::uint64_t> sample_multinomial(std::span<const double> probs, std::uint64_t shots, Rng &rng) {
    std::vector<std::uint64_t> out(probs.size());
    std::uint64_t remaining = shots;
    double mass = 0.0;
    for (double p : probs) {
        mass += p;
    }
    for (std::size_t i = 0; i + 1 < probs.size() && remaining > 0; ++i) {
        const double p = std::clamp(mass > 0.0 ? probs[i] / mass : 0.0, 0.0, 1.0);
        mass -= probs[i];
        std::uint64_t n = 0;
        if (p >= 1.0) {
            n = remaining;
        } else if (p > 0.0) {
            std::binomial_distribution<std::uint64_t> dist(remaining, p);
            n = dist(rng);
        }
        out[i] = n;
        remaining -= n;
    }
    if (!probs.empty()) {
        out.back() += remaining;
    }
    return out;
}

inline Counts sample_counts(const StateVector &final_state, std::uint64_t shots, std::uint64_t seed) {
    if (shots < 1) {
        throw Error("sample_counts: shots must be >= 1");
    }
    std::mt19937_64 rng(seed);
    const auto p = probabilities(final_state);
    return Counts(final_state.qubits(), sample_multinomial(std::span<const double>(p), shots, rng));
}

/// Runs the circuit and draws `shots` measurement outcomes; deterministic in `seed`.
inline Counts sample_counts(const Circuit &c, const StateVector &initial, std::uint64_t shots, std::uint64_t seed) {
    return sample_counts(run_statevector(c, initial), shots, seed);
}

/// Bit mask (over basis-index bits) selecting sigma_z on the listed qubits.
inline std::size_t z_mask(std::initializer_list<std::size_t> qubits, std::size_t width) {
    std::size_t m = 0;
    for (auto q : qubits) {
        if (q >= width) {
            throw Error("z_mask: qubit out of range");
        }
        m |= std::size_t{1} << (width - 1 - q);
    }
    return m;
}

/// Expectations of every z-string on `width` qubits, indexed by z_mask.
/// Entry 0 is the identity.
struct ZExpectations {
    std::size_t width = 0;
    std::vector<double> by_mask;

    double operator[](std::size_t mask) const { return by_mask.at(mask); }
};

inline int parity_sign(std::size_t index, std::size_t mask) {
    return (std::popcount(index & mask) & 1) ? -1 : 1;
}

/// Signed probability combinations, e.g. <s1z s2z> = p00 - p01 - p10 + p11.
inline ZExpectations expectations_from_probabilities(std::span<const double> probs, std::size_t width) {
    if (probs.size() != (std::size_t{1} << width)) {
        throw Error("expectations_from_probabilities: size mismatch");
    }
    ZExpectations e{width, std::vector<double>(probs.size())};
    for (std::size_t mask = 0; mask < probs.size(); ++mask) {
        double acc = 0.0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            acc += parity_sign(i, mask) * probs[i];
        }
        e.by_mask[mask] = acc;
    }
    return e;
}

/// Same combinations with p = N / N_s; the identity entry is exactly 1.
inline ZExpectations expectations_from_counts(const Counts &counts) {
    if (counts.shots() == 0) {
        throw Error("expectations_from_counts: zero total shots");
    }
    const std::size_t dim = counts.by_index().size();
    ZExpectations e{counts.width(), std::vector<double>(dim)};
    const double total = static_cast<double>(counts.shots());
    for (std::size_t mask = 0; mask < dim; ++mask) {
        std::int64_t acc = 0;
        for (std::size_t i = 0; i < dim; ++i) {
            acc += parity_sign(i, mask) * static_cast<std::int64_t>(counts[i]);
        }
        e.by_mask[mask] = static_cast<double>(acc) / total;
    }
    return e;
}

// ---------------------------------------------------------------------------
// Line-oriented text form:
//   # <label>
//   qubits <n>
//   U3 q<i> <theta> <phi> <lambda>
//   H q<i> | X q<i> | CX q<c> q<t> | BARRIER
//   CU q<c> q<t>... <re im pairs of the target matrix, row-major>

namespace detail {
inline std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::size_t parse_qubit(const std::string &tok, std::size_t line_no) {
    if (tok.size() < 2 || tok[0] != 'q') {
        throw Error("circuit text line " + std::to_string(line_no) + ": expected qubit token, got '" + tok + "'");
    }
    try {
        return std::stoul(tok.substr(1));
    } catch (const std::exception &) {
        throw Error("circuit text line " + std::to_string(line_no) + ": bad qubit token '" + tok + "'");
    }
}

inline double parse_double(const std::string &tok, std::size_t line_no) {
    try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) {
            throw std::invalid_argument(tok);
        }
        return v;
    } catch (const std::exception &) {
        throw Error("circuit text line " + std::to_string(line_no) + ": bad number '" + tok + "'");
    }
}
}  // namespace detail

inline std::string to_text(const Circuit &c) {
    std::ostringstream out;
    if (!c.label().empty()) {
        out << "# " << c.label() << '\n';
    }
    out << "qubits " << c.width() << '\n';
    using detail::fmt_double;
    for (const auto &g : c.gates()) {
        const auto &q = g.qubits();
        switch (g.kind()) {
        case GateKind::U3:
            out << "U3 q" << q[0] << ' ' << fmt_double(g.angles().theta) << ' ' << fmt_double(g.angles().phi) << ' '
                << fmt_double(g.angles().lambda) << '\n';
            break;
        case GateKind::H:
            out << "H q" << q[0] << '\n';
            break;
        case GateKind::X:
            out << "X q" << q[0] << '\n';
            break;
        case GateKind::CNOT:
            out << "CX q" << q[0] << " q" << q[1] << '\n';
            break;
        case GateKind::ControlledU:
            out << "CU";
            for (auto qi : q) {
                out << " q" << qi;
            }
            for (const auto &z : g.target_matrix().entries()) {
                out << ' ' << fmt_double(z.real()) << ' ' << fmt_double(z.imag());
            }
            out << '\n';
            break;
        case GateKind::Barrier:
            out << "BARRIER\n";
            break;
        }
    }
    return out.str();
}

inline Circuit circuit_from_text(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    std::string label;
    std::optional<Circuit> circuit;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        if (line[0] == '#') {
            if (!circuit && label.empty()) {
                label = line.size() > 2 ? line.substr(2) : std::string{};
            }
            continue;
        }
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) {
            tok.push_back(t);
        }
        if (tok.empty()) {
            continue;
        }
        try {
            auto need = [&](std::size_t n) {
                if (tok.size() != n) {
                    throw Error("circuit text line " + std::to_string(line_no) + ": expected " + std::to_string(n) +
                                " fields for " + tok[0]);
                }
            };
            if (tok[0] == "qubits") {
                need(2);
                circuit.emplace(std::stoul(tok[1]), label);
                continue;
            }
            if (!circuit) {
                throw Error("circuit text line " + std::to_string(line_no) + ": gate before 'qubits' header");
            }
            using detail::parse_double;
            using detail::parse_qubit;
            if (tok[0] == "U3") {
                need(5);
                circuit->add(Gate::u3(parse_qubit(tok[1], line_no), parse_double(tok[2], line_no),
                                      parse_double(tok[3], line_no), parse_double(tok[4], line_no)));
            } else if (tok[0] == "H") {
                need(2);
                circuit->add(Gate::h(parse_qubit(tok[1], line_no)));
            } else if (tok[0] == "X") {
                need(2);
                circuit->add(Gate::x(parse_qubit(tok[1], line_no)));
            } else if (tok[0] == "CX") {
                need(3);
                circuit->add(Gate::cnot(parse_qubit(tok[1], line_no), parse_qubit(tok[2], line_no)));
            } else if (tok[0] == "BARRIER") {
                need(1);
                circuit->add(Gate::barrier());
            } else if (tok[0] == "CU") {
                std::size_t i = 1;
                std::vector<std::size_t> qubits;
                while (i < tok.size() && !tok[i].empty() && tok[i][0] == 'q') {
                    qubits.push_back(parse_qubit(tok[i], line_no));
                    ++i;
                }
                if (qubits.size() < 2) {
                    throw Error("circuit text line " + std::to_string(line_no) + ": CU needs control and target");
                }
                const std::size_t dim = std::size_t{1} << (qubits.size() - 1);
                need(i + 2 * dim * dim);
                std::vector<complex> entries;
                for (; i < tok.size(); i += 2) {
                    entries.emplace_back(parse_double(tok[i], line_no), parse_double(tok[i + 1], line_no));
                }
                const std::size_t control = qubits.front();
                qubits.erase(qubits.begin());
                circuit->add(Gate::controlled(ComplexMatrix(dim, dim, std::move(entries)), control, qubits));
            } else {
                throw Error("circuit text line " + std::to_string(line_no) + ": unknown gate '" + tok[0] + "'");
            }
        } catch (const std::exception &e) {
            const std::string prefix = "circuit text line " + std::to_string(line_no);
            const std::string what = e.what();
            throw Error(what.rfind(prefix, 0) == 0 ? what : prefix + ": " + what);
        }
    }
    if (!circuit) {
        throw Error("circuit text: missing 'qubits' header");
    }
    return *circuit;
}

}  // namespace dropscan
