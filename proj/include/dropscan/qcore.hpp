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
 * @file qcore.hpp
 * Dense complex linear algebra for operators on at most three qubits.
 *
 * Qubit ordering: qubit 0 is the most significant bit of the computational
 * basis index, so |q0 q1 q2> has index 4*q0 + 2*q1 + q2 and an operator on
 * qubit 0 is the left-most factor of a Kronecker product.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "config.hpp"
#include "error.hpp"

namespace dropscan {

using complex = std::complex<double>;

inline constexpr complex kI{0.0, 1.0};

/// Dense row-major complex matrix.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;

    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    /// Row-major entries; the count must equal rows * cols.
    ComplexMatrix(std::size_t rows, std::size_t cols, std::initializer_list<complex> entries)
        : rows_(rows), cols_(cols), data_(entries) {
        if (data_.size() != rows * cols) {
            throw Error("ComplexMatrix: entry count does not match shape");
        }
    }

    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<complex> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries)) {
        if (data_.size() != rows * cols) {
            throw Error("ComplexMatrix: entry count does not match shape");
        }
    }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }

    static ComplexMatrix zeros(std::size_t n) { return ComplexMatrix(n, n); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    complex &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const complex &operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const complex> entries() const { return data_; }

    ComplexMatrix adjoint() const {
        ComplexMatrix out(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c) {
                out(c, r) = std::conj((*this)(r, c));
            }
        }
        return out;
    }

    complex trace() const {
        complex t = 0.0;
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) {
            t += (*this)(i, i);
        }
        return t;
    }

    /// Largest absolute entry.
    double max_abs() const {
        double m = 0.0;
        for (const auto &z : data_) {
            m = std::max(m, std::abs(z));
        }
        return m;
    }

    ComplexMatrix &operator+=(const ComplexMatrix &o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) {
            data_[i] += o.data_[i];
        }
        return *this;
    }

    ComplexMatrix &operator-=(const ComplexMatrix &o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) {
            data_[i] -= o.data_[i];
        }
        return *this;
    }

    ComplexMatrix &operator*=(complex s) {
        for (auto &z : data_) {
            z *= s;
        }
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, complex s) { return a *= s; }
    friend ComplexMatrix operator*(complex s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(double s, ComplexMatrix a) { return a *= complex(s); }

    friend ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) {
        if (a.cols_ != b.rows_) {
            throw Error("ComplexMatrix: inner dimensions differ in product");
        }
        ComplexMatrix out(a.rows_, b.cols_);
        for (std::size_t r = 0; r < a.rows_; ++r) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const complex av = a(r, k);
                if (av == complex{}) {
                    continue;
                }
                for (std::size_t c = 0; c < b.cols_; ++c) {
                    out(r, c) += av * b(k, c);
                }
            }
        }
        return out;
    }

    friend bool operator==(const ComplexMatrix &, const ComplexMatrix &) = default;

  private:
    void check_same_shape(const ComplexMatrix &o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) {
            throw Error("ComplexMatrix: shape mismatch");
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<complex> data_;
};

/// Elementwise max-norm of a - b.
inline double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b) { return (a - b).max_abs(); }

inline bool is_unitary(const ComplexMatrix &u, double tol = kTolerances.unitary) {
    if (!u.is_square()) {
        return false;
    }
    return max_abs_diff(u.adjoint() * u, ComplexMatrix::identity(u.rows())) < tol;
}

inline bool is_hermitian(const ComplexMatrix &a, double tol = kTolerances.density) {
    return a.is_square() && max_abs_diff(a, a.adjoint()) < tol;
}

inline bool is_density(const ComplexMatrix &rho, double tol = kTolerances.density) {
    return is_hermitian(rho, tol) && std::abs(rho.trace() - 1.0) < tol;
}

inline void require_unitary(const ComplexMatrix &u, const std::string &what) {
    if (!is_unitary(u)) {
        throw Error(what + ": matrix is not unitary");
    }
}

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t qubit_count_for_dim(std::size_t dim) {
    std::size_t n = 0;
    while ((std::size_t{1} << n) < dim) {
        ++n;
    }
    return n;
}

/// Normalized pure state on 2^n amplitudes.
class StateVector {
  public:
    StateVector() = default;

    /// Throws unless the amplitudes have unit norm (within tolerance) and a power-of-two length.
    explicit StateVector(std::vector<complex> amplitudes) : amps_(std::move(amplitudes)) {
        if (!is_power_of_two(amps_.size()) || amps_.size() > kMaxDim) {
            throw Error("StateVector: dimension must be 2^n with n <= 3");
        }
        if (std::abs(norm_squared() - 1.0) > kTolerances.norm) {
            throw Error("StateVector: amplitudes are not normalized");
        }
    }

    /// Scales arbitrary nonzero amplitudes to unit norm.
    static StateVector normalized(std::vector<complex> amplitudes) {
        double n2 = 0.0;
        for (const auto &a : amplitudes) {
            n2 += std::norm(a);
        }
        if (n2 == 0.0) {
            throw Error("StateVector: zero vector cannot be normalized");
        }
        const double s = 1.0 / std::sqrt(n2);
        for (auto &a : amplitudes) {
            a *= s;
        }
        return StateVector(std::move(amplitudes));
    }

    /// Computational basis state |index> on `qubits` qubits.
    static StateVector basis(std::size_t qubits, std::size_t index = 0) {
        std::vector<complex> a(std::size_t{1} << qubits);
        if (index >= a.size()) {
            throw Error("StateVector: basis index out of range");
        }
        a[index] = 1.0;
        return StateVector(std::move(a));
    }

    std::size_t dim() const { return amps_.size(); }
    std::size_t qubits() const { return qubit_count_for_dim(amps_.size()); }
    const complex &operator[](std::size_t i) const { return amps_[i]; }
    std::span<const complex> amplitudes() const { return amps_; }

    double norm_squared() const {
        double n2 = 0.0;
        for (const auto &a : amps_) {
            n2 += std::norm(a);
        }
        return n2;
    }

    /// Outer product |psi><psi|.
    ComplexMatrix density() const {
        ComplexMatrix rho(dim(), dim());
        for (std::size_t r = 0; r < dim(); ++r) {
            for (std::size_t c = 0; c < dim(); ++c) {
                rho(r, c) = amps_[r] * std::conj(amps_[c]);
            }
        }
        return rho;
    }

  private:
    friend StateVector apply(const ComplexMatrix &, const StateVector &);
    struct Unchecked {};
    StateVector(std::vector<complex> amplitudes, Unchecked) : amps_(std::move(amplitudes)) {}

    std::vector<complex> amps_;
};

/// Matrix-vector product; the result keeps its norm only when `u` is unitary.
inline StateVector apply(const ComplexMatrix &u, const StateVector &psi) {
    if (u.cols() != psi.dim() || u.rows() != psi.dim()) {
        throw Error("apply: dimension mismatch");
    }
    std::vector<complex> out(psi.dim());
    for (std::size_t r = 0; r < psi.dim(); ++r) {
        for (std::size_t c = 0; c < psi.dim(); ++c) {
            out[r] += u(r, c) * psi[c];
        }
    }
    return StateVector(std::move(out), StateVector::Unchecked{});
}

enum class Axis { I, X, Y, Z };

inline char axis_char(Axis a) {
    switch (a) {
    case Axis::I:
        return 'I';
    case Axis::X:
        return 'x';
    case Axis::Y:
        return 'y';
    case Axis::Z:
        return 'z';
    }
    return '?';
}

inline Axis axis_from_char(char c) {
    switch (c) {
    case 'I':
    case 'i':
    case '0':
        return Axis::I;
    case 'x':
    case 'X':
        return Axis::X;
    case 'y':
    case 'Y':
        return Axis::Y;
    case 'z':
    case 'Z':
        return Axis::Z;
    default:
        throw Error(std::string("unknown Pauli axis '") + c + "'");
    }
}

/// sigma_0 = identity, sigma_x, sigma_y, sigma_z.
inline ComplexMatrix pauli(Axis a) {
    switch (a) {
    case Axis::I:
        return ComplexMatrix::identity(2);
    case Axis::X:
        return ComplexMatrix(2, 2, {0.0, 1.0, 1.0, 0.0});
    case Axis::Y:
        return ComplexMatrix(2, 2, {0.0, -kI, kI, 0.0});
    case Axis::Z:
        return ComplexMatrix(2, 2, {1.0, 0.0, 0.0, -1.0});
    }
    throw Error("pauli: invalid axis");
}

inline ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (!a.is_square() || !b.is_square()) {
        throw Error("kron: both factors must be square");
    }
    const std::size_t n = a.rows() * b.rows();
    ComplexMatrix out(n, n);
    for (std::size_t ar = 0; ar < a.rows(); ++ar) {
        for (std::size_t ac = 0; ac < a.cols(); ++ac) {
            const complex av = a(ar, ac);
            for (std::size_t br = 0; br < b.rows(); ++br) {
                for (std::size_t bc = 0; bc < b.cols(); ++bc) {
                    out(ar * b.rows() + br, ac * b.cols() + bc) = av * b(br, bc);
                }
            }
        }
    }
    return out;
}

/// Tensor product of single-qubit Paulis, first axis on qubit 0.
inline ComplexMatrix pauli_word(std::span<const Axis> word) {
    if (word.empty() || word.size() > kMaxQubits) {
        throw Error("pauli_word: length must be between 1 and 3");
    }
    ComplexMatrix out = pauli(word[0]);
    for (std::size_t k = 1; k < word.size(); ++k) {
        out = kron(out, pauli(word[k]));
    }
    return out;
}

inline ComplexMatrix pauli_word(std::initializer_list<Axis> word) {
    return pauli_word(std::span<const Axis>(word.begin(), word.size()));
}

/// sigma_{k,axis} on n qubits: `axis` at 1-based `position`, identity elsewhere.
inline ComplexMatrix embedded_pauli(Axis axis, std::size_t position, std::size_t n) {
    if (n < 1 || n > kMaxQubits || position < 1 || position > n) {
        throw Error("embedded_pauli: position " + std::to_string(position) + " out of range for " +
                    std::to_string(n) + " qubits");
    }
    std::vector<Axis> word(n, Axis::I);
    word[position - 1] = axis;
    return pauli_word(word);
}

/// tr(observable * rho).
inline complex expectation(const ComplexMatrix &observable, const ComplexMatrix &rho) {
    if (observable.rows() != rho.rows() || observable.cols() != rho.cols() || !rho.is_square()) {
        throw Error("expectation: dimension mismatch");
    }
    complex t = 0.0;
    for (std::size_t r = 0; r < rho.rows(); ++r) {
        for (std::size_t k = 0; k < rho.rows(); ++k) {
            t += observable(r, k) * rho(k, r);
        }
    }
    return t;
}

/// Hilbert-Schmidt product tr(A^dagger B).
inline complex operator_scalar_product(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error("operator_scalar_product: dimension mismatch");
    }
    complex t = 0.0;
    const auto ea = a.entries();
    const auto eb = b.entries();
    for (std::size_t i = 0; i < ea.size(); ++i) {
        t += std::conj(ea[i]) * eb[i];
    }
    return t;
}

/// Reduced density matrix of a single qubit (0-based) of an n-qubit state.
inline ComplexMatrix reduced_density(const ComplexMatrix &rho, std::size_t qubit) {
    const std::size_t n = qubit_count_for_dim(rho.rows());
    if (!rho.is_square() || qubit >= n) {
        throw Error("reduced_density: qubit out of range");
    }
    const std::size_t shift = n - 1 - qubit;
    ComplexMatrix out(2, 2);
    for (std::size_t r = 0; r < rho.rows(); ++r) {
        for (std::size_t c = 0; c < rho.cols(); ++c) {
            const std::size_t rest_r = r & ~(std::size_t{1} << shift);
            const std::size_t rest_c = c & ~(std::size_t{1} << shift);
            if (rest_r == rest_c) {
                out((r >> shift) & 1, (c >> shift) & 1) += rho(r, c);
            }
        }
    }
    return out;
}

}  // namespace dropscan
