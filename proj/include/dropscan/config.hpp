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

#include <cstddef>

namespace dropscan {

/// Numerical tolerances shared by every module. Values are absolute.
struct Tolerances {
    /// Unitarity: max-norm of U^dagger U - 1.
    double unitary = 1e-12;
    /// Hermiticity and unit trace of density matrices.
    double density = 1e-12;
    /// State vector normalization.
    double norm = 1e-12;
    /// Imaginary residue allowed on expectations of Hermitian observables.
    double real_expectation = 1e-10;
    /// Unit-sum check for equiangular quadrature weights.
    double weight_sum = 1e-10;
    /// Slack allowed above 1 on fidelities.
    double fidelity_slack = 1e-9;
};

inline constexpr Tolerances kTolerances{};

/// Largest operator dimension handled (ancilla plus two system qubits).
inline constexpr std::size_t kMaxQubits = 3;
inline constexpr std::size_t kMaxDim = std::size_t{1} << kMaxQubits;

}  // namespace dropscan
