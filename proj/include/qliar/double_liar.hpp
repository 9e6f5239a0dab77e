// Copyright 2026 The qliar Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <numbers>
#include <span>
#include <utility>

#include "qliar/linalg.hpp"
#include "qliar/truth_frame.hpp"

namespace qliar::core {

/// One reading step lasts a quarter period: U(kStepTime) equals the step operator.
inline constexpr double kStepTime = std::numbers::pi / 2.0;

/// H = kGeneratorScale · i · Ln(U_step).
inline constexpr double kGeneratorScale = 2.0 / std::numbers::pi;

/// c_true·(1,0) + c_false·(0,1). Throws NormalizationError unless
/// |c_true|² + |c_false|² = 1 within the norm tolerance.
StateVector single_liar_state(Complex c_true, Complex c_false);

/// (e1⊗e2 - e2⊗e1)/√2: the two sentences always carry opposite values.
StateVector case_c_singlet();

/// (e1⊗e1 - e2⊗e2)/√2: the two sentences always carry equal values.
StateVector case_b_aligned();

/// The two-sentence liar in C^4⊗C^4 ≅ C^16.
struct DoubleLiarModel {
    StateVector psi0;
    /// Reading order of the cycle states, 1-based flat indices.
    std::array<std::size_t, 4> cycle_states{};
    /// Coordinates of the 4x4 submatrices, ascending.
    std::array<std::size_t, 4> subspace_basis{};
    /// Keyed by (sentence, value).
    std::map<std::pair<std::size_t, bool>, Operator> projectors;
    /// 4x4 step operator on subspace_basis.
    Operator u_step_sub;
    /// Step operator lifted to C^16, identity on the complement.
    Operator u_step;
    linalg::Hamiltonian hamiltonian;

    [[nodiscard]] TruthFrame frame() const { return TruthFrame::liar(2); }

    [[nodiscard]] Operator evolution(double t) const { return linalg::evolution_matrix(hamiltonian, t); }
    [[nodiscard]] Operator hamiltonian_sub() const;
    [[nodiscard]] Operator evolution_sub(double t) const;
};

DoubleLiarModel double_liar_model();

/// Embeds `sub` on the 1-based flat coordinates `basis` of C^d1⊗C^d2 with
/// identity on the complement, summing sub_{pq}·O_{iu}⊗O_{jv} where
/// basis[p] = κ(i,j) and basis[q] = κ(u,v).
Operator lift_subspace_operator(const Operator &sub, std::span<const std::size_t> basis, std::size_t d1,
                                std::size_t d2);

} // namespace qliar::core
