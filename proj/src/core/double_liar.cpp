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

#include "qliar/double_liar.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace qliar::core {

using linalg::basis_outer;
using linalg::kappa_index;
using linalg::kappa_split;
using linalg::tensor_product;

StateVector single_liar_state(Complex c_true, Complex c_false) {
    StateVector psi({c_true, c_false}, {"true", "false"});
    if (!psi.is_normalized()) {
        throw NormalizationError("single_liar_state: |c_true|² + |c_false|² = " +
                                 std::to_string(psi.norm_squared()) + ", expected 1");
    }
    return psi;
}

namespace {

StateVector qubit(std::size_t index) { return StateVector::basis(2, index, {"true", "false"}); }

StateVector slot(std::size_t index) {
    std::vector<std::string> labels(SentenceBasis::kLabels.begin(), SentenceBasis::kLabels.end());
    return StateVector::basis(SentenceBasis::kDim, index, std::move(labels));
}

} // namespace

StateVector case_c_singlet() {
    return (1.0 / std::sqrt(2.0)) * (tensor_product(qubit(1), qubit(2)) - tensor_product(qubit(2), qubit(1)));
}

StateVector case_b_aligned() {
    return (1.0 / std::sqrt(2.0)) * (tensor_product(qubit(1), qubit(1)) - tensor_product(qubit(2), qubit(2)));
}

Operator lift_subspace_operator(const Operator &sub, std::span<const std::size_t> basis, std::size_t d1,
                                std::size_t d2) {
    if (sub.dim() != basis.size()) {
        throw ArgumentError("lift_subspace_operator: submatrix dimension does not match basis size");
    }
    const std::size_t dim = d1 * d2;
    std::set<std::size_t> coords;
    for (std::size_t k : basis) {
        if (k < 1 || k > dim) {
            throw ArgumentError("lift_subspace_operator: coordinate " + std::to_string(k) + " out of range");
        }
        if (!coords.insert(k).second) {
            throw ArgumentError("lift_subspace_operator: duplicate coordinate " + std::to_string(k));
        }
    }

    Operator out(dim);
    for (std::size_t k = 1; k <= dim; ++k) {
        if (coords.count(k) == 0) {
            const auto [i, j] = kappa_split(k, d1, d2);
            out += tensor_product(basis_outer(i, i, d1), basis_outer(j, j, d2));
        }
    }
    for (std::size_t p = 0; p < basis.size(); ++p) {
        const auto [i, j] = kappa_split(basis[p], d1, d2);
        for (std::size_t q = 0; q < basis.size(); ++q) {
            const Complex x = sub(p, q);
            if (x == Complex{}) {
                continue;
            }
            const auto [u, v] = kappa_split(basis[q], d1, d2);
            out += x * tensor_product(basis_outer(i, u, d1), basis_outer(j, v, d2));
        }
    }
    return out;
}

DoubleLiarModel double_liar_model() {
    constexpr std::size_t d = SentenceBasis::kDim;
    DoubleLiarModel m;

    // Reading cycle: (1 true, 2 next false) -> (2 false, 1 next false)
    //             -> (1 false, 2 next true) -> (2 true, 1 next true).
    const std::array<std::pair<std::size_t, std::size_t>, 4> terms{{
        {SentenceBasis::kMeasuredTrue, SentenceBasis::kLatentFalse},
        {SentenceBasis::kLatentFalse, SentenceBasis::kMeasuredFalse},
        {SentenceBasis::kMeasuredFalse, SentenceBasis::kLatentTrue},
        {SentenceBasis::kLatentTrue, SentenceBasis::kMeasuredTrue},
    }};
    StateVector psi0 = tensor_product(slot(terms[0].first), slot(terms[0].second));
    for (std::size_t k = 1; k < terms.size(); ++k) {
        psi0 += tensor_product(slot(terms[k].first), slot(terms[k].second));
    }
    m.psi0 = 0.5 * psi0;
    for (std::size_t k = 0; k < terms.size(); ++k) {
        m.cycle_states[k] = kappa_index(terms[k].first, terms[k].second, d, d);
    }
    m.subspace_basis = m.cycle_states;
    std::sort(m.subspace_basis.begin(), m.subspace_basis.end());

    const Operator id = Operator::identity(d);
    for (bool value : {true, false}) {
        const Operator local = SentenceBasis::truth_projector(value);
        m.projectors[{1, value}] = tensor_product(local, id).with_role(linalg::Role::Projector);
        m.projectors[{2, value}] = tensor_product(id, local).with_role(linalg::Role::Projector);
    }

    // Each Ψ₀ term steps to the next one in reading order.
    linalg::PermutationMap step(d * d);
    std::iota(step.begin(), step.end(), std::size_t{0});
    for (std::size_t k = 0; k < m.cycle_states.size(); ++k) {
        step[m.cycle_states[k] - 1] = m.cycle_states[(k + 1) % m.cycle_states.size()] - 1;
    }
    m.u_step = linalg::permutation_operator(step);
    m.u_step_sub = linalg::restrict_to(m.u_step, m.subspace_basis);
    m.hamiltonian = linalg::principal_log_hamiltonian(m.u_step, kGeneratorScale);
    return m;
}

Operator DoubleLiarModel::hamiltonian_sub() const {
    return linalg::restrict_to(hamiltonian.dense(), subspace_basis);
}

Operator DoubleLiarModel::evolution_sub(double t) const {
    return linalg::restrict_to(evolution(t), subspace_basis);
}

} // namespace qliar::core
