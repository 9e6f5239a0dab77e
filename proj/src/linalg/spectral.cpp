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

#include "qliar/linalg.hpp"

#include <cmath>
#include <numbers>

namespace qliar::linalg {

namespace {

/// exp(-2πi·r/L) for an integer residue r.
Complex unit_root(std::size_t r, std::size_t L) {
    return std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(r % L) / static_cast<double>(L));
}

/// Principal phase of exp(2πi·m/L), folded into (-π, π].
double principal_phase(std::size_t m, std::size_t L) {
    if (2 * m == L) {
        return std::numbers::pi;
    }
    const double mm = 2 * m > L ? static_cast<double>(m) - static_cast<double>(L) : static_cast<double>(m);
    return 2.0 * std::numbers::pi * mm / static_cast<double>(L);
}

void require_dense_ok(std::size_t dim, std::size_t max_dim, const char *where) {
    if (dim > max_dim) {
        throw CapacityError(std::string(where) + ": dense dimension " + std::to_string(dim) +
                            " exceeds maximum " + std::to_string(max_dim));
    }
}

} // namespace

std::optional<PermutationMap> as_permutation(const Operator &op) {
    const std::size_t n = op.dim();
    PermutationMap map(n, n);
    std::vector<bool> row_used(n, false);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t r = 0; r < n; ++r) {
            const Complex x = op(r, c);
            if (x == Complex{}) {
                continue;
            }
            if (x != Complex{1.0, 0.0} || map[c] != n || row_used[r]) {
                return std::nullopt;
            }
            map[c] = r;
            row_used[r] = true;
        }
        if (map[c] == n) {
            return std::nullopt;
        }
    }
    return map;
}

Operator permutation_operator(const PermutationMap &map) {
    Operator out(map.size(), Role::Unitary);
    std::vector<bool> hit(map.size(), false);
    for (std::size_t c = 0; c < map.size(); ++c) {
        if (map[c] >= map.size() || hit[map[c]]) {
            throw ArgumentError("permutation_operator: map is not a bijection");
        }
        hit[map[c]] = true;
        out(map[c], c) = 1.0;
    }
    return out;
}

StateVector CycleDecomposition::eigenvector(std::size_t m) const {
    std::vector<Complex> amps(dim);
    for (std::size_t k = 0; k < cycle_order.size(); ++k) {
        amps[cycle_order[k]] = eigenvectors.at(m)[k];
    }
    return StateVector(std::move(amps));
}

std::vector<Complex> CycleDecomposition::all_eigenvalues() const {
    std::vector<Complex> out = eigenvalues;
    out.resize(dim, Complex{1.0, 0.0});
    return out;
}

CycleDecomposition cycle_eigendecompose(const PermutationMap &map) {
    const std::size_t n = map.size();
    std::vector<bool> seen(n, false);
    for (std::size_t p : map) {
        if (p >= n || seen[p]) {
            throw ArgumentError("cycle_eigendecompose: map is not a bijection");
        }
        seen[p] = true;
    }
    seen.assign(n, false);
    std::vector<std::size_t> cycle;
    for (std::size_t start = 0; start < n; ++start) {
        if (seen[start]) {
            continue;
        }
        std::vector<std::size_t> orbit;
        for (std::size_t p = start; !seen[p]; p = map[p]) {
            seen[p] = true;
            orbit.push_back(p);
        }
        if (orbit.size() < 2) {
            continue;
        }
        if (!cycle.empty()) {
            throw UnsupportedOperatorError(
                "cycle_eigendecompose: permutation has more than one non-trivial cycle");
        }
        cycle = std::move(orbit);
    }

    CycleDecomposition d;
    d.dim = n;
    d.cycle_order = std::move(cycle);
    const std::size_t L = d.cycle_order.size();
    const double inv_sqrt = L ? 1.0 / std::sqrt(static_cast<double>(L)) : 0.0;
    for (std::size_t m = 0; m < L; ++m) {
        const double theta = principal_phase(m, L);
        d.phases.push_back(theta);
        d.eigenvalues.push_back(std::polar(1.0, theta));
        std::vector<Complex> v(L);
        for (std::size_t k = 0; k < L; ++k) {
            v[k] = inv_sqrt * unit_root(m * k, L);
        }
        d.eigenvectors.push_back(std::move(v));
    }
    return d;
}

CycleDecomposition cycle_eigendecompose(const Operator &u) {
    auto map = as_permutation(u);
    if (!map) {
        throw UnsupportedOperatorError(
            "cycle_eigendecompose: only permutation operators are diagonalized");
    }
    return cycle_eigendecompose(*map);
}

// ---------------------------------------------------------------------------
// Hamiltonian

Hamiltonian::Hamiltonian(CycleDecomposition spectrum, std::vector<double> energies)
    : spectrum_(std::move(spectrum)), energies_(std::move(energies)) {
    if (energies_.size() != spectrum_.cycle_length()) {
        throw ArgumentError("Hamiltonian: one energy per cycle eigenvector required");
    }
}

Operator Hamiltonian::dense(std::size_t max_dim) const {
    require_dense_ok(dim(), max_dim, "Hamiltonian::dense");
    Operator h(dim(), Role::Hermitian);
    const auto &order = spectrum_.cycle_order;
    const auto &vecs = spectrum_.eigenvectors;
    for (std::size_t a = 0; a < order.size(); ++a) {
        for (std::size_t b = 0; b < order.size(); ++b) {
            Complex s = 0.0;
            for (std::size_t m = 0; m < energies_.size(); ++m) {
                s += energies_[m] * vecs[m][a] * std::conj(vecs[m][b]);
            }
            h(order[a], order[b]) = s;
        }
    }
    return h;
}

namespace {

/// Σ_m f(E_m) v_m v_m† applied to psi on the cycle; identity·g elsewhere.
template <class F>
StateVector spectral_apply(const Hamiltonian &h, const StateVector &psi, F weight, Complex off_cycle) {
    if (psi.dim() != h.dim()) {
        throw ArgumentError("dimension mismatch: operator " + std::to_string(h.dim()) + ", state " +
                            std::to_string(psi.dim()));
    }
    const auto &order = h.spectrum().cycle_order;
    const auto &vecs = h.spectrum().eigenvectors;
    const auto &energies = h.energies();

    StateVector out = psi;
    if (off_cycle != Complex{1.0, 0.0}) {
        out *= off_cycle;
    }
    std::vector<Complex> coeff(order.size());
    for (std::size_t m = 0; m < order.size(); ++m) {
        Complex c = 0.0;
        for (std::size_t k = 0; k < order.size(); ++k) {
            c += std::conj(vecs[m][k]) * psi[order[k]];
        }
        coeff[m] = weight(energies[m]) * c;
    }
    for (std::size_t k = 0; k < order.size(); ++k) {
        Complex s = 0.0;
        for (std::size_t m = 0; m < order.size(); ++m) {
            s += coeff[m] * vecs[m][k];
        }
        out[order[k]] = s;
    }
    return out;
}

} // namespace

StateVector Hamiltonian::apply(const StateVector &psi) const {
    return spectral_apply(*this, psi, [](double e) { return Complex{e, 0.0}; }, Complex{0.0, 0.0});
}

Hamiltonian principal_log_hamiltonian(const PermutationMap &map, double scale) {
    CycleDecomposition d = cycle_eigendecompose(map);
    // i · Ln(e^{iθ}) = i · iθ = -θ
    std::vector<double> energies;
    energies.reserve(d.phases.size());
    for (double theta : d.phases) {
        energies.push_back(-scale * theta);
    }
    return Hamiltonian(std::move(d), std::move(energies));
}

Hamiltonian principal_log_hamiltonian(const Operator &u, double scale) {
    auto map = as_permutation(u);
    if (!map) {
        if (!u.is_unitary()) {
            throw ArgumentError("principal_log_hamiltonian: operator is not unitary");
        }
        throw UnsupportedOperatorError(
            "principal_log_hamiltonian: only permutation operators are supported");
    }
    return principal_log_hamiltonian(*map, scale);
}

StateVector evolve(const Hamiltonian &h, double t, const StateVector &psi) {
    if (t == 0.0) {
        if (psi.dim() != h.dim()) {
            throw ArgumentError("evolve: dimension mismatch");
        }
        return psi;
    }
    return spectral_apply(
        h, psi, [t](double e) { return std::polar(1.0, -e * t); }, Complex{1.0, 0.0});
}

Operator evolution_matrix(const Hamiltonian &h, double t, std::size_t max_dim) {
    require_dense_ok(h.dim(), max_dim, "evolution_matrix");
    Operator u = Operator::identity(h.dim());
    const auto &order = h.spectrum().cycle_order;
    const auto &vecs = h.spectrum().eigenvectors;
    const auto &energies = h.energies();
    std::vector<Complex> phase(energies.size());
    for (std::size_t m = 0; m < energies.size(); ++m) {
        phase[m] = std::polar(1.0, -energies[m] * t);
    }
    for (std::size_t a = 0; a < order.size(); ++a) {
        for (std::size_t b = 0; b < order.size(); ++b) {
            Complex s = 0.0;
            for (std::size_t m = 0; m < energies.size(); ++m) {
                s += phase[m] * vecs[m][a] * std::conj(vecs[m][b]);
            }
            u(order[a], order[b]) = s;
        }
    }
    return u;
}

} // namespace qliar::linalg
