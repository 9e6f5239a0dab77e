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

#include "doctest.h"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <set>

#include "qliar/linalg.hpp"

using namespace qliar;
using namespace qliar::linalg;
using std::numbers::pi;

namespace {

const Complex I{0.0, 1.0};

Eigen::MatrixXcd to_eigen(const Operator &op) {
    Eigen::MatrixXcd m(op.dim(), op.dim());
    for (std::size_t r = 0; r < op.dim(); ++r)
        for (std::size_t c = 0; c < op.dim(); ++c)
            m(r, c) = op(r, c);
    return m;
}

double max_abs_diff(const Operator &a, const Eigen::MatrixXcd &b) {
    return (to_eigen(a) - b).cwiseAbs().maxCoeff();
}

// Leibniz expansion; only for tiny matrices.
Complex leibniz_det(const Eigen::MatrixXcd &m) {
    const int n = static_cast<int>(m.rows());
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Complex det = 0.0;
    do {
        int inversions = 0;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                if (perm[a] > perm[b]) ++inversions;
        Complex term = (inversions % 2) ? -1.0 : 1.0;
        for (int r = 0; r < n; ++r) term *= m(r, perm[r]);
        det += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return det;
}

// Double-liar reading cycle on C^16, 1-based: e10 -> e8 -> e13 -> e3 -> e10.
PermutationMap double_liar_cycle() {
    PermutationMap map(16);
    std::iota(map.begin(), map.end(), 0);
    map[10 - 1] = 8 - 1;
    map[8 - 1] = 13 - 1;
    map[13 - 1] = 3 - 1;
    map[3 - 1] = 10 - 1;
    return map;
}

Operator printed_u_d() {
    return Operator::from_rows({{0, 0, 0, 1}, {0, 0, 1, 0}, {1, 0, 0, 0}, {0, 1, 0, 0}});
}

PermutationMap random_single_cycle(std::mt19937_64 &rng, std::size_t dim) {
    std::vector<std::size_t> pos(dim);
    std::iota(pos.begin(), pos.end(), 0);
    std::shuffle(pos.begin(), pos.end(), rng);
    const std::size_t L = std::uniform_int_distribution<std::size_t>(2, dim)(rng);
    PermutationMap map(dim);
    std::iota(map.begin(), map.end(), 0);
    for (std::size_t k = 0; k < L; ++k) map[pos[k]] = pos[(k + 1) % L];
    return map;
}

StateVector random_state(std::mt19937_64 &rng, std::size_t dim) {
    std::normal_distribution<double> g;
    std::vector<Complex> amps(dim);
    for (auto &a : amps) a = {g(rng), g(rng)};
    return StateVector(std::move(amps)).normalized();
}

} // namespace

TEST_CASE("tensor_product") {
    SUBCASE("identity factor gives block diagonal projector") {
        const Operator p_true = Operator::from_rows({{1, 0}, {0, 0}});
        const Operator out = tensor_product(Operator::identity(2), p_true);
        CHECK(out.dim() == 4);
        Operator expected(4);
        expected(0, 0) = 1.0;
        expected(2, 2) = 1.0;
        CHECK(max_abs_diff(out, expected) == 0.0);
    }
    SUBCASE("standard basis vectors") {
        const auto v = tensor_product(StateVector::basis(2, 1), StateVector::basis(2, 2));
        CHECK(v.dim() == 4);
        CHECK(v[1] == Complex{1.0, 0.0});
        CHECK(v[0] == Complex{});
        CHECK(v.labels()[1] == "e1⊗e2");
    }
    SUBCASE("antisymmetric pair") {
        const auto up = StateVector::basis(2, 1);
        const auto down = StateVector::basis(2, 2);
        const auto s = (1.0 / std::sqrt(2.0)) * (tensor_product(up, down) - tensor_product(down, up));
        const double h = 1.0 / std::sqrt(2.0);
        CHECK(std::abs(s[0]) == 0.0);
        CHECK(std::abs(s[1] - h) < 1e-15);
        CHECK(std::abs(s[2] + h) < 1e-15);
        CHECK(std::abs(s[3]) == 0.0);
    }
    SUBCASE("capacity") {
        CHECK_THROWS_AS(tensor_product(StateVector::basis(300, 1), StateVector::basis(300, 1)),
                        CapacityError);
        CHECK_NOTHROW(tensor_product(StateVector::basis(256, 1), StateVector::basis(256, 1)));
        CHECK_THROWS_AS(tensor_product(Operator::identity(4), Operator::identity(4), 8), CapacityError);
    }
    SUBCASE("associativity on permutation and basis inputs") {
        const Operator a = permutation_operator({1, 0});
        const Operator b = basis_outer(1, 3, 3);
        const Operator c = permutation_operator({2, 0, 1});
        const Operator left = tensor_product(tensor_product(a, b), c);
        const Operator right = tensor_product(a, tensor_product(b, c));
        CHECK(max_abs_diff(left, right) == 0.0);
    }
}

TEST_CASE("kappa_index") {
    CHECK(kappa_index(3, 2, 4, 4) == 10);
    CHECK(kappa_index(1, 1, 4, 4) == 1);
    CHECK(kappa_index(4, 1, 4, 4) == 13);
    CHECK(kappa_index(2, 4, 4, 4) == 8);
    CHECK(kappa_index(1, 3, 4, 4) == 3);
    CHECK_THROWS_AS(kappa_index(0, 1, 4, 4), ArgumentError);
    CHECK_THROWS_AS(kappa_index(5, 1, 4, 4), ArgumentError);
    CHECK_THROWS_AS(kappa_index(1, 5, 4, 4), ArgumentError);

    SUBCASE("bijective for all grids up to 8x8") {
        for (std::size_t d1 = 1; d1 <= 8; ++d1) {
            for (std::size_t d2 = 1; d2 <= 8; ++d2) {
                std::vector<int> hits(d1 * d2 + 1, 0);
                for (std::size_t i = 1; i <= d1; ++i) {
                    for (std::size_t j = 1; j <= d2; ++j) {
                        const auto k = kappa_index(i, j, d1, d2);
                        REQUIRE(k >= 1);
                        REQUIRE(k <= d1 * d2);
                        ++hits[k];
                        CHECK(kappa_split(k, d1, d2) == std::pair{i, j});
                    }
                }
                CHECK(std::count(hits.begin() + 1, hits.end(), 1) == static_cast<long>(d1 * d2));
            }
        }
    }
    SUBCASE("matches Kronecker placement") {
        const auto v = tensor_product(StateVector::basis(4, 3), StateVector::basis(4, 2));
        CHECK(v[kappa_index(3, 2, 4, 4) - 1] == Complex{1.0, 0.0});
    }
}

TEST_CASE("basis_outer") {
    const Operator a = basis_outer(1, 3, 4);
    const Operator b = basis_outer(3, 2, 4);
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) {
            CHECK(a(r, c) == Complex{(r == 0 && c == 2) ? 1.0 : 0.0});
            CHECK(b(r, c) == Complex{(r == 2 && c == 1) ? 1.0 : 0.0});
        }
    CHECK(max_abs_diff(basis_outer(2, 2, 2), Operator::from_rows({{0, 0}, {0, 1}})) == 0.0);
    CHECK_THROWS_AS(basis_outer(0, 1, 4), ArgumentError);
    CHECK_THROWS_AS(basis_outer(1, 5, 4), ArgumentError);

    SUBCASE("flat entry of the product term") {
        // O_13 ⊗ O_32 has its single 1 at flat (κ(1,3), κ(3,2)) = (3, 10).
        const Operator t = tensor_product(a, b);
        CHECK(t(3 - 1, 10 - 1) == Complex{1.0, 0.0});
        double total = 0.0;
        for (auto e : t.entries()) total += std::abs(e);
        CHECK(total == 1.0);
    }
}

TEST_CASE("operator roles") {
    CHECK_NOTHROW((void)Operator::from_rows({{1, 0}, {0, 0}}).with_role(Role::Projector));
    CHECK_THROWS_AS((void)Operator::from_rows({{1, 1}, {0, 0}}).with_role(Role::Projector), ArgumentError);
    CHECK_THROWS_AS((void)Operator::from_rows({{1, I}, {I, 0}}).with_role(Role::Hermitian), ArgumentError);
    CHECK_THROWS_AS((void)Operator::from_rows({{2, 0}, {0, 1}}).with_role(Role::Unitary), ArgumentError);
    CHECK(printed_u_d().with_role(Role::Unitary).role() == Role::Unitary);
    Operator bad = Operator::identity(2);
    bad(0, 1) = std::numeric_limits<double>::infinity();
    CHECK_FALSE(bad.all_finite());
    CHECK_THROWS_AS((void)bad.with_role(Role::General), ArgumentError);
}

TEST_CASE("cycle_eigendecompose") {
    SUBCASE("4-cycle: roots of unity confirmed by characteristic polynomial") {
        const auto d = cycle_eigendecompose(printed_u_d());
        REQUIRE(d.cycle_length() == 4);
        const std::vector<Complex> expected{1.0, I, -1.0, -I};
        for (std::size_t m = 0; m < 4; ++m) {
            CHECK(std::abs(d.eigenvalues[m] - expected[m]) < 1e-12);
        }
        // Oracle: det(U - λI) vanishes at each eigenvalue, and every one is distinct.
        const Eigen::MatrixXcd u = to_eigen(printed_u_d());
        for (const auto &lambda : d.eigenvalues) {
            const Complex det = leibniz_det(u - lambda * Eigen::MatrixXcd::Identity(4, 4));
            CHECK(std::abs(det) < 1e-12);
        }
        // Coefficients of the characteristic polynomial: det(λI - U) = λ^4 - 1.
        CHECK(std::abs(leibniz_det(-u) - Complex{-1.0}) < 1e-15);
    }
    SUBCASE("eigenpairs and orthonormality") {
        const auto d = cycle_eigendecompose(double_liar_cycle());
        const Operator u = permutation_operator(double_liar_cycle());
        for (std::size_t m = 0; m < d.cycle_length(); ++m) {
            const auto v = d.eigenvector(m);
            CHECK(max_abs_diff(u * v, d.eigenvalues[m] * v) < 1e-12);
            for (std::size_t n = 0; n < d.cycle_length(); ++n) {
                const Complex ip = v.inner(d.eigenvector(n));
                CHECK(std::abs(ip - Complex{m == n ? 1.0 : 0.0}) < 1e-12);
            }
        }
        CHECK(d.all_eigenvalues().size() == 16);
    }
    SUBCASE("swap and identity") {
        const auto swap = cycle_eigendecompose(permutation_operator({1, 0}));
        CHECK(std::abs(swap.eigenvalues[0] - Complex{1.0}) < 1e-12);
        CHECK(std::abs(swap.eigenvalues[1] - Complex{-1.0}) < 1e-12);
        CHECK(swap.phases[1] == doctest::Approx(pi));
        const auto id = cycle_eigendecompose(Operator::identity(5));
        CHECK(id.cycle_length() == 0);
        for (auto e : id.all_eigenvalues()) CHECK(e == Complex{1.0});
    }
    SUBCASE("unsupported inputs") {
        CHECK_THROWS_AS(cycle_eigendecompose(Operator::from_rows({{0, I}, {I, 0}})),
                        UnsupportedOperatorError);
        CHECK_THROWS_AS(cycle_eigendecompose(permutation_operator({1, 0, 3, 2})),
                        UnsupportedOperatorError);
        CHECK_THROWS_AS(cycle_eigendecompose(PermutationMap{0, 0}), ArgumentError);
    }
}

TEST_CASE("principal_log_hamiltonian") {
    SUBCASE("double-liar step operator at scale 2/π") {
        const auto h = principal_log_hamiltonian(permutation_operator(double_liar_cycle()), 2.0 / pi);
        std::multiset<long> energies;
        for (double e : h.energies()) {
            CHECK(std::abs(e - std::round(e)) < 1e-12);
            energies.insert(std::lround(e));
        }
        CHECK(energies == std::multiset<long>{-2, -1, 0, 1});
        CHECK(h.dense().is_hermitian(1e-12));
        CHECK(h.dense().with_role(Role::Hermitian).role() == Role::Hermitian);
    }
    SUBCASE("identity maps to zero") {
        const auto h = principal_log_hamiltonian(Operator::identity(4), 2.0 / pi);
        CHECK(max_abs_diff(h.dense(), Operator(4)) == 0.0);
    }
    SUBCASE("swap on positions 3,4 against a hand 2x2 diagonalization") {
        const auto h = principal_log_hamiltonian(permutation_operator({0, 1, 3, 2}), 2.0 / pi);
        // Swap eigenpairs: (1,1)/√2 -> 1, (1,-1)/√2 -> -1 = e^{iπ}.
        // H = (2/π)·i·(iπ)·|-><-| = -2·|-><-|.
        const double a = 1.0 / std::sqrt(2.0);
        const Complex minus[2] = {a, -a};
        Operator expected(4);
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) expected(2 + r, 2 + c) = -2.0 * minus[r] * std::conj(minus[c]);
        CHECK(max_abs_diff(h.dense(), expected) < 1e-12);
        CHECK(std::abs(expected(2, 2) - Complex{-1.0}) < 1e-15);
        CHECK(std::abs(expected(2, 3) - Complex{1.0}) < 1e-15);
    }
    SUBCASE("non-unitary input") {
        CHECK_THROWS_AS(principal_log_hamiltonian(Operator::from_rows({{2, 0}, {0, 1}}), 1.0),
                        ArgumentError);
        const double a = 1.0 / std::sqrt(2.0);
        CHECK_THROWS_AS(principal_log_hamiltonian(Operator::from_rows({{a, a}, {a, -a}}), 1.0),
                        UnsupportedOperatorError);
    }
    SUBCASE("hermitian for random single-cycle permutations") {
        std::mt19937_64 rng(7);
        for (int trial = 0; trial < 50; ++trial) {
            const auto map = random_single_cycle(rng, 2 + trial % 9);
            const auto h = principal_log_hamiltonian(map, 2.0 / pi).dense();
            CHECK(h.is_hermitian(1e-12));
        }
    }
}

TEST_CASE("evolution") {
    const auto h = principal_log_hamiltonian(double_liar_cycle(), 2.0 / pi);

    SUBCASE("t = 0") {
        std::mt19937_64 rng(1);
        const auto psi = random_state(rng, 16);
        CHECK(max_abs_diff(evolve(h, 0.0, psi), psi) == 0.0);
        CHECK(max_abs_diff(evolution_matrix(h, 0.0), Operator::identity(16)) < 1e-15);
    }
    SUBCASE("uniform cycle superposition is stationary") {
        std::vector<Complex> amps(16);
        for (int k : {3, 8, 10, 13}) amps[k - 1] = 0.5;
        const StateVector psi0(amps);
        for (double t : {0.1, 1.0, 2.5, 7.0, 11.3}) {
            CHECK(max_abs_diff(evolve(h, t, psi0), psi0) < 1e-12);
        }
    }
    SUBCASE("quarter period is one reading step") {
        const auto s1 = StateVector::basis(16, 10);
        const auto s2 = evolve(h, pi / 2, s1);
        CHECK(overlap(s2, StateVector::basis(16, 8)) > 1.0 - 1e-12);
        CHECK(max_abs_diff(evolution_matrix(h, pi / 2), permutation_operator(double_liar_cycle())) < 1e-10);
    }
    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(evolve(h, 1.0, StateVector::basis(4, 1)), ArgumentError);
    }
    SUBCASE("entry (3,10) against numerical exponentiation and the closed form") {
        const Eigen::MatrixXcd hd = to_eigen(h.dense());
        for (double t : {0.0, 0.3, 1.1, 2.9, 5.0}) {
            const Eigen::MatrixXcd oracle = (Complex{0.0, -t} * hd).exp();
            const Operator u = evolution_matrix(h, t);
            CHECK(max_abs_diff(u, oracle) < 1e-12);
            const Complex closed =
                (1.0 - I * std::exp(-I * t) + I * std::exp(I * t) - std::exp(2.0 * I * t)) / 4.0;
            CHECK(std::abs(u(3 - 1, 10 - 1) - closed) < 1e-12);
            CHECK(std::abs(oracle(3 - 1, 10 - 1) - closed) < 1e-12);
        }
    }
    SUBCASE("subspace entry (1,1)") {
        const std::vector<std::size_t> basis{3, 8, 10, 13};
        for (double t : {0.4, 1.7, 3.3}) {
            const Operator sub = restrict_to(evolution_matrix(h, t), basis);
            const Complex closed = (1.0 + std::exp(-I * t) + std::exp(I * t) + std::exp(2.0 * I * t)) / 4.0;
            CHECK(std::abs(sub(0, 0) - closed) < 1e-12);
        }
    }
}

TEST_CASE("spectral properties over random inputs") {
    std::mt19937_64 rng(20261015);
    std::uniform_real_distribution<double> time(0.0, 4.0 * pi);

    SUBCASE("norm preservation") {
        const auto h = principal_log_hamiltonian(double_liar_cycle(), 2.0 / pi);
        for (int trial = 0; trial < 100; ++trial) {
            const auto psi = random_state(rng, 16);
            CHECK(std::abs(evolve(h, time(rng), psi).norm() - 1.0) <= 1e-12);
        }
    }
    SUBCASE("round trip and group law") {
        for (int trial = 0; trial < 40; ++trial) {
            const auto map = random_single_cycle(rng, 2 + trial % 11);
            const Operator u = permutation_operator(map);
            const auto h = principal_log_hamiltonian(u, 2.0 / pi);
            CHECK(max_abs_diff(evolution_matrix(h, pi / 2), u) <= 1e-10);
            CHECK(evolution_matrix(h, time(rng)).is_unitary(1e-10));

            const double t1 = time(rng), t2 = time(rng);
            const Operator lhs = evolution_matrix(h, t1 + t2);
            const Operator rhs = evolution_matrix(h, t1) * evolution_matrix(h, t2);
            CHECK(max_abs_diff(lhs, rhs) <= 1e-10);
        }
    }
    SUBCASE("spectral apply agrees with the dense generator") {
        const auto h = principal_log_hamiltonian(random_single_cycle(rng, 9), 2.0 / pi);
        const auto psi = random_state(rng, 9);
        CHECK(max_abs_diff(h.apply(psi), h.dense() * psi) < 1e-12);
    }
}
