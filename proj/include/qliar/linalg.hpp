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

/**
 * @file
 * Dense complex linear algebra for small Hilbert-space models: state vectors,
 * square operators, Kronecker products, index flattening, and the spectral
 * calculus of permutation operators (cycle diagonalization, principal
 * logarithm, Schrödinger propagation).
 *
 * Container access (operator[], operator()) is 0-based. Functions that speak
 * in basis-vector numbers (kappa_index, basis_outer, subspace coordinates)
 * are 1-based, matching the e_1 ... e_d convention.
 */

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qliar/errors.hpp"

namespace qliar::linalg {

using Complex = std::complex<double>;

/// Every numeric threshold used by invariant checks and fixtures.
struct Tolerances {
    double norm = 1e-12;
    double hermiticity = 1e-12;
    double projector = 1e-12;
    double unitarity = 1e-10;
    double fixture = 1e-9;
};

inline constexpr Tolerances kDefaultTolerances{};

/// 4^8: eight sentences with four slots each.
inline constexpr std::size_t kDefaultMaxDim = 65536;

/// Largest dimension for which a dense operator is materialized on request.
inline constexpr std::size_t kDefaultMaxDenseOperatorDim = 4096;

class StateVector {
  public:
    StateVector() = default;

    /// Labels default to "e1".."eN" when `labels` is empty.
    explicit StateVector(std::vector<Complex> amplitudes, std::vector<std::string> labels = {});

    /// Standard basis vector e_index (1-based).
    static StateVector basis(std::size_t dim, std::size_t index, std::vector<std::string> labels = {});

    [[nodiscard]] std::size_t dim() const noexcept { return amplitudes_.size(); }
    [[nodiscard]] std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
    [[nodiscard]] const std::vector<std::string> &labels() const noexcept { return labels_; }

    [[nodiscard]] const Complex &operator[](std::size_t i) const { return amplitudes_[i]; }
    Complex &operator[](std::size_t i) { return amplitudes_[i]; }

    [[nodiscard]] double norm_squared() const noexcept;
    [[nodiscard]] double norm() const noexcept;
    [[nodiscard]] bool is_normalized(double tol = kDefaultTolerances.norm) const noexcept;
    [[nodiscard]] bool all_finite() const noexcept;

    /// Throws NormalizationError on a zero vector.
    [[nodiscard]] StateVector normalized() const;

    /// <this|other>
    [[nodiscard]] Complex inner(const StateVector &other) const;

    StateVector &operator+=(const StateVector &rhs);
    StateVector &operator-=(const StateVector &rhs);
    StateVector &operator*=(Complex s);

  private:
    std::vector<Complex> amplitudes_;
    std::vector<std::string> labels_;
};

StateVector operator+(StateVector lhs, const StateVector &rhs);
StateVector operator-(StateVector lhs, const StateVector &rhs);
StateVector operator*(Complex s, StateVector v);

/// |<a|b>|^2
double overlap(const StateVector &a, const StateVector &b);

/// Largest |a_i - b_i|.
double max_abs_diff(const StateVector &a, const StateVector &b);

enum class Role { General, Projector, Unitary, Hermitian };

const char *to_string(Role role) noexcept;

class Operator {
  public:
    Operator() = default;

    /// Zero operator of the given dimension.
    explicit Operator(std::size_t dim, Role role = Role::General);

    /// Row-major entries, dim*dim of them.
    Operator(std::size_t dim, std::vector<Complex> entries, Role role = Role::General);

    static Operator identity(std::size_t dim);
    static Operator from_rows(std::initializer_list<std::initializer_list<Complex>> rows,
                              Role role = Role::General);

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] Role role() const noexcept { return role_; }
    [[nodiscard]] std::span<const Complex> entries() const noexcept { return entries_; }

    [[nodiscard]] const Complex &operator()(std::size_t r, std::size_t c) const {
        return entries_[r * dim_ + c];
    }
    Complex &operator()(std::size_t r, std::size_t c) { return entries_[r * dim_ + c]; }

    [[nodiscard]] Operator adjoint() const;
    [[nodiscard]] Complex trace() const noexcept;
    [[nodiscard]] StateVector apply(const StateVector &v) const;

    [[nodiscard]] bool is_hermitian(double tol = kDefaultTolerances.hermiticity) const;
    [[nodiscard]] bool is_unitary(double tol = kDefaultTolerances.unitarity) const;
    [[nodiscard]] bool is_projector(double tol = kDefaultTolerances.projector) const;
    [[nodiscard]] bool all_finite() const noexcept;

    /// Returns a copy tagged with `role` after checking the role's invariant;
    /// throws ArgumentError when it does not hold.
    [[nodiscard]] Operator with_role(Role role, const Tolerances &tol = kDefaultTolerances) const;

    Operator &operator+=(const Operator &rhs);
    Operator &operator-=(const Operator &rhs);
    Operator &operator*=(Complex s);

  private:
    std::size_t dim_ = 0;
    std::vector<Complex> entries_;
    Role role_ = Role::General;
};

Operator operator+(Operator lhs, const Operator &rhs);
Operator operator-(Operator lhs, const Operator &rhs);
Operator operator*(Complex s, Operator op);
Operator operator*(const Operator &a, const Operator &b);
StateVector operator*(const Operator &a, const StateVector &v);

double max_abs_diff(const Operator &a, const Operator &b);

/// Kronecker product. Labels concatenate as "a⊗b". Throws CapacityError when
/// the product dimension exceeds `max_dim`.
StateVector tensor_product(const StateVector &a, const StateVector &b,
                           std::size_t max_dim = kDefaultMaxDim);
Operator tensor_product(const Operator &a, const Operator &b, std::size_t max_dim = kDefaultMaxDim);

/// Flat 1-based index of e_i ⊗ e_j in a d1*d2 space: d2*(i-1)+j.
std::size_t kappa_index(std::size_t i, std::size_t j, std::size_t d1, std::size_t d2);

/// Inverse of kappa_index.
std::pair<std::size_t, std::size_t> kappa_split(std::size_t k, std::size_t d1, std::size_t d2);

/// e_i e_u^T in dimension `dim` (1-based indices).
Operator basis_outer(std::size_t i, std::size_t u, std::size_t dim);

/// Submatrix on the given 1-based coordinates, in the order given.
Operator restrict_to(const Operator &op, std::span<const std::size_t> basis);

/// Image of each basis column: U e_c = e_{map[c]} (0-based).
using PermutationMap = std::vector<std::size_t>;

/// The permutation encoded by `op`, or nullopt when `op` is not a 0/1
/// permutation matrix.
std::optional<PermutationMap> as_permutation(const Operator &op);

Operator permutation_operator(const PermutationMap &map);

/// Spectral data of a permutation with at most one non-trivial cycle.
///
/// With cycle positions p_0..p_{L-1} (U e_{p_k} = e_{p_{k+1}}), the Fourier
/// vectors v_m[k] = exp(-2πi·m·k/L)/√L satisfy U v_m = exp(2πi·m/L) v_m.
/// Positions off the cycle are fixed points with eigenvalue 1.
struct CycleDecomposition {
    std::size_t dim = 0;
    /// 0-based positions, in cycle order. Empty for the identity.
    std::vector<std::size_t> cycle_order;
    /// Principal phases θ_m ∈ (-π, π], eigenvalue exp(iθ_m).
    std::vector<double> phases;
    std::vector<Complex> eigenvalues;
    /// eigenvectors[m][k]: coefficient of v_m on cycle_order[k].
    std::vector<std::vector<Complex>> eigenvectors;

    [[nodiscard]] std::size_t cycle_length() const noexcept { return cycle_order.size(); }

    /// v_m embedded in the full space.
    [[nodiscard]] StateVector eigenvector(std::size_t m) const;

    /// Cycle eigenvalues followed by 1 for every fixed point; dim entries.
    [[nodiscard]] std::vector<Complex> all_eigenvalues() const;
};

/// Throws UnsupportedOperatorError for non-permutation input or more than one
/// non-trivial cycle.
CycleDecomposition cycle_eigendecompose(const Operator &u);
CycleDecomposition cycle_eigendecompose(const PermutationMap &map);

/// Hermitian generator kept in spectral form; dense() materializes it.
class Hamiltonian {
  public:
    Hamiltonian() = default;
    Hamiltonian(CycleDecomposition spectrum, std::vector<double> energies);

    [[nodiscard]] std::size_t dim() const noexcept { return spectrum_.dim; }
    [[nodiscard]] const CycleDecomposition &spectrum() const noexcept { return spectrum_; }
    /// energies()[m] belongs to spectrum().eigenvectors[m]; all other
    /// directions have energy 0.
    [[nodiscard]] const std::vector<double> &energies() const noexcept { return energies_; }

    [[nodiscard]] Operator dense(std::size_t max_dim = kDefaultMaxDenseOperatorDim) const;
    [[nodiscard]] StateVector apply(const StateVector &psi) const;

  private:
    CycleDecomposition spectrum_;
    std::vector<double> energies_;
};

/// H = scale · i · Ln(u) on the principal branch Ln(e^{iθ}) = iθ, θ ∈ (-π, π].
/// Non-unitary input throws ArgumentError; unitary non-permutations throw
/// UnsupportedOperatorError.
Hamiltonian principal_log_hamiltonian(const Operator &u, double scale);
Hamiltonian principal_log_hamiltonian(const PermutationMap &map, double scale);

/// e^{-iHt}·psi.
StateVector evolve(const Hamiltonian &h, double t, const StateVector &psi);

/// e^{-iHt} as a dense unitary.
Operator evolution_matrix(const Hamiltonian &h, double t,
                          std::size_t max_dim = kDefaultMaxDenseOperatorDim);

} // namespace qliar::linalg
