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

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qliar::linalg {

namespace {

std::vector<std::string> default_labels(std::size_t dim) {
    std::vector<std::string> labels;
    labels.reserve(dim);
    for (std::size_t i = 1; i <= dim; ++i) {
        labels.push_back("e" + std::to_string(i));
    }
    return labels;
}

void require_same_dim(std::size_t a, std::size_t b, const char *where) {
    if (a != b) {
        std::ostringstream os;
        os << where << ": dimension mismatch (" << a << " vs " << b << ")";
        throw ArgumentError(os.str());
    }
}

std::size_t checked_product(std::size_t a, std::size_t b, std::size_t max_dim) {
    if (a != 0 && b > max_dim / a) {
        throw CapacityError("tensor_product: dimension " + std::to_string(a) + "*" +
                            std::to_string(b) + " exceeds maximum " + std::to_string(max_dim));
    }
    const std::size_t d = a * b;
    if (d > max_dim) {
        throw CapacityError("tensor_product: dimension " + std::to_string(d) + " exceeds maximum " +
                            std::to_string(max_dim));
    }
    return d;
}

bool finite(const Complex &z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

} // namespace

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(std::vector<Complex> amplitudes, std::vector<std::string> labels)
    : amplitudes_(std::move(amplitudes)), labels_(std::move(labels)) {
    if (amplitudes_.empty()) {
        throw ArgumentError("StateVector: dimension must be positive");
    }
    if (labels_.empty()) {
        labels_ = default_labels(amplitudes_.size());
    } else if (labels_.size() != amplitudes_.size()) {
        throw ArgumentError("StateVector: label count does not match dimension");
    }
}

StateVector StateVector::basis(std::size_t dim, std::size_t index, std::vector<std::string> labels) {
    if (index < 1 || index > dim) {
        throw ArgumentError("StateVector::basis: index " + std::to_string(index) +
                            " out of range 1.." + std::to_string(dim));
    }
    std::vector<Complex> amps(dim);
    amps[index - 1] = 1.0;
    return StateVector(std::move(amps), std::move(labels));
}

double StateVector::norm_squared() const noexcept {
    double s = 0.0;
    for (const auto &a : amplitudes_) {
        s += std::norm(a);
    }
    return s;
}

double StateVector::norm() const noexcept { return std::sqrt(norm_squared()); }

bool StateVector::is_normalized(double tol) const noexcept {
    return std::abs(norm_squared() - 1.0) <= tol;
}

bool StateVector::all_finite() const noexcept {
    return std::all_of(amplitudes_.begin(), amplitudes_.end(), finite);
}

StateVector StateVector::normalized() const {
    const double n = norm();
    if (n == 0.0) {
        throw NormalizationError("cannot normalize the zero vector");
    }
    StateVector out = *this;
    out *= 1.0 / n;
    return out;
}

Complex StateVector::inner(const StateVector &other) const {
    require_same_dim(dim(), other.dim(), "inner");
    Complex s = 0.0;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        s += std::conj(amplitudes_[i]) * other.amplitudes_[i];
    }
    return s;
}

StateVector &StateVector::operator+=(const StateVector &rhs) {
    require_same_dim(dim(), rhs.dim(), "operator+");
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        amplitudes_[i] += rhs.amplitudes_[i];
    }
    return *this;
}

StateVector &StateVector::operator-=(const StateVector &rhs) {
    require_same_dim(dim(), rhs.dim(), "operator-");
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        amplitudes_[i] -= rhs.amplitudes_[i];
    }
    return *this;
}

StateVector &StateVector::operator*=(Complex s) {
    for (auto &a : amplitudes_) {
        a *= s;
    }
    return *this;
}

StateVector operator+(StateVector lhs, const StateVector &rhs) { return lhs += rhs; }
StateVector operator-(StateVector lhs, const StateVector &rhs) { return lhs -= rhs; }
StateVector operator*(Complex s, StateVector v) { return v *= s; }

double overlap(const StateVector &a, const StateVector &b) { return std::norm(a.inner(b)); }

double max_abs_diff(const StateVector &a, const StateVector &b) {
    require_same_dim(a.dim(), b.dim(), "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

// ---------------------------------------------------------------------------
// Operator

const char *to_string(Role role) noexcept {
    switch (role) {
    case Role::Projector:
        return "projector";
    case Role::Unitary:
        return "unitary";
    case Role::Hermitian:
        return "hermitian";
    case Role::General:
        break;
    }
    return "general";
}

Operator::Operator(std::size_t dim, Role role) : dim_(dim), entries_(dim * dim), role_(role) {
    if (dim == 0) {
        throw ArgumentError("Operator: dimension must be positive");
    }
}

Operator::Operator(std::size_t dim, std::vector<Complex> entries, Role role)
    : dim_(dim), entries_(std::move(entries)), role_(role) {
    if (dim == 0) {
        throw ArgumentError("Operator: dimension must be positive");
    }
    if (entries_.size() != dim * dim) {
        throw ArgumentError("Operator: expected " + std::to_string(dim * dim) + " entries, got " +
                            std::to_string(entries_.size()));
    }
}

Operator Operator::identity(std::size_t dim) {
    Operator id(dim, Role::Unitary);
    for (std::size_t i = 0; i < dim; ++i) {
        id(i, i) = 1.0;
    }
    return id;
}

Operator Operator::from_rows(std::initializer_list<std::initializer_list<Complex>> rows, Role role) {
    const std::size_t dim = rows.size();
    std::vector<Complex> entries;
    entries.reserve(dim * dim);
    for (const auto &row : rows) {
        if (row.size() != dim) {
            throw ArgumentError("Operator::from_rows: matrix is not square");
        }
        entries.insert(entries.end(), row.begin(), row.end());
    }
    return Operator(dim, std::move(entries), role);
}

Operator Operator::adjoint() const {
    Operator out(dim_, role_);
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = 0; c < dim_; ++c) {
            out(c, r) = std::conj((*this)(r, c));
        }
    }
    return out;
}

Complex Operator::trace() const noexcept {
    Complex t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        t += (*this)(i, i);
    }
    return t;
}

StateVector Operator::apply(const StateVector &v) const {
    require_same_dim(dim_, v.dim(), "Operator::apply");
    std::vector<Complex> out(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
        Complex s = 0.0;
        const Complex *row = entries_.data() + r * dim_;
        for (std::size_t c = 0; c < dim_; ++c) {
            s += row[c] * v[c];
        }
        out[r] = s;
    }
    return StateVector(std::move(out), v.labels());
}

bool Operator::is_hermitian(double tol) const { return max_abs_diff(*this, adjoint()) <= tol; }

bool Operator::is_unitary(double tol) const {
    return max_abs_diff(adjoint() * *this, identity(dim_)) <= tol;
}

bool Operator::is_projector(double tol) const {
    return max_abs_diff(*this * *this, *this) <= tol && is_hermitian(tol);
}

bool Operator::all_finite() const noexcept {
    return std::all_of(entries_.begin(), entries_.end(), finite);
}

Operator Operator::with_role(Role role, const Tolerances &tol) const {
    bool ok = all_finite();
    switch (role) {
    case Role::Projector:
        ok = ok && is_projector(tol.projector);
        break;
    case Role::Unitary:
        ok = ok && is_unitary(tol.unitarity);
        break;
    case Role::Hermitian:
        ok = ok && is_hermitian(tol.hermiticity);
        break;
    case Role::General:
        break;
    }
    if (!ok) {
        throw ArgumentError(std::string("operator does not satisfy the ") + to_string(role) +
                            " invariant");
    }
    Operator out = *this;
    out.role_ = role;
    return out;
}

Operator &Operator::operator+=(const Operator &rhs) {
    require_same_dim(dim_, rhs.dim_, "operator+");
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        entries_[i] += rhs.entries_[i];
    }
    role_ = Role::General;
    return *this;
}

Operator &Operator::operator-=(const Operator &rhs) {
    require_same_dim(dim_, rhs.dim_, "operator-");
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        entries_[i] -= rhs.entries_[i];
    }
    role_ = Role::General;
    return *this;
}

Operator &Operator::operator*=(Complex s) {
    for (auto &e : entries_) {
        e *= s;
    }
    role_ = Role::General;
    return *this;
}

Operator operator+(Operator lhs, const Operator &rhs) { return lhs += rhs; }
Operator operator-(Operator lhs, const Operator &rhs) { return lhs -= rhs; }
Operator operator*(Complex s, Operator op) { return op *= s; }

Operator operator*(const Operator &a, const Operator &b) {
    require_same_dim(a.dim(), b.dim(), "operator*");
    const std::size_t n = a.dim();
    Operator out(n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t k = 0; k < n; ++k) {
            const Complex ark = a(r, k);
            if (ark == Complex{}) {
                continue;
            }
            for (std::size_t c = 0; c < n; ++c) {
                out(r, c) += ark * b(k, c);
            }
        }
    }
    return out;
}

StateVector operator*(const Operator &a, const StateVector &v) { return a.apply(v); }

double max_abs_diff(const Operator &a, const Operator &b) {
    require_same_dim(a.dim(), b.dim(), "max_abs_diff");
    double m = 0.0;
    const auto ea = a.entries();
    const auto eb = b.entries();
    for (std::size_t i = 0; i < ea.size(); ++i) {
        m = std::max(m, std::abs(ea[i] - eb[i]));
    }
    return m;
}

// ---------------------------------------------------------------------------
// Products and index maps

StateVector tensor_product(const StateVector &a, const StateVector &b, std::size_t max_dim) {
    const std::size_t d = checked_product(a.dim(), b.dim(), max_dim);
    std::vector<Complex> amps(d);
    std::vector<std::string> labels(d);
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < b.dim(); ++j) {
            amps[i * b.dim() + j] = a[i] * b[j];
            labels[i * b.dim() + j] = a.labels()[i] + "⊗" + b.labels()[j];
        }
    }
    return StateVector(std::move(amps), std::move(labels));
}

Operator tensor_product(const Operator &a, const Operator &b, std::size_t max_dim) {
    const std::size_t d = checked_product(a.dim(), b.dim(), max_dim);
    const Role role = a.role() == b.role() ? a.role() : Role::General;
    Operator out(d, role);
    const std::size_t db = b.dim();
    for (std::size_t ar = 0; ar < a.dim(); ++ar) {
        for (std::size_t ac = 0; ac < a.dim(); ++ac) {
            const Complex x = a(ar, ac);
            if (x == Complex{}) {
                continue;
            }
            for (std::size_t br = 0; br < db; ++br) {
                for (std::size_t bc = 0; bc < db; ++bc) {
                    out(ar * db + br, ac * db + bc) = x * b(br, bc);
                }
            }
        }
    }
    return out;
}

std::size_t kappa_index(std::size_t i, std::size_t j, std::size_t d1, std::size_t d2) {
    if (i < 1 || i > d1 || j < 1 || j > d2) {
        std::ostringstream os;
        os << "kappa_index: (" << i << "," << j << ") outside 1.." << d1 << " x 1.." << d2;
        throw ArgumentError(os.str());
    }
    return d2 * (i - 1) + j;
}

std::pair<std::size_t, std::size_t> kappa_split(std::size_t k, std::size_t d1, std::size_t d2) {
    if (k < 1 || k > d1 * d2) {
        throw ArgumentError("kappa_split: flat index " + std::to_string(k) + " out of range");
    }
    return {(k - 1) / d2 + 1, (k - 1) % d2 + 1};
}

Operator basis_outer(std::size_t i, std::size_t u, std::size_t dim) {
    if (i < 1 || i > dim || u < 1 || u > dim) {
        throw ArgumentError("basis_outer: index out of range 1.." + std::to_string(dim));
    }
    Operator out(dim);
    out(i - 1, u - 1) = 1.0;
    return out;
}

Operator restrict_to(const Operator &op, std::span<const std::size_t> basis) {
    Operator out(basis.size());
    for (std::size_t p = 0; p < basis.size(); ++p) {
        for (std::size_t q = 0; q < basis.size(); ++q) {
            if (basis[p] < 1 || basis[p] > op.dim() || basis[q] < 1 || basis[q] > op.dim()) {
                throw ArgumentError("restrict_to: coordinate out of range");
            }
            out(p, q) = op(basis[p] - 1, basis[q] - 1);
        }
    }
    return out;
}

} // namespace qliar::linalg
