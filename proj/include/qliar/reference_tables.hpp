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
 * Reference copies of the printed double-liar matrices, exactly as printed
 * (including known misprints), and a fixture report comparing them with the
 * matrices the engine derives.
 *
 * All 4x4 tables are on the ascending subspace coordinates (e3, e8, e10, e13).
 */

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "qliar/linalg.hpp"

namespace qliar::core {

namespace reference {

using linalg::Complex;
using linalg::Operator;

/// One printed U_sub(t) entry: (c0 + c₋·e^{-it} + c₊·e^{it} + c₂·e^{2it}) / 4.
struct ClosedFormEntry {
    Complex c0;
    Complex c_minus;
    Complex c_plus;
    Complex c_two;

    [[nodiscard]] Complex at(double t) const;
    /// d/dt at t.
    [[nodiscard]] Complex derivative(double t) const;
};

Operator printed_u_d();

/// Printed H_sub; its lower-right 2x2 block is misprinted (+1/2 instead of -1/2).
Operator printed_h_sub();

using ClosedFormGrid = std::array<std::array<ClosedFormEntry, 4>, 4>;

const ClosedFormGrid &printed_u_sub_grid();

Operator printed_u_sub(double t);

/// The printed worked example for flat entry (3,10), including its misprint:
/// (1 - i·e^{-it} + i·e^{-it} - i·e^{2it}) / 4.
Complex printed_example_term(double t);

/// i·dU_sub/dt at 0 from the printed grid by central differences.
Operator finite_difference_generator(double step);

} // namespace reference

enum class Verdict { Match, DocumentedErratum, Unexpected };

const char *to_string(Verdict v) noexcept;

struct Fixture {
    std::string name;
    nlohmann::json derived;
    nlohmann::json printed;
    double deviation = 0.0;
    Verdict verdict = Verdict::Unexpected;
    std::string note;
};

struct FixtureReport {
    std::vector<Fixture> fixtures;
    double tolerance = 0.0;

    /// True when no fixture is Unexpected.
    [[nodiscard]] bool ok() const noexcept;
    [[nodiscard]] const Fixture *find(const std::string &name) const noexcept;

    [[nodiscard]] std::string to_text() const;
    /// Array of {name, derived, printed, deviation, verdict, note}.
    [[nodiscard]] nlohmann::json to_json() const;
};

/// Step of the central-difference oracle and the agreement it must reach.
inline constexpr double kFiniteDifferenceStep = 1e-6;
inline constexpr double kFiniteDifferenceAgreement = 1e-4;

/// Builds the double-liar model and compares it with the printed tables.
/// `tol.fixture` bounds every expected match.
FixtureReport verify_reference_tables(const linalg::Tolerances &tol = linalg::kDefaultTolerances);

nlohmann::json to_json(const linalg::Operator &op);
nlohmann::json to_json(const linalg::Complex &z);

} // namespace qliar::core
