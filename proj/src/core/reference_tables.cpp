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

#include "qliar/reference_tables.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "qliar/double_liar.hpp"

namespace qliar::core {

namespace reference {

namespace {

constexpr Complex I{0.0, 1.0};

// Four coefficient patterns make up the whole printed grid.
constexpr ClosedFormEntry A{1.0, 1.0, 1.0, 1.0};
constexpr ClosedFormEntry B{1.0, -1.0, -1.0, 1.0};
constexpr ClosedFormEntry C{1.0, -I, I, -1.0};
constexpr ClosedFormEntry D{1.0, I, -I, -1.0};

} // namespace

Complex ClosedFormEntry::at(double t) const {
    return (c0 + c_minus * std::exp(-I * t) + c_plus * std::exp(I * t) + c_two * std::exp(2.0 * I * t)) / 4.0;
}

Complex ClosedFormEntry::derivative(double t) const {
    return (-I * c_minus * std::exp(-I * t) + I * c_plus * std::exp(I * t) +
            2.0 * I * c_two * std::exp(2.0 * I * t)) /
           4.0;
}

Operator printed_u_d() {
    return Operator::from_rows({{0, 0, 0, 1}, {0, 0, 1, 0}, {1, 0, 0, 0}, {0, 1, 0, 0}});
}

Operator printed_h_sub() {
    const Complex a = (1.0 - I) / 2.0;
    const Complex b = (1.0 + I) / 2.0;
    return Operator::from_rows({
        {-0.5, -0.5, a, b},
        {-0.5, -0.5, b, a},
        {b, a, 0.5, 0.5},
        {a, b, 0.5, 0.5},
    });
}

const ClosedFormGrid &printed_u_sub_grid() {
    static const ClosedFormGrid grid{{
        {A, B, C, D},
        {B, A, D, C},
        {D, C, A, B},
        {C, D, B, A},
    }};
    return grid;
}

Operator printed_u_sub(double t) {
    Operator u(4);
    const auto &grid = printed_u_sub_grid();
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            u(r, c) = grid[r][c].at(t);
        }
    }
    return u;
}

Complex printed_example_term(double t) {
    return (1.0 - I * std::exp(-I * t) + I * std::exp(-I * t) - I * std::exp(2.0 * I * t)) / 4.0;
}

Operator finite_difference_generator(double step) {
    const Operator plus = printed_u_sub(step);
    const Operator minus = printed_u_sub(-step);
    return (I / (2.0 * step)) * (plus - minus);
}

} // namespace reference

const char *to_string(Verdict v) noexcept {
    switch (v) {
    case Verdict::Match:
        return "match";
    case Verdict::DocumentedErratum:
        return "documented-erratum";
    case Verdict::Unexpected:
        break;
    }
    return "unexpected";
}

nlohmann::json to_json(const linalg::Complex &z) { return nlohmann::json::array({z.real(), z.imag()}); }

nlohmann::json to_json(const linalg::Operator &op) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t r = 0; r < op.dim(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t c = 0; c < op.dim(); ++c) {
            row.push_back(to_json(op(r, c)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

bool FixtureReport::ok() const noexcept {
    return std::none_of(fixtures.begin(), fixtures.end(),
                        [](const Fixture &f) { return f.verdict == Verdict::Unexpected; });
}

const Fixture *FixtureReport::find(const std::string &name) const noexcept {
    for (const auto &f : fixtures) {
        if (f.name == name) {
            return &f;
        }
    }
    return nullptr;
}

std::string FixtureReport::to_text() const {
    std::size_t width = 7;
    for (const auto &f : fixtures) {
        width = std::max(width, f.name.size());
    }
    std::ostringstream os;
    os << std::left << std::setw(static_cast<int>(width) + 2) << "fixture" << std::setw(14) << "deviation"
       << std::setw(20) << "verdict"
       << "note\n";
    for (const auto &f : fixtures) {
        std::ostringstream dev;
        dev << std::setprecision(3) << f.deviation;
        os << std::left << std::setw(static_cast<int>(width) + 2) << f.name << std::setw(14) << dev.str()
           << std::setw(20) << to_string(f.verdict) << f.note << "\n";
    }
    os << (ok() ? "all fixtures accounted for" : "UNEXPECTED DEVIATIONS PRESENT") << " (tolerance "
       << std::setprecision(3) << tolerance << ")\n";
    return os.str();
}

nlohmann::json FixtureReport::to_json() const {
    nlohmann::json out = nlohmann::json::array();
    for (const auto &f : fixtures) {
        out.push_back({{"name", f.name},
                       {"derived", f.derived},
                       {"printed", f.printed},
                       {"deviation", f.deviation},
                       {"verdict", to_string(f.verdict)},
                       {"note", f.note}});
    }
    return out;
}

namespace {

using linalg::Operator;

double block_deviation(const Operator &a, const Operator &b, std::size_t r0, std::size_t c0, std::size_t rows,
                       std::size_t cols, std::size_t *count_over = nullptr, double threshold = 0.0) {
    double dev = 0.0;
    for (std::size_t r = r0; r < r0 + rows; ++r) {
        for (std::size_t c = c0; c < c0 + cols; ++c) {
            const double d = std::abs(a(r, c) - b(r, c));
            dev = std::max(dev, d);
            if (count_over && d > threshold) {
                ++*count_over;
            }
        }
    }
    return dev;
}

nlohmann::json block_json(const Operator &op, std::size_t r0, std::size_t c0, std::size_t rows,
                          std::size_t cols) {
    nlohmann::json out = nlohmann::json::array();
    for (std::size_t r = r0; r < r0 + rows; ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t c = c0; c < c0 + cols; ++c) {
            row.push_back(to_json(op(r, c)));
        }
        out.push_back(std::move(row));
    }
    return out;
}

Verdict match_or_unexpected(double deviation, double tol) {
    return deviation <= tol ? Verdict::Match : Verdict::Unexpected;
}

} // namespace

FixtureReport verify_reference_tables(const linalg::Tolerances &tol) {
    const DoubleLiarModel model = double_liar_model();
    FixtureReport report;
    report.tolerance = tol.fixture;

    {
        Fixture f;
        f.name = "psi0";
        std::vector<Complex> expected(16);
        for (std::size_t k : {10, 8, 13, 3}) {
            expected[k - 1] = 0.5;
        }
        const linalg::StateVector printed(expected);
        f.deviation = linalg::max_abs_diff(model.psi0, printed);
        f.verdict = match_or_unexpected(f.deviation, tol.fixture);
        nlohmann::json d = nlohmann::json::array(), p = nlohmann::json::array();
        for (std::size_t i = 0; i < 16; ++i) {
            d.push_back(to_json(model.psi0[i]));
            p.push_back(to_json(printed[i]));
        }
        f.derived = std::move(d);
        f.printed = std::move(p);
        f.note = "amplitude 1/2 on e10, e8, e13, e3";
        report.fixtures.push_back(std::move(f));
    }

    {
        Fixture f;
        f.name = "U_D";
        const Operator printed = reference::printed_u_d();
        f.deviation = linalg::max_abs_diff(model.u_step_sub, printed);
        const Operator lifted = lift_subspace_operator(printed, model.subspace_basis, 4, 4);
        f.deviation = std::max(f.deviation, linalg::max_abs_diff(model.u_step, lifted));
        // Permutation entries are exact; any deviation at all is unexpected.
        f.verdict = f.deviation == 0.0 ? Verdict::Match : Verdict::Unexpected;
        f.derived = to_json(model.u_step_sub);
        f.printed = to_json(printed);
        f.note = "reading cycle e10->e8->e13->e3";
        report.fixtures.push_back(std::move(f));
    }

    {
        Fixture f;
        f.name = "U_sub(t)";
        const std::array<double, 3> times{0.3, 1.1, 2.9};
        nlohmann::json d = nlohmann::json::array(), p = nlohmann::json::array();
        for (double t : times) {
            const Operator derived = model.evolution_sub(t);
            const Operator printed = reference::printed_u_sub(t);
            f.deviation = std::max(f.deviation, linalg::max_abs_diff(derived, printed));
            d.push_back({{"t", t}, {"matrix", to_json(derived)}});
            p.push_back({{"t", t}, {"matrix", to_json(printed)}});
        }
        f.verdict = match_or_unexpected(f.deviation, tol.fixture);
        f.derived = std::move(d);
        f.printed = std::move(p);
        f.note = "closed form, 16 entries at t = 0.3, 1.1, 2.9";
        report.fixtures.push_back(std::move(f));
    }

    const Operator h_derived = model.hamiltonian_sub();
    const Operator h_printed = reference::printed_h_sub();

    {
        Fixture f;
        f.name = "H_sub rows 1-2";
        f.deviation = block_deviation(h_derived, h_printed, 0, 0, 2, 4);
        f.verdict = match_or_unexpected(f.deviation, tol.fixture);
        f.derived = block_json(h_derived, 0, 0, 2, 4);
        f.printed = block_json(h_printed, 0, 0, 2, 4);
        report.fixtures.push_back(std::move(f));
    }

    {
        Fixture f;
        f.name = "H_sub lower-left block";
        f.deviation = block_deviation(h_derived, h_printed, 2, 0, 2, 2);
        f.verdict = match_or_unexpected(f.deviation, tol.fixture);
        f.derived = block_json(h_derived, 2, 0, 2, 2);
        f.printed = block_json(h_printed, 2, 0, 2, 2);
        report.fixtures.push_back(std::move(f));
    }

    {
        Fixture f;
        f.name = "H_sub lower-right block";
        std::size_t off_entries = 0;
        f.deviation = block_deviation(h_derived, h_printed, 2, 2, 2, 2, &off_entries, 0.5);
        const Operator oracle = reference::finite_difference_generator(kFiniteDifferenceStep);
        const double oracle_gap = block_deviation(h_derived, oracle, 0, 0, 4, 4);
        const bool documented = oracle_gap <= kFiniteDifferenceAgreement && off_entries == 4;
        f.verdict = documented ? Verdict::DocumentedErratum : Verdict::Unexpected;
        f.derived = block_json(h_derived, 2, 2, 2, 2);
        f.printed = block_json(h_printed, 2, 2, 2, 2);
        std::ostringstream note;
        note << "printed +1/2 where i*dU_sub/dt(0) of the printed U_sub(t) gives -1/2 on "
             << off_entries << " entries (oracle gap " << std::setprecision(2) << oracle_gap << ")";
        f.note = note.str();
        report.fixtures.push_back(std::move(f));
    }

    {
        Fixture f;
        f.name = "U(t) term kappa=3 lambda=10";
        const std::array<double, 3> times{0.3, 1.1, 2.9};
        double systematic_gap = 0.0;
        nlohmann::json d = nlohmann::json::array(), p = nlohmann::json::array();
        for (double t : times) {
            const Complex derived = model.evolution(t)(3 - 1, 10 - 1);
            const Complex printed = reference::printed_example_term(t);
            const Complex systematic = reference::printed_u_sub_grid()[0][2].at(t);
            f.deviation = std::max(f.deviation, std::abs(derived - printed));
            systematic_gap = std::max(systematic_gap, std::abs(derived - systematic));
            d.push_back({{"t", t}, {"value", to_json(derived)}});
            p.push_back({{"t", t}, {"value", to_json(printed)}});
        }
        const bool documented = systematic_gap <= tol.fixture && f.deviation > 0.1;
        f.verdict = documented ? Verdict::DocumentedErratum : Verdict::Unexpected;
        f.derived = std::move(d);
        f.printed = std::move(p);
        f.note = "printed term repeats e^{-it} and has a stray i; derived value equals the grid entry "
                 "(1,3) = (1 - i e^{-it} + i e^{it} - e^{2it})/4";
        report.fixtures.push_back(std::move(f));
    }

    return report;
}

} // namespace qliar::core
