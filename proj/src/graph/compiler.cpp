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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qliar/double_liar.hpp"
#include "qliar/reference_graph.hpp"

namespace qliar::graph {

using core::SentenceBasis;
using core::TruthFrame;
using core::TruthValue;

PointedAssignment reading_step(const SentenceSystem &s, PointedAssignment p) {
    const Reference &r = s.reference(p.focus);
    return {r.target, p.value ? r.polarity : !r.polarity};
}

const char *to_string(OrbitKind kind) noexcept {
    return kind == OrbitKind::Paradoxical ? "paradoxical" : "consistent";
}

void check_single_cycle(const SentenceSystem &s) {
    const std::size_t n = s.size();
    if (n == 0) {
        throw TopologyError("empty system: no sentences to read");
    }
    std::vector<std::size_t> referrer(n + 1, 0);
    for (std::size_t k = 1; k <= n; ++k) {
        const std::size_t j = s.reference(k).target;
        if (j < 1 || j > n) {
            throw TopologyError("sentence " + std::to_string(k) + " refers to missing sentence " + std::to_string(j));
        }
        if (referrer[j] != 0) {
            throw TopologyError("sentence " + std::to_string(j) + " is referenced by both sentence " +
                                std::to_string(referrer[j]) + " and sentence " + std::to_string(k) +
                                "; only a single reference cycle is supported");
        }
        referrer[j] = k;
    }
    // The map is now a permutation; walk the cycle through sentence 1.
    std::size_t length = 0;
    std::size_t k = 1;
    do {
        k = s.reference(k).target;
        ++length;
    } while (k != 1);
    if (length != n) {
        std::string unreached;
        std::vector<bool> seen(n + 1, false);
        k = 1;
        do {
            seen[k] = true;
            k = s.reference(k).target;
        } while (k != 1);
        for (std::size_t j = 1; j <= n; ++j) {
            if (!seen[j]) {
                unreached += (unreached.empty() ? "" : ", ") + std::to_string(j);
            }
        }
        throw TopologyError("reference graph splits into several cycles: the cycle through sentence 1 has length " +
                            std::to_string(length) + " of " + std::to_string(n) +
                            "; sentences not on it: " + unreached);
    }
}

std::vector<ReadingOrbit> classify(const SentenceSystem &s) {
    check_single_cycle(s);
    const std::size_t n = s.size();
    // Pair (k, v) at 2(k-1) + (v ? 0 : 1).
    auto slot = [](PointedAssignment p) { return 2 * (p.focus - 1) + (p.value ? 0 : 1); };
    std::vector<bool> visited(2 * n, false);

    std::vector<ReadingOrbit> orbits;
    for (std::size_t seed = 0; seed < 2 * n; ++seed) {
        if (visited[seed]) {
            continue;
        }
        const PointedAssignment start{seed / 2 + 1, seed % 2 == 0};
        ReadingOrbit orbit;
        PointedAssignment p = start;
        do {
            visited[slot(p)] = true;
            orbit.states.push_back(p);
            p = reading_step(s, p);
        } while (!(p == start));

        std::vector<int> seen(n + 1, 0);
        for (const auto &q : orbit.states) {
            seen[q.focus] |= q.value ? 1 : 2;
        }
        const bool both = std::any_of(seen.begin(), seen.end(), [](int m) { return m == 3; });
        orbit.kind = both ? OrbitKind::Paradoxical : OrbitKind::Consistent;
        orbits.push_back(std::move(orbit));
    }
    return orbits;
}

std::size_t flatten_orbit_state(const TruthFrame &frame, const ReadingOrbit &orbit, std::size_t position) {
    const std::size_t n = frame.sentences();
    const std::size_t len = orbit.length();
    std::vector<std::size_t> slots(n, 0);
    const PointedAssignment here = orbit.states.at(position);
    slots[here.focus - 1] = SentenceBasis::measured_slot(here.value);
    for (std::size_t step = 1; step < len; ++step) {
        const PointedAssignment next = orbit.states[(position + step) % len];
        if (slots[next.focus - 1] == 0) {
            slots[next.focus - 1] = SentenceBasis::latent_slot(next.value);
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (slots[j] == 0) {
            throw TopologyError("sentence " + std::to_string(j + 1) + " is never read along the orbit");
        }
    }
    return frame.flat_index(slots);
}

LiarModel compile(const SentenceSystem &s, std::size_t max_dim) {
    std::vector<ReadingOrbit> orbits = classify(s);
    LiarModel m(TruthFrame::liar(s.size(), max_dim));
    m.system_ = s;
    m.orbits_ = std::move(orbits);

    for (std::size_t o = 0; o < m.orbits_.size(); ++o) {
        std::vector<std::size_t> flat;
        for (std::size_t p = 0; p < m.orbits_[o].length(); ++p) {
            flat.push_back(flatten_orbit_state(m.frame_, m.orbits_[o], p));
        }
        m.orbit_flat_.push_back(std::move(flat));
        if (m.orbits_[o].kind == OrbitKind::Paradoxical && !m.paradox_orbit_) {
            m.paradox_orbit_ = o;
        }
    }

    m.step_.resize(m.dim());
    std::iota(m.step_.begin(), m.step_.end(), std::size_t{0});
    if (m.paradox_orbit_) {
        m.cycle_states_ = m.orbit_flat_[*m.paradox_orbit_];
        const std::size_t len = m.cycle_states_.size();
        for (std::size_t k = 0; k < len; ++k) {
            m.step_[m.cycle_states_[k] - 1] = m.cycle_states_[(k + 1) % len] - 1;
        }
        std::vector<linalg::Complex> amps(m.dim());
        const double a = 1.0 / std::sqrt(static_cast<double>(len));
        for (std::size_t idx : m.cycle_states_) {
            amps[idx - 1] = a;
        }
        m.psi0_ = StateVector(std::move(amps), m.frame_.basis_labels());
    }
    m.hamiltonian_ = linalg::principal_log_hamiltonian(m.step_, core::kGeneratorScale);
    return m;
}

StateVector LiarModel::orbit_state(std::size_t index) const {
    if (index >= orbit_flat_.size()) {
        throw ArgumentError("orbit index " + std::to_string(index) + " out of range; system has " +
                            std::to_string(orbit_flat_.size()) + " orbits");
    }
    const auto &flat = orbit_flat_[index];
    std::vector<linalg::Complex> amps(dim());
    const double a = 1.0 / std::sqrt(static_cast<double>(flat.size()));
    for (std::size_t idx : flat) {
        amps[idx - 1] = a;
    }
    return StateVector(std::move(amps), frame_.basis_labels());
}

StateVector LiarModel::initial_state(std::size_t orbit) const {
    if (psi0_) {
        return *psi0_;
    }
    return orbit_state(orbit);
}

Operator LiarModel::u_step() const {
    if (dim() > linalg::kDefaultMaxDenseOperatorDim) {
        throw CapacityError("dense step operator of dimension " + std::to_string(dim()) + " exceeds " +
                            std::to_string(linalg::kDefaultMaxDenseOperatorDim));
    }
    return linalg::permutation_operator(step_);
}

Operator LiarModel::projector(std::size_t sentence, bool value) const {
    return frame_.projector(sentence, value ? TruthValue::True : TruthValue::False);
}

std::map<std::pair<std::size_t, bool>, Operator> LiarModel::projectors() const {
    std::map<std::pair<std::size_t, bool>, Operator> out;
    for (std::size_t k = 1; k <= sentences(); ++k) {
        for (bool v : {true, false}) {
            out[{k, v}] = projector(k, v).with_role(linalg::Role::Projector);
        }
    }
    return out;
}

Operator LiarModel::evolution(double t) const { return linalg::evolution_matrix(hamiltonian_, t); }

nlohmann::json LiarModel::summary() const {
    nlohmann::json orbits = nlohmann::json::array();
    for (std::size_t o = 0; o < orbits_.size(); ++o) {
        nlohmann::json states = nlohmann::json::array();
        for (const auto &p : orbits_[o].states) {
            states.push_back({{"sentence", p.focus}, {"value", p.value}});
        }
        orbits.push_back({{"kind", to_string(orbits_[o].kind)},
                          {"length", orbits_[o].length()},
                          {"states", std::move(states)},
                          {"flat_states", orbit_flat_[o]}});
    }
    return {{"name", system_.name},
            {"n", sentences()},
            {"dim", dim()},
            {"kind", to_string(kind())},
            {"cycle_length", cycle_states_.size()},
            {"cycle", cycle_states_},
            {"orbits", std::move(orbits)}};
}

} // namespace qliar::graph
