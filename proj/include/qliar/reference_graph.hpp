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
 * Sentence systems: a tiny DSL of self-referential sentences, the classical
 * reading map on (sentence, value) pairs, and the compiler that turns a
 * single reference cycle into a Hilbert-space model.
 *
 * Source format, one sentence per line:
 *
 *     # comment
 *     (1) sentence (2) is false
 *     (2) sentence (1) is true
 */

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qliar/linalg.hpp"
#include "qliar/truth_frame.hpp"

namespace qliar::graph {

using linalg::Operator;
using linalg::StateVector;

struct Reference {
    std::size_t target = 0;
    /// Claimed value of the target.
    bool polarity = true;
};

struct SentenceSystem {
    std::string name;
    std::string source;
    /// references[k-1] is what sentence k claims.
    std::vector<Reference> references;

    [[nodiscard]] std::size_t size() const noexcept { return references.size(); }
    [[nodiscard]] const Reference &reference(std::size_t sentence) const { return references.at(sentence - 1); }
    /// Number of sentences that claim their target is false.
    [[nodiscard]] std::size_t false_edges() const noexcept;
};

/// Throws ParseError.
SentenceSystem parse_system(std::string_view source, std::string name = "system");

struct PointedAssignment {
    std::size_t focus = 1;
    bool value = true;

    friend bool operator==(const PointedAssignment &, const PointedAssignment &) = default;
};

/// Hypothesis propagation: focus k claims (j, q); if k holds value v the
/// next pair is (j, q) when v is true and (j, ¬q) otherwise.
PointedAssignment reading_step(const SentenceSystem &s, PointedAssignment p);

enum class OrbitKind { Paradoxical, Consistent };

const char *to_string(OrbitKind kind) noexcept;

struct ReadingOrbit {
    std::vector<PointedAssignment> states;
    OrbitKind kind = OrbitKind::Consistent;

    [[nodiscard]] std::size_t length() const noexcept { return states.size(); }
};

/// Throws TopologyError unless the references form a single cycle through
/// every sentence.
void check_single_cycle(const SentenceSystem &s);

/// Orbits of reading_step over all 2n pairs. The first orbit starts at
/// (1, true); further orbits start at the first unvisited pair in the order
/// (1,T), (1,F), (2,T), ...
std::vector<ReadingOrbit> classify(const SentenceSystem &s);

/// Compiled model over C^4 per sentence.
///
/// Structured data is kept (the step permutation and the truth frame);
/// dense operators are produced on request and are bounded by
/// kDefaultMaxDenseOperatorDim.
class LiarModel {
  public:
    [[nodiscard]] const SentenceSystem &system() const noexcept { return system_; }
    [[nodiscard]] const core::TruthFrame &frame() const noexcept { return frame_; }
    [[nodiscard]] std::size_t sentences() const noexcept { return system_.size(); }
    [[nodiscard]] std::size_t dim() const noexcept { return frame_.dim(); }

    [[nodiscard]] const std::vector<ReadingOrbit> &orbits() const noexcept { return orbits_; }
    [[nodiscard]] bool paradoxical() const noexcept { return paradox_orbit_.has_value(); }
    [[nodiscard]] OrbitKind kind() const noexcept {
        return paradoxical() ? OrbitKind::Paradoxical : OrbitKind::Consistent;
    }

    /// 1-based flat indices of each orbit's states, in orbit order.
    [[nodiscard]] const std::vector<std::vector<std::size_t>> &orbit_flat_states() const noexcept {
        return orbit_flat_;
    }
    /// Flat indices of the paradoxical orbit; empty for consistent systems.
    [[nodiscard]] const std::vector<std::size_t> &cycle_states() const noexcept { return cycle_states_; }

    /// Uniform superposition over the cycle states; unset for consistent systems.
    [[nodiscard]] const std::optional<StateVector> &psi0() const noexcept { return psi0_; }

    /// Uniform superposition over the flattened states of orbit `index`.
    /// For consistent systems every such state is stationary.
    [[nodiscard]] StateVector orbit_state(std::size_t index) const;

    /// psi0 when set, otherwise orbit_state(orbit).
    [[nodiscard]] StateVector initial_state(std::size_t orbit = 0) const;

    [[nodiscard]] const linalg::PermutationMap &step_map() const noexcept { return step_; }
    [[nodiscard]] const linalg::Hamiltonian &hamiltonian() const noexcept { return hamiltonian_; }

    [[nodiscard]] Operator u_step() const;
    [[nodiscard]] Operator projector(std::size_t sentence, bool value) const;
    [[nodiscard]] std::map<std::pair<std::size_t, bool>, Operator> projectors() const;
    [[nodiscard]] Operator evolution(double t) const;

    /// {name, n, dim, kind, cycle_length, cycle, orbits: [{kind, length, states}]}
    [[nodiscard]] nlohmann::json summary() const;

  private:
    friend LiarModel compile(const SentenceSystem &s, std::size_t max_dim);

    explicit LiarModel(core::TruthFrame frame) : frame_(std::move(frame)) {}

    SentenceSystem system_;
    core::TruthFrame frame_;
    std::vector<ReadingOrbit> orbits_;
    std::vector<std::vector<std::size_t>> orbit_flat_;
    std::optional<std::size_t> paradox_orbit_;
    std::vector<std::size_t> cycle_states_;
    std::optional<StateVector> psi0_;
    linalg::PermutationMap step_;
    linalg::Hamiltonian hamiltonian_;
};

/// Throws TopologyError (via classify) and CapacityError when 4^n > max_dim.
LiarModel compile(const SentenceSystem &s, std::size_t max_dim = linalg::kDefaultMaxDim);

/// Flat index of one orbit state: the focus sits in its measured slot, every
/// other sentence in the latent slot of its next value along the orbit.
std::size_t flatten_orbit_state(const core::TruthFrame &frame, const ReadingOrbit &orbit, std::size_t position);

} // namespace qliar::graph
