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
#include <string>
#include <vector>

#include "qliar/linalg.hpp"

namespace qliar::core {

using linalg::Complex;
using linalg::Operator;
using linalg::StateVector;

/// Outcome classes of reading one sentence. Latent covers every local slot
/// that is neither measured-true nor measured-false.
enum class TruthValue { True, False, Latent };

const char *to_string(TruthValue v) noexcept;

/// Four local slots per sentence (1-based):
///   1 latent-true   the value this sentence acquires when next read is true
///   2 latent-false  ... is false
///   3 measured-true
///   4 measured-false
struct SentenceBasis {
    static constexpr std::size_t kDim = 4;
    static constexpr std::size_t kLatentTrue = 1;
    static constexpr std::size_t kLatentFalse = 2;
    static constexpr std::size_t kMeasuredTrue = 3;
    static constexpr std::size_t kMeasuredFalse = 4;

    static constexpr std::array<const char *, 4> kLabels{"latent_true", "latent_false", "true", "false"};

    static std::size_t latent_slot(bool value) noexcept { return value ? kLatentTrue : kLatentFalse; }
    static std::size_t measured_slot(bool value) noexcept {
        return value ? kMeasuredTrue : kMeasuredFalse;
    }

    /// Local 4x4 projector onto the measured slot of `value`.
    static Operator truth_projector(bool value);
    /// Local 4x4 projector onto slots 1-2.
    static Operator latent_projector();
};

/// Geometry of an n-sentence product space where every sentence has the
/// same local dimension and fixed true/false slots. Sentence 1 is the most
/// significant tensor factor, so flat indices follow κ(i,j) = d(i-1)+j.
class TruthFrame {
  public:
    /// C^2 per sentence: slot 1 true, slot 2 false, no latent slots.
    static TruthFrame qubits(std::size_t sentences);

    /// C^4 per sentence laid out as SentenceBasis.
    static TruthFrame liar(std::size_t sentences, std::size_t max_dim = linalg::kDefaultMaxDim);

    [[nodiscard]] std::size_t sentences() const noexcept { return sentences_; }
    [[nodiscard]] std::size_t local_dim() const noexcept { return local_dim_; }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }

    /// 1-based local slot of `sentence` (1-based) in the 0-based flat index.
    [[nodiscard]] std::size_t slot_of(std::size_t flat, std::size_t sentence) const;
    [[nodiscard]] TruthValue value_of_slot(std::size_t slot) const noexcept;

    /// 1-based flat index of a product basis vector given each sentence's slot.
    [[nodiscard]] std::size_t flat_index(const std::vector<std::size_t> &slots) const;

    /// P_{sentence,value}·state (not normalized).
    [[nodiscard]] StateVector project(const StateVector &state, std::size_t sentence, TruthValue value) const;

    /// ‖P_{sentence,value}·state‖²
    [[nodiscard]] double weight(const StateVector &state, std::size_t sentence, TruthValue value) const;

    /// Dense P_{sentence,value}, built as a tensor product of local factors.
    [[nodiscard]] Operator projector(std::size_t sentence, TruthValue value,
                                     std::size_t max_dim = linalg::kDefaultMaxDenseOperatorDim) const;

    [[nodiscard]] std::vector<std::string> basis_labels() const;

  private:
    TruthFrame(std::size_t sentences, std::size_t local_dim, std::size_t true_slot, std::size_t false_slot,
               std::vector<std::string> slot_labels, std::size_t max_dim);

    void check_sentence(std::size_t sentence) const;

    std::size_t sentences_;
    std::size_t local_dim_;
    std::size_t true_slot_;
    std::size_t false_slot_;
    std::size_t dim_;
    std::vector<std::size_t> strides_;
    std::vector<std::string> slot_labels_;
};

} // namespace qliar::core
