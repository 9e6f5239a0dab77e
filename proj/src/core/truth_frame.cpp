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

#include "qliar/truth_frame.hpp"

namespace qliar::core {

const char *to_string(TruthValue v) noexcept {
    switch (v) {
    case TruthValue::True:
        return "true";
    case TruthValue::False:
        return "false";
    case TruthValue::Latent:
        break;
    }
    return "latent";
}

Operator SentenceBasis::truth_projector(bool value) {
    return linalg::basis_outer(measured_slot(value), measured_slot(value), kDim)
        .with_role(linalg::Role::Projector);
}

Operator SentenceBasis::latent_projector() {
    return (linalg::basis_outer(kLatentTrue, kLatentTrue, kDim) +
            linalg::basis_outer(kLatentFalse, kLatentFalse, kDim))
        .with_role(linalg::Role::Projector);
}

TruthFrame::TruthFrame(std::size_t sentences, std::size_t local_dim, std::size_t true_slot,
                       std::size_t false_slot, std::vector<std::string> slot_labels, std::size_t max_dim)
    : sentences_(sentences), local_dim_(local_dim), true_slot_(true_slot), false_slot_(false_slot),
      dim_(1), slot_labels_(std::move(slot_labels)) {
    if (sentences == 0) {
        throw ArgumentError("TruthFrame: at least one sentence required");
    }
    for (std::size_t k = 0; k < sentences; ++k) {
        if (dim_ > max_dim / local_dim) {
            throw CapacityError("TruthFrame: " + std::to_string(sentences) + " sentences of dimension " +
                                std::to_string(local_dim) + " exceed maximum dimension " +
                                std::to_string(max_dim));
        }
        dim_ *= local_dim;
    }
    strides_.resize(sentences);
    std::size_t stride = 1;
    for (std::size_t k = sentences; k-- > 0;) {
        strides_[k] = stride;
        stride *= local_dim;
    }
}

TruthFrame TruthFrame::qubits(std::size_t sentences) {
    return TruthFrame(sentences, 2, 1, 2, {"true", "false"}, linalg::kDefaultMaxDim);
}

TruthFrame TruthFrame::liar(std::size_t sentences, std::size_t max_dim) {
    std::vector<std::string> labels(SentenceBasis::kLabels.begin(), SentenceBasis::kLabels.end());
    return TruthFrame(sentences, SentenceBasis::kDim, SentenceBasis::kMeasuredTrue,
                      SentenceBasis::kMeasuredFalse, std::move(labels), max_dim);
}

void TruthFrame::check_sentence(std::size_t sentence) const {
    if (sentence < 1 || sentence > sentences_) {
        throw ArgumentError("sentence " + std::to_string(sentence) + " out of range 1.." +
                            std::to_string(sentences_));
    }
}

std::size_t TruthFrame::slot_of(std::size_t flat, std::size_t sentence) const {
    check_sentence(sentence);
    return (flat / strides_[sentence - 1]) % local_dim_ + 1;
}

TruthValue TruthFrame::value_of_slot(std::size_t slot) const noexcept {
    if (slot == true_slot_) {
        return TruthValue::True;
    }
    if (slot == false_slot_) {
        return TruthValue::False;
    }
    return TruthValue::Latent;
}

std::size_t TruthFrame::flat_index(const std::vector<std::size_t> &slots) const {
    if (slots.size() != sentences_) {
        throw ArgumentError("flat_index: one slot per sentence required");
    }
    std::size_t flat = 0;
    for (std::size_t k = 0; k < sentences_; ++k) {
        if (slots[k] < 1 || slots[k] > local_dim_) {
            throw ArgumentError("flat_index: slot out of range");
        }
        flat += (slots[k] - 1) * strides_[k];
    }
    return flat + 1;
}

StateVector TruthFrame::project(const StateVector &state, std::size_t sentence, TruthValue value) const {
    check_sentence(sentence);
    if (state.dim() != dim_) {
        throw ArgumentError("project: state dimension " + std::to_string(state.dim()) +
                            " does not match frame dimension " + std::to_string(dim_));
    }
    StateVector out = state;
    for (std::size_t i = 0; i < dim_; ++i) {
        if (value_of_slot(slot_of(i, sentence)) != value) {
            out[i] = 0.0;
        }
    }
    return out;
}

double TruthFrame::weight(const StateVector &state, std::size_t sentence, TruthValue value) const {
    return project(state, sentence, value).norm_squared();
}

Operator TruthFrame::projector(std::size_t sentence, TruthValue value, std::size_t max_dim) const {
    check_sentence(sentence);
    if (dim_ > max_dim) {
        throw CapacityError("projector: dense dimension " + std::to_string(dim_) + " exceeds maximum " +
                            std::to_string(max_dim));
    }
    Operator local(local_dim_);
    for (std::size_t s = 1; s <= local_dim_; ++s) {
        if (value_of_slot(s) == value) {
            local(s - 1, s - 1) = 1.0;
        }
    }
    Operator out = sentence == 1 ? local : Operator::identity(local_dim_);
    for (std::size_t k = 2; k <= sentences_; ++k) {
        out =linalg::tensor_product(out, k == sentence ? local : Operator::identity(local_dim_), max_dim);
    }
    return out.with_role(linalg::Role::Projector);
}

std::vector<std::string> TruthFrame::basis_labels() const {
    std::vector<std::string> labels(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        std::string label;
        for (std::size_t k = 1; k <= sentences_; ++k) {
            if (k > 1) {
                label += "⊗";
            }
            label += slot_labels_[slot_of(i, k) - 1];
        }
        labels[i] = std::move(label);
    }
    return labels;
}

} // namespace qliar::core
