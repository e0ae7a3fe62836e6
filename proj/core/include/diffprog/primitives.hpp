// Copyright 2026 The diffprog Authors. All Rights Reserved.
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

#include <cstddef>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "diffprog/rng.hpp"
#include "diffprog/sparse.hpp"
#include "diffprog/tape.hpp"

namespace diffprog {

enum class Activation { kNone, kSigmoid, kRelu, kTanh };

std::string_view activation_name(Activation a) noexcept;

/// Weight [out,in], bias [out].
struct DenseParams {
  NodeId weight;
  NodeId bias;
};

/// Query/key/value/output projections, all [d,d] with [d] biases.
struct AttentionParams {
  NodeId wq, wk, wv, wo;
  NodeId bq, bk, bv, bo;
};

/// Weight [in,out], bias [out].
struct GcnParams {
  NodeId weight;
  NodeId bias;
};

/// Input weight [h,in], recurrent weight [h,h], bias [h].
struct RnnParams {
  NodeId wxh;
  NodeId whh;
  NodeId bh;
};

NodeId activate(Tape& tape, NodeId x, Activation activation);

/// activation(x · Wᵀ + b) for x of shape [n,in] or [in].
NodeId dense(Tape& tape, NodeId x, const DenseParams& p, Activation activation);
/// Same with a constant sparse input matrix (e.g. node features).
NodeId dense(Tape& tape, std::shared_ptr<const SparseMatrix> x, const DenseParams& p,
             Activation activation);

/// Differentiable branching: gate · y + (1 - gate) · z, gate a single element.
NodeId diff_branch(Tape& tape, NodeId gate, NodeId y, NodeId z);

/// Single-head scaled dot-product self-attention over the rows of X [N,d].
/// Row t attends only to the keys its scope allows; the attended values are
/// passed through the output projection.
NodeId self_attention(Tape& tape, NodeId x, std::shared_ptr<const AttentionPattern> scope,
                      const AttentionParams& p);
/// Throws std::invalid_argument naming the first fully-masked row.
NodeId self_attention(Tape& tape, NodeId x, const BoolMatrix& scope,
                      const AttentionParams& p);

/// Graph convolution: activation(Â · X · W + b).
NodeId gcn_layer(Tape& tape, NodeId x, std::shared_ptr<const SparseMatrix> a_hat,
                 const GcnParams& p, Activation activation);
NodeId gcn_layer(Tape& tape, std::shared_ptr<const SparseMatrix> x,
                 std::shared_ptr<const SparseMatrix> a_hat, const GcnParams& p,
                 Activation activation);

/// h_t = tanh(Wxh · x_t + Whh · h_prev + bh).
NodeId rnn_cell(Tape& tape, NodeId h_prev, NodeId x_t, const RnnParams& p);

/// Inverted dropout. Returns `x` itself when not training or when p_drop is 0.
/// Throws std::invalid_argument unless 0 <= p_drop < 1.
NodeId dropout(Tape& tape, NodeId x, double p_drop, bool training, Rng& rng);

/// Mean over `mask` rows of -log softmax(logits)[label].
NodeId cross_entropy(Tape& tape, NodeId logits,
                     std::shared_ptr<const std::vector<std::size_t>> labels,
                     std::shared_ptr<const std::vector<std::size_t>> mask);
NodeId cross_entropy(Tape& tape, NodeId logits, std::span<const std::size_t> labels,
                     std::span<const std::size_t> mask);

}  // namespace diffprog
