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

#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "diffprog/param_store.hpp"
#include "diffprog/sparse.hpp"
#include "diffprog/tensor.hpp"

namespace diffprog {

/// Position of a node on its tape.
struct NodeId {
  std::size_t value = 0;
  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

enum class OpKind {
  kInput,
  kParameter,
  kMatMul,
  kMatMulBT,
  kTranspose,
  kSpMM,
  kAdd,
  kSub,
  kMul,
  kAffine,
  kScalarMul,
  kSigmoid,
  kTanh,
  kRelu,
  kExp,
  kLog,
  kSum,
  kSoftmaxRows,
  kAttention,
  kCrossEntropy,
  kDropout,
  kStackRows,
  kSelectRow,
};

std::string_view kind_name(OpKind kind) noexcept;
/// Inverse of kind_name; std::nullopt for an unknown name.
std::optional<OpKind> kind_from_name(std::string_view name) noexcept;

/// Allowed (query, key) pairs of a masked attention, stored row-compressed.
class AttentionPattern {
 public:
  /// Throws std::invalid_argument naming the first row with no allowed entry.
  static AttentionPattern from_mask(const BoolMatrix& mask);

  std::size_t rows() const noexcept { return row_offsets_.size() - 1; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return keys_.size(); }
  std::span<const std::size_t> keys(std::size_t row) const {
    return std::span<const std::size_t>(keys_).subspan(
        row_offsets_[row], row_offsets_[row + 1] - row_offsets_[row]);
  }
  std::size_t offset(std::size_t row) const { return row_offsets_[row]; }

 private:
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_offsets_{0};
  std::vector<std::size_t> keys_;
};

namespace attrs {

struct Param {
  ParamStore* store = nullptr;
  std::string name;
};
/// y = alpha * x + beta
struct Affine {
  double alpha = 1.0;
  double beta = 0.0;
};
struct Axis {
  int axis = -1;
};
struct Row {
  std::size_t index = 0;
};
struct Sparse {
  std::shared_ptr<const SparseMatrix> matrix;
};
struct Softmax {
  std::shared_ptr<const BoolMatrix> mask;
};
struct Attention {
  std::shared_ptr<const AttentionPattern> pattern;
  double scale = 1.0;
};
struct CrossEntropy {
  std::shared_ptr<const std::vector<std::size_t>> labels;
  std::shared_ptr<const std::vector<std::size_t>> rows;
};
/// Per-entry multiplier: 0 for dropped entries, 1/(1-p) for survivors.
struct Dropout {
  std::shared_ptr<const Tensor> keep;
};

}  // namespace attrs

using OpAttrs = std::variant<std::monostate, attrs::Param, attrs::Affine, attrs::Axis,
                             attrs::Row, attrs::Sparse, attrs::Softmax,
                             attrs::Attention, attrs::CrossEntropy, attrs::Dropout>;

struct TapeNode {
  NodeId id;
  OpKind kind = OpKind::kInput;
  std::vector<NodeId> inputs;
  OpAttrs attrs;
  Tensor value;
  /// Forward by-products needed by the backward rule (softmax weights, ...).
  Tensor saved;
  std::optional<Tensor> adjoint;
};

/// Define-by-run record of one forward execution. Every recorded node's value
/// is computed immediately from its inputs, and every edge points from a
/// lower id to a higher id, so the node list is already topologically sorted.
///
/// A Tape is single-owner; it is not safe to record from several threads.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;
  Tape(Tape&&) noexcept = default;
  Tape& operator=(Tape&&) noexcept = default;

  NodeId input(Tensor value);
  /// Records the current value of a stored parameter as a leaf. After
  /// backward() its adjoint is added to the store's gradient.
  NodeId parameter(ParamStore& store, const std::string& name);

  /// Appends one node and computes its value. Throws std::invalid_argument
  /// for unknown ids or attrs that do not fit the kind, and propagates the
  /// kernel's ShapeError for invalid operand shapes.
  NodeId record(OpKind kind, std::vector<NodeId> inputs, OpAttrs attrs = {});

  /// Reverse sweep from a one-element output node. Clears previous adjoints,
  /// seeds the output with 1 and visits nodes in descending id order.
  void backward(NodeId output);

  std::size_t size() const noexcept { return nodes_.size(); }
  std::size_t num_inputs() const noexcept { return num_inputs_; }
  const std::vector<TapeNode>& nodes() const noexcept { return nodes_; }
  /// References returned by node() and value() are invalidated by recording.
  const TapeNode& node(NodeId id) const;
  const Tensor& value(NodeId id) const { return node(id).value; }
  /// Adjoint from the last backward(); zeros if the node was not reached.
  Tensor adjoint(NodeId id) const;

  /// One line per node: `id kind [input ids] shape`.
  std::string dump() const;

 private:
  void check_id(NodeId id) const;
  Tensor forward(OpKind kind, const std::vector<NodeId>& inputs, const OpAttrs& attrs,
                 Tensor& saved) const;
  void propagate(const TapeNode& node);
  void accumulate(NodeId id, const Tensor& delta);

  std::vector<TapeNode> nodes_;
  std::size_t num_inputs_ = 0;
};

}  // namespace diffprog
