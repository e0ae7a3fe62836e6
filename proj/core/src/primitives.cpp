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

#include "diffprog/primitives.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "diffprog/ops.hpp"

namespace diffprog {

namespace {

void expect_shape(const Tape& tape, NodeId id, const Shape& want, const char* what) {
  const Shape& got = tape.value(id).shape();
  if (got != want) {
    throw ShapeError(std::string(what) + " has shape " + to_string(got) +
                     ", expected " + to_string(want));
  }
}

std::size_t dim(const Tape& tape, NodeId id, std::size_t axis, const char* what) {
  const Shape& s = tape.value(id).shape();
  if (axis >= s.size()) {
    throw ShapeError(std::string(what) + " has shape " + to_string(s) +
                     ", missing axis " + std::to_string(axis));
  }
  return s[axis];
}

}  // namespace

std::string_view activation_name(Activation a) noexcept {
  switch (a) {
    case Activation::kNone: return "none";
    case Activation::kSigmoid: return "sigmoid";
    case Activation::kRelu: return "relu";
    case Activation::kTanh: return "tanh";
  }
  return "none";
}

NodeId activate(Tape& tape, NodeId x, Activation activation) {
  switch (activation) {
    case Activation::kNone: return x;
    case Activation::kSigmoid: return ops::sigmoid(tape, x);
    case Activation::kRelu: return ops::relu(tape, x);
    case Activation::kTanh: return ops::tanh(tape, x);
  }
  return x;
}

NodeId dense(Tape& tape, NodeId x, const DenseParams& p, Activation activation) {
  const std::size_t out = dim(tape, p.weight, 0, "dense weight");
  expect_shape(tape, p.bias, {out}, "dense bias");
  const NodeId z = ops::add(tape, ops::matmul_bt(tape, x, p.weight), p.bias);
  return activate(tape, z, activation);
}

NodeId dense(Tape& tape, std::shared_ptr<const SparseMatrix> x, const DenseParams& p,
             Activation activation) {
  const std::size_t out = dim(tape, p.weight, 0, "dense weight");
  expect_shape(tape, p.bias, {out}, "dense bias");
  const NodeId z = ops::add(
      tape, ops::spmm(tape, std::move(x), ops::transpose(tape, p.weight)), p.bias);
  return activate(tape, z, activation);
}

NodeId diff_branch(Tape& tape, NodeId gate, NodeId y, NodeId z) {
  if (tape.value(gate).size() != 1) {
    throw ShapeError("diff_branch gate must be a scalar, got " +
                     to_string(tape.value(gate).shape()));
  }
  if (tape.value(y).shape() != tape.value(z).shape()) {
    throw ShapeError("diff_branch branches differ: " + to_string(tape.value(y).shape()) +
                     " vs " + to_string(tape.value(z).shape()));
  }
  const NodeId taken = ops::scalar_mul(tape, gate, y);
  const NodeId other = ops::scalar_mul(tape, ops::affine(tape, gate, -1.0, 1.0), z);
  return ops::add(tape, taken, other);
}

NodeId self_attention(Tape& tape, NodeId x, std::shared_ptr<const AttentionPattern> scope,
                      const AttentionParams& p) {
  const std::size_t n = dim(tape, x, 0, "attention input");
  const std::size_t d = dim(tape, x, 1, "attention input");
  for (NodeId w : {p.wq, p.wk, p.wv, p.wo}) expect_shape(tape, w, {d, d}, "attention weight");
  for (NodeId b : {p.bq, p.bk, p.bv, p.bo}) expect_shape(tape, b, {d}, "attention bias");
  if (!scope || scope->rows() != n || scope->cols() != n) {
    throw ShapeError("attention scope does not match " + std::to_string(n) + " rows");
  }
  const NodeId q = ops::add(tape, ops::matmul_bt(tape, x, p.wq), p.bq);
  const NodeId k = ops::add(tape, ops::matmul_bt(tape, x, p.wk), p.bk);
  const NodeId v = ops::add(tape, ops::matmul_bt(tape, x, p.wv), p.bv);
  const NodeId mixed = tape.record(
      OpKind::kAttention, {q, k, v},
      attrs::Attention{std::move(scope), 1.0 / std::sqrt(static_cast<double>(d))});
  return ops::add(tape, ops::matmul_bt(tape, mixed, p.wo), p.bo);
}

NodeId self_attention(Tape& tape, NodeId x, const BoolMatrix& scope,
                      const AttentionParams& p) {
  return self_attention(
      tape, x, std::make_shared<const AttentionPattern>(AttentionPattern::from_mask(scope)),
      p);
}

NodeId gcn_layer(Tape& tape, NodeId x, std::shared_ptr<const SparseMatrix> a_hat,
                 const GcnParams& p, Activation activation) {
  const std::size_t out = dim(tape, p.weight, 1, "gcn weight");
  expect_shape(tape, p.bias, {out}, "gcn bias");
  const NodeId h = ops::matmul(tape, x, p.weight);
  const NodeId z = ops::add(tape, ops::spmm(tape, std::move(a_hat), h), p.bias);
  return activate(tape, z, activation);
}

NodeId gcn_layer(Tape& tape, std::shared_ptr<const SparseMatrix> x,
                 std::shared_ptr<const SparseMatrix> a_hat, const GcnParams& p,
                 Activation activation) {
  const std::size_t out = dim(tape, p.weight, 1, "gcn weight");
  expect_shape(tape, p.bias, {out}, "gcn bias");
  const NodeId h = ops::spmm(tape, std::move(x), p.weight);
  const NodeId z = ops::add(tape, ops::spmm(tape, std::move(a_hat), h), p.bias);
  return activate(tape, z, activation);
}

NodeId rnn_cell(Tape& tape, NodeId h_prev, NodeId x_t, const RnnParams& p) {
  const std::size_t h = dim(tape, p.whh, 0, "rnn recurrent weight");
  expect_shape(tape, p.whh, {h, h}, "rnn recurrent weight");
  expect_shape(tape, p.bh, {h}, "rnn bias");
  expect_shape(tape, h_prev, {h}, "rnn state");
  const NodeId input_part = ops::matmul(tape, p.wxh, x_t);
  const NodeId state_part = ops::matmul(tape, p.whh, h_prev);
  return ops::tanh(tape, ops::add(tape, ops::add(tape, input_part, state_part), p.bh));
}

NodeId dropout(Tape& tape, NodeId x, double p_drop, bool training, Rng& rng) {
  if (!(p_drop >= 0.0 && p_drop < 1.0)) {
    throw std::invalid_argument("dropout rate must be in [0, 1), got " +
                                std::to_string(p_drop));
  }
  if (!training || p_drop == 0.0) return x;
  auto keep = std::make_shared<Tensor>(tape.value(x).shape());
  const double survivor = 1.0 / (1.0 - p_drop);
  for (double& k : keep->data()) k = rng.uniform() < p_drop ? 0.0 : survivor;
  return tape.record(OpKind::kDropout, {x},
                     attrs::Dropout{std::shared_ptr<const Tensor>(std::move(keep))});
}

NodeId cross_entropy(Tape& tape, NodeId logits,
                     std::shared_ptr<const std::vector<std::size_t>> labels,
                     std::shared_ptr<const std::vector<std::size_t>> mask) {
  return tape.record(OpKind::kCrossEntropy, {logits},
                     attrs::CrossEntropy{std::move(labels), std::move(mask)});
}

NodeId cross_entropy(Tape& tape, NodeId logits, std::span<const std::size_t> labels,
                     std::span<const std::size_t> mask) {
  return cross_entropy(
      tape, logits,
      std::make_shared<const std::vector<std::size_t>>(labels.begin(), labels.end()),
      std::make_shared<const std::vector<std::size_t>>(mask.begin(), mask.end()));
}

}  // namespace diffprog
