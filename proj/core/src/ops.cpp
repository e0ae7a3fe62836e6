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

#include "diffprog/ops.hpp"

namespace diffprog::ops {

NodeId matmul(Tape& tape, NodeId a, NodeId b) {
  return tape.record(OpKind::kMatMul, {a, b});
}
NodeId matmul_bt(Tape& tape, NodeId a, NodeId b) {
  return tape.record(OpKind::kMatMulBT, {a, b});
}
NodeId transpose(Tape& tape, NodeId a) { return tape.record(OpKind::kTranspose, {a}); }
NodeId spmm(Tape& tape, std::shared_ptr<const SparseMatrix> a, NodeId b) {
  return tape.record(OpKind::kSpMM, {b}, attrs::Sparse{std::move(a)});
}

NodeId add(Tape& tape, NodeId a, NodeId b) { return tape.record(OpKind::kAdd, {a, b}); }
NodeId sub(Tape& tape, NodeId a, NodeId b) { return tape.record(OpKind::kSub, {a, b}); }
NodeId mul(Tape& tape, NodeId a, NodeId b) { return tape.record(OpKind::kMul, {a, b}); }
NodeId affine(Tape& tape, NodeId x, double alpha, double beta) {
  return tape.record(OpKind::kAffine, {x}, attrs::Affine{alpha, beta});
}
NodeId scale(Tape& tape, NodeId x, double factor) { return affine(tape, x, factor, 0.0); }
NodeId scalar_mul(Tape& tape, NodeId s, NodeId x) {
  return tape.record(OpKind::kScalarMul, {s, x});
}

NodeId sigmoid(Tape& tape, NodeId x) { return tape.record(OpKind::kSigmoid, {x}); }
NodeId tanh(Tape& tape, NodeId x) { return tape.record(OpKind::kTanh, {x}); }
NodeId relu(Tape& tape, NodeId x) { return tape.record(OpKind::kRelu, {x}); }
NodeId exp(Tape& tape, NodeId x) { return tape.record(OpKind::kExp, {x}); }
NodeId log(Tape& tape, NodeId x) { return tape.record(OpKind::kLog, {x}); }

NodeId sum(Tape& tape, NodeId x, int axis) {
  return tape.record(OpKind::kSum, {x}, attrs::Axis{axis});
}
NodeId softmax_rows(Tape& tape, NodeId x, std::shared_ptr<const BoolMatrix> mask) {
  return tape.record(OpKind::kSoftmaxRows, {x}, attrs::Softmax{std::move(mask)});
}

NodeId stack_rows(Tape& tape, std::span<const NodeId> rows) {
  return tape.record(OpKind::kStackRows, std::vector<NodeId>(rows.begin(), rows.end()));
}
NodeId select_row(Tape& tape, NodeId x, std::size_t index) {
  return tape.record(OpKind::kSelectRow, {x}, attrs::Row{index});
}

}  // namespace diffprog::ops
