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

#include <memory>
#include <span>
#include <vector>

#include "diffprog/tape.hpp"

// Thin recording wrappers over Tape::record, one per op kind.
namespace diffprog::ops {

NodeId matmul(Tape& tape, NodeId a, NodeId b);
NodeId matmul_bt(Tape& tape, NodeId a, NodeId b);
NodeId transpose(Tape& tape, NodeId a);
NodeId spmm(Tape& tape, std::shared_ptr<const SparseMatrix> a, NodeId b);

NodeId add(Tape& tape, NodeId a, NodeId b);
NodeId sub(Tape& tape, NodeId a, NodeId b);
NodeId mul(Tape& tape, NodeId a, NodeId b);
NodeId affine(Tape& tape, NodeId x, double alpha, double beta);
NodeId scale(Tape& tape, NodeId x, double factor);
/// s · x where s holds a single element.
NodeId scalar_mul(Tape& tape, NodeId s, NodeId x);

NodeId sigmoid(Tape& tape, NodeId x);
NodeId tanh(Tape& tape, NodeId x);
NodeId relu(Tape& tape, NodeId x);
NodeId exp(Tape& tape, NodeId x);
NodeId log(Tape& tape, NodeId x);

NodeId sum(Tape& tape, NodeId x, int axis = -1);
NodeId softmax_rows(Tape& tape, NodeId x, std::shared_ptr<const BoolMatrix> mask = nullptr);

NodeId stack_rows(Tape& tape, std::span<const NodeId> rows);
NodeId select_row(Tape& tape, NodeId x, std::size_t index);

}  // namespace diffprog::ops
