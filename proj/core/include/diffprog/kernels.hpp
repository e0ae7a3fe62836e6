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

#include <span>

#include "diffprog/sparse.hpp"
#include "diffprog/tensor.hpp"

// Pure numeric kernels. Every summation runs in ascending index order so that
// identical inputs produce bitwise-identical outputs.
namespace diffprog::kernels {

/// Matrix product. Rank-1 operands follow the usual convention: a vector on
/// the left is a row, a vector on the right is a column, and the matching
/// output dimension is dropped.
Tensor matmul(const Tensor& a, const Tensor& b);

/// a · bᵀ where b is [n,k] (or [k], giving a per-row dot product).
Tensor matmul_bt(const Tensor& a, const Tensor& b);

/// aᵀ · b for rank-2 a [k,m] and b [k,n].
Tensor matmul_at(const Tensor& a, const Tensor& b);

Tensor transpose(const Tensor& a);

/// Sparse · dense. Equals matmul(a.to_dense(), b) bitwise.
Tensor spmm(const SparseMatrix& a, const Tensor& b);

/// aᵀ · b without materializing the transpose.
Tensor spmm_t(const SparseMatrix& a, const Tensor& b);

enum class UnaryOp { kSigmoid, kTanh, kRelu, kExp, kLog };
enum class BinaryOp { kAdd, kSub, kMul };

Tensor elementwise(UnaryOp op, const Tensor& a);
/// Equal shapes, or a rank-2 `a` with a rank-1 `b` broadcast across rows.
Tensor elementwise(BinaryOp op, const Tensor& a, const Tensor& b);
Tensor elementwise(BinaryOp op, const Tensor& a, double b);
Tensor scale(const Tensor& a, double factor);

double sigmoid(double x) noexcept;

inline constexpr int kAllAxes = -1;

/// Sum over `axis` (0 = down the rows, 1 = across columns) or everything.
Tensor reduce_sum(const Tensor& a, int axis = kAllAxes);

/// Row-wise softmax. Masked-out entries are exactly zero; a row with no
/// allowed entry throws std::invalid_argument naming the row.
Tensor softmax_rows(const Tensor& a, const BoolMatrix* mask = nullptr);

/// In-place max-stabilized softmax of a single row.
void softmax_inplace(std::span<double> row) noexcept;

/// log Σ exp(row), max-stabilized.
double log_sum_exp(std::span<const double> row) noexcept;

}  // namespace diffprog::kernels
