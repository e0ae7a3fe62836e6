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
#include <span>
#include <vector>

#include "diffprog/tensor.hpp"

namespace diffprog {

struct SparseEntry {
  std::size_t row;
  std::size_t col;
  double value;

  bool operator==(const SparseEntry&) const = default;
};

/// Coordinate-list sparse matrix. Entries are validated and kept in canonical
/// (row, col) order, so two matrices built from the same set of triples in any
/// order are identical.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  /// Throws std::out_of_range on a bad index and std::invalid_argument on a
  /// duplicated (row, col) pair.
  SparseMatrix(std::size_t rows, std::size_t cols, std::vector<SparseEntry> entries);

  static SparseMatrix identity(std::size_t n);
  static SparseMatrix from_dense(const Tensor& dense);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return entries_.size(); }
  std::span<const SparseEntry> entries() const noexcept { return entries_; }
  /// Entries of one row, in ascending column order.
  std::span<const SparseEntry> row(std::size_t r) const {
    return std::span<const SparseEntry>(entries_).subspan(
        row_offsets_[r], row_offsets_[r + 1] - row_offsets_[r]);
  }

  Tensor to_dense() const;
  SparseMatrix transposed() const;

  bool operator==(const SparseMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ &&
           entries_ == other.entries_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<SparseEntry> entries_;
  std::vector<std::size_t> row_offsets_{0};
};

}  // namespace diffprog
