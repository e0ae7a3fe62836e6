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

#include "diffprog/sparse.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace diffprog {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols,
                           std::vector<SparseEntry> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  for (const auto& e : entries_) {
    if (e.row >= rows_ || e.col >= cols_) {
      throw std::out_of_range("sparse entry (" + std::to_string(e.row) + ", " +
                              std::to_string(e.col) + ") outside " +
                              std::to_string(rows_) + "x" + std::to_string(cols_));
    }
  }
  std::sort(entries_.begin(), entries_.end(),
            [](const SparseEntry& a, const SparseEntry& b) {
              return a.row != b.row ? a.row < b.row : a.col < b.col;
            });
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    if (entries_[i].row == entries_[i - 1].row &&
        entries_[i].col == entries_[i - 1].col) {
      throw std::invalid_argument("duplicate sparse entry (" +
                                  std::to_string(entries_[i].row) + ", " +
                                  std::to_string(entries_[i].col) + ")");
    }
  }
  row_offsets_.assign(rows_ + 1, 0);
  for (const auto& e : entries_) ++row_offsets_[e.row + 1];
  for (std::size_t r = 0; r < rows_; ++r) row_offsets_[r + 1] += row_offsets_[r];
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<SparseEntry> entries;
  entries.reserve(n);
  for (std::size_t i = 0; i < n; ++i) entries.push_back({i, i, 1.0});
  return SparseMatrix(n, n, std::move(entries));
}

SparseMatrix SparseMatrix::from_dense(const Tensor& dense) {
  std::vector<SparseEntry> entries;
  for (std::size_t r = 0; r < dense.rows(); ++r) {
    for (std::size_t c = 0; c < dense.cols(); ++c) {
      if (dense.at(r, c) != 0.0) entries.push_back({r, c, dense.at(r, c)});
    }
  }
  return SparseMatrix(dense.rows(), dense.cols(), std::move(entries));
}

Tensor SparseMatrix::to_dense() const {
  Tensor out({rows_, cols_});
  for (const auto& e : entries_) out.at(e.row, e.col) = e.value;
  return out;
}

SparseMatrix SparseMatrix::transposed() const {
  std::vector<SparseEntry> entries;
  entries.reserve(entries_.size());
  for (const auto& e : entries_) entries.push_back({e.col, e.row, e.value});
  return SparseMatrix(cols_, rows_, std::move(entries));
}

}  // namespace diffprog
