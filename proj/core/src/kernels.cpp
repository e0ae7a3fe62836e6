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

#include "diffprog/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace diffprog::kernels {

namespace {

[[noreturn]] void shape_mismatch(const char* op, const Tensor& a, const Tensor& b) {
  throw ShapeError(std::string(op) + ": incompatible shapes " +
                   to_string(a.shape()) + " and " + to_string(b.shape()));
}

void require_matrix_like(const char* op, const Tensor& a, const Tensor& b) {
  if (a.rank() == 0 || b.rank() == 0) shape_mismatch(op, a, b);
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  require_matrix_like("matmul", a, b);
  const std::size_t m = a.rank() == 2 ? a.shape()[0] : 1;
  const std::size_t k = a.cols();
  const std::size_t kb = b.shape()[0];
  const std::size_t n = b.rank() == 2 ? b.shape()[1] : 1;
  if (k != kb) shape_mismatch("matmul", a, b);

  Shape out_shape;
  if (a.rank() == 2) out_shape.push_back(m);
  if (b.rank() == 2) out_shape.push_back(n);
  Tensor out(out_shape);

  const auto ad = a.data();
  const auto bd = b.data();
  auto od = out.data();
  for (std::size_t i = 0; i < m; ++i) {
    double* orow = od.data() + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double av = ad[i * k + p];
      const double* brow = bd.data() + p * n;
      for (std::size_t j = 0; j < n; ++j) orow[j] += av * brow[j];
    }
  }
  return out;
}

Tensor matmul_bt(const Tensor& a, const Tensor& b) {
  require_matrix_like("matmul_bt", a, b);
  const std::size_t m = a.rank() == 2 ? a.shape()[0] : 1;
  const std::size_t k = a.cols();
  const std::size_t n = b.rank() == 2 ? b.shape()[0] : 1;
  if (b.cols() != k) shape_mismatch("matmul_bt", a, b);

  Shape out_shape;
  if (a.rank() == 2) out_shape.push_back(m);
  if (b.rank() == 2) out_shape.push_back(n);
  Tensor out(out_shape);

  const auto ad = a.data();
  const auto bd = b.data();
  auto od = out.data();
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = ad.data() + i * k;
    for (std::size_t j = 0; j < n; ++j) {
      const double* brow = bd.data() + j * k;
      double acc = 0.0;
      for (std::size_t p = 0; p < k; ++p) acc += arow[p] * brow[p];
      od[i * n + j] = acc;
    }
  }
  return out;
}

Tensor matmul_at(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.shape()[0] != b.shape()[0]) {
    shape_mismatch("matmul_at", a, b);
  }
  const std::size_t k = a.shape()[0];
  const std::size_t m = a.shape()[1];
  const std::size_t n = b.shape()[1];
  Tensor out({m, n});
  const auto ad = a.data();
  const auto bd = b.data();
  auto od = out.data();
  for (std::size_t p = 0; p < k; ++p) {
    const double* brow = bd.data() + p * n;
    for (std::size_t i = 0; i < m; ++i) {
      const double av = ad[p * m + i];
      if (av == 0.0) continue;
      double* orow = od.data() + i * n;
      for (std::size_t j = 0; j < n; ++j) orow[j] += av * brow[j];
    }
  }
  return out;
}

Tensor transpose(const Tensor& a) {
  if (a.rank() != 2) {
    throw ShapeError("transpose needs a rank-2 tensor, got " + to_string(a.shape()));
  }
  const std::size_t r = a.shape()[0];
  const std::size_t c = a.shape()[1];
  Tensor out({c, r});
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) out.at(j, i) = a.at(i, j);
  }
  return out;
}

Tensor spmm(const SparseMatrix& a, const Tensor& b) {
  if (b.rank() == 0 || b.shape()[0] != a.cols()) {
    throw ShapeError("spmm: incompatible shapes [" + std::to_string(a.rows()) +
                     "," + std::to_string(a.cols()) + "] and " +
                     to_string(b.shape()));
  }
  const std::size_t n = b.rank() == 2 ? b.shape()[1] : 1;
  Tensor out(b.rank() == 2 ? Shape{a.rows(), n} : Shape{a.rows()});
  const auto bd = b.data();
  auto od = out.data();
  for (const auto& e : a.entries()) {
    const double* brow = bd.data() + e.col * n;
    double* orow = od.data() + e.row * n;
    for (std::size_t j = 0; j < n; ++j) orow[j] += e.value * brow[j];
  }
  return out;
}

Tensor spmm_t(const SparseMatrix& a, const Tensor& b) {
  if (b.rank() == 0 || b.shape()[0] != a.rows()) {
    throw ShapeError("spmm_t: incompatible shapes [" + std::to_string(a.rows()) +
                     "," + std::to_string(a.cols()) + "]^T and " +
                     to_string(b.shape()));
  }
  const std::size_t n = b.rank() == 2 ? b.shape()[1] : 1;
  Tensor out(b.rank() == 2 ? Shape{a.cols(), n} : Shape{a.cols()});
  const auto bd = b.data();
  auto od = out.data();
  for (const auto& e : a.entries()) {
    const double* brow = bd.data() + e.row * n;
    double* orow = od.data() + e.col * n;
    for (std::size_t j = 0; j < n; ++j) orow[j] += e.value * brow[j];
  }
  return out;
}

double sigmoid(double x) noexcept {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Tensor elementwise(UnaryOp op, const Tensor& a) {
  Tensor out = a;
  for (double& v : out.data()) {
    switch (op) {
      case UnaryOp::kSigmoid: v = sigmoid(v); break;
      case UnaryOp::kTanh: v = std::tanh(v); break;
      case UnaryOp::kRelu: v = v > 0.0 ? v : 0.0; break;
      case UnaryOp::kExp: v = std::exp(v); break;
      case UnaryOp::kLog:
        if (!(v > 0.0)) {
          throw std::domain_error("log of non-positive value " + std::to_string(v));
        }
        v = std::log(v);
        break;
    }
  }
  return out;
}

namespace {

double apply(BinaryOp op, double x, double y) noexcept {
  switch (op) {
    case BinaryOp::kAdd: return x + y;
    case BinaryOp::kSub: return x - y;
    case BinaryOp::kMul: return x * y;
  }
  return 0.0;
}

}  // namespace

Tensor elementwise(BinaryOp op, const Tensor& a, const Tensor& b) {
  Tensor out = a;
  auto od = out.data();
  const auto bd = b.data();
  if (a.shape() == b.shape()) {
    for (std::size_t i = 0; i < od.size(); ++i) od[i] = apply(op, od[i], bd[i]);
    return out;
  }
  if (a.rank() == 2 && b.rank() == 1 && b.shape()[0] == a.shape()[1]) {
    const std::size_t n = b.size();
    for (std::size_t i = 0; i < od.size(); ++i) od[i] = apply(op, od[i], bd[i % n]);
    return out;
  }
  shape_mismatch("elementwise", a, b);
}

Tensor elementwise(BinaryOp op, const Tensor& a, double b) {
  Tensor out = a;
  for (double& v : out.data()) v = apply(op, v, b);
  return out;
}

Tensor scale(const Tensor& a, double factor) {
  return elementwise(BinaryOp::kMul, a, factor);
}

Tensor reduce_sum(const Tensor& a, int axis) {
  if (axis == kAllAxes) {
    double acc = 0.0;
    for (double v : a.data()) acc += v;
    return Tensor::scalar(acc);
  }
  if (axis < 0 || static_cast<std::size_t>(axis) >= a.rank()) {
    throw std::invalid_argument("reduce_sum: axis " + std::to_string(axis) +
                                " invalid for shape " + to_string(a.shape()));
  }
  if (a.rank() == 1) return reduce_sum(a, kAllAxes);
  const std::size_t r = a.shape()[0];
  const std::size_t c = a.shape()[1];
  if (axis == 0) {
    Tensor out({c});
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < c; ++j) out[j] += a.at(i, j);
    }
    return out;
  }
  Tensor out({r});
  for (std::size_t i = 0; i < r; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < c; ++j) acc += a.at(i, j);
    out[i] = acc;
  }
  return out;
}

void softmax_inplace(std::span<double> row) noexcept {
  if (row.empty()) return;
  const double mx = *std::max_element(row.begin(), row.end());
  double total = 0.0;
  for (double& v : row) {
    v = std::exp(v - mx);
    total += v;
  }
  for (double& v : row) v /= total;
}

double log_sum_exp(std::span<const double> row) noexcept {
  if (row.empty()) return -std::numeric_limits<double>::infinity();
  const double mx = *std::max_element(row.begin(), row.end());
  double total = 0.0;
  for (double v : row) total += std::exp(v - mx);
  return mx + std::log(total);
}

Tensor softmax_rows(const Tensor& a, const BoolMatrix* mask) {
  if (a.rank() == 0) throw ShapeError("softmax_rows needs rank >= 1");
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (mask && (mask->rows() != m || mask->cols() != n)) {
    throw ShapeError("softmax_rows: mask " + std::to_string(mask->rows()) + "x" +
                     std::to_string(mask->cols()) + " does not match " +
                     to_string(a.shape()));
  }
  Tensor out(a.shape());
  std::vector<double> scratch;
  scratch.reserve(n);
  for (std::size_t i = 0; i < m; ++i) {
    const auto in = a.row(i);
    auto dst = out.row(i);
    if (!mask) {
      std::copy(in.begin(), in.end(), dst.begin());
      softmax_inplace(dst);
      continue;
    }
    scratch.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if ((*mask)(i, j)) scratch.push_back(in[j]);
    }
    if (scratch.empty()) {
      throw std::invalid_argument("softmax_rows: row " + std::to_string(i) +
                                  " is fully masked");
    }
    softmax_inplace(scratch);
    std::size_t next = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if ((*mask)(i, j)) dst[j] = scratch[next++];
    }
  }
  return out;
}

}  // namespace diffprog::kernels
