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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "diffprog/kernels.hpp"
#include "diffprog/sparse.hpp"
#include "diffprog/tensor.hpp"
#include "oracles.hpp"

namespace {

using namespace diffprog;
namespace k = diffprog::kernels;

TEST(Tensor, ShapeAndDataLengthAgree) {
  EXPECT_EQ(Tensor().size(), 1u);
  EXPECT_EQ(Tensor({3}).size(), 3u);
  EXPECT_EQ(Tensor({2, 5}).size(), 10u);
  EXPECT_THROW(Tensor({2, 2}, {1.0, 2.0, 3.0}), ShapeError);
  EXPECT_THROW(Tensor({1, 1, 1}), ShapeError);
}

TEST(Tensor, ItemRequiresOneElement) {
  EXPECT_DOUBLE_EQ(Tensor::scalar(4.5).item(), 4.5);
  EXPECT_DOUBLE_EQ(Tensor({1, 1}, {2.0}).item(), 2.0);
  EXPECT_THROW(Tensor({2}).item(), ShapeError);
}

TEST(Matmul, IdentityLeavesMatrixUnchanged) {
  const Tensor b = Tensor::matrix({{5, 6}, {7, 8}});
  EXPECT_EQ(k::matmul(Tensor::identity(2), b), b);
}

TEST(Matmul, TwoByTwo) {
  EXPECT_EQ(k::matmul(Tensor::matrix({{1, 2}, {3, 4}}), Tensor::matrix({{5, 6}, {7, 8}})),
            Tensor::matrix({{19, 22}, {43, 50}}));
}

TEST(Matmul, MatchesTripleLoop) {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Tensor a = oracle::random_tensor({3, 4}, rng);
    const Tensor b = oracle::random_tensor({4, 2}, rng);
    EXPECT_EQ(k::matmul(a, b), oracle::triple_loop_matmul(a, b));
  }
}

TEST(Matmul, MismatchReportsBothShapes) {
  try {
    k::matmul(Tensor({2, 3}), Tensor({4, 5}));
    FAIL() << "expected ShapeError";
  } catch (const ShapeError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("[2,3]"), std::string::npos) << msg;
    EXPECT_NE(msg.find("[4,5]"), std::string::npos) << msg;
  }
}

TEST(Matmul, AssociativeWithinTolerance) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Tensor a = oracle::random_tensor({4, 5}, rng);
    const Tensor b = oracle::random_tensor({5, 3}, rng);
    const Tensor c = oracle::random_tensor({3, 6}, rng);
    const Tensor left = k::matmul(k::matmul(a, b), c);
    const Tensor right = k::matmul(a, k::matmul(b, c));
    for (std::size_t i = 0; i < left.size(); ++i) {
      EXPECT_LE(std::abs(left[i] - right[i]), 1e-9 * std::max(1.0, std::abs(left[i])));
    }
  }
}

TEST(Matmul, VectorOperands) {
  const Tensor m = Tensor::matrix({{1, 2}, {3, 4}});
  EXPECT_EQ(k::matmul(m, Tensor::vector({1, 1})), Tensor::vector({3, 7}));
  EXPECT_EQ(k::matmul(Tensor::vector({1, 1}), m), Tensor::vector({4, 6}));
}

TEST(Matmul, TransposedVariantsAgreeWithExplicitTranspose) {
  Rng rng(3);
  const Tensor a = oracle::random_tensor({3, 4}, rng);
  const Tensor b = oracle::random_tensor({5, 4}, rng);
  const Tensor c = oracle::random_tensor({3, 2}, rng);
  EXPECT_EQ(k::matmul_bt(a, b), k::matmul(a, k::transpose(b)));
  EXPECT_EQ(k::matmul_at(a, c), k::matmul(k::transpose(a), c));
}

TEST(Spmm, EmptyEntriesGiveZeros) {
  const SparseMatrix a(3, 2, {});
  EXPECT_EQ(k::spmm(a, Tensor::full({2, 4}, 1.5)), Tensor({3, 4}));
}

TEST(Spmm, IdentityLeavesMatrixUnchanged) {
  Rng rng(5);
  const Tensor b = oracle::random_tensor({4, 3}, rng);
  EXPECT_EQ(k::spmm(SparseMatrix::identity(4), b), b);
}

TEST(Spmm, EqualsDensifiedMatmulForAnyEntryOrder) {
  std::mt19937_64 shuffle_engine(9);
  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<SparseEntry> entries;
    for (std::size_t r = 0; r < 5; ++r) {
      for (std::size_t c = 0; c < 5; ++c) {
        if (rng.uniform() < 0.3) entries.push_back({r, c, rng.uniform(-2, 2)});
      }
    }
    const Tensor b = oracle::random_tensor({5, 3}, rng);
    const Tensor dense = oracle::densify(5, 5, entries);
    std::shuffle(entries.begin(), entries.end(), shuffle_engine);
    const SparseMatrix a(5, 5, entries);
    EXPECT_EQ(k::spmm(a, b), k::matmul(dense, b));
    EXPECT_EQ(a.to_dense(), dense);
    EXPECT_EQ(k::spmm_t(a, b), k::matmul(k::transpose(dense), b));
  }
}

TEST(Spmm, RejectsDuplicatesAndOutOfRange) {
  EXPECT_THROW(SparseMatrix(2, 2, {{0, 0, 1.0}, {0, 0, 2.0}}), std::invalid_argument);
  EXPECT_THROW(SparseMatrix(2, 2, {{2, 0, 1.0}}), std::out_of_range);
  EXPECT_THROW(k::spmm(SparseMatrix(2, 3, {}), Tensor({2, 2})), ShapeError);
}

TEST(Elementwise, Examples) {
  EXPECT_DOUBLE_EQ(k::elementwise(k::UnaryOp::kSigmoid, Tensor::scalar(0.0)).item(), 0.5);
  EXPECT_EQ(k::elementwise(k::UnaryOp::kRelu, Tensor::vector({-1, 0, 2})),
            Tensor::vector({0, 0, 2}));
  EXPECT_EQ(k::elementwise(k::BinaryOp::kAdd, Tensor::matrix({{1, 2}, {3, 4}}),
                           Tensor::vector({10, 20})),
            Tensor::matrix({{11, 22}, {13, 24}}));
}

TEST(Elementwise, BinaryForms) {
  const Tensor a = Tensor::matrix({{1, 2}, {3, 4}});
  const Tensor b = Tensor::matrix({{2, 2}, {2, 2}});
  EXPECT_EQ(k::elementwise(k::BinaryOp::kSub, a, b), Tensor::matrix({{-1, 0}, {1, 2}}));
  EXPECT_EQ(k::elementwise(k::BinaryOp::kMul, a, b), Tensor::matrix({{2, 4}, {6, 8}}));
  EXPECT_EQ(k::scale(a, 0.5), Tensor::matrix({{0.5, 1}, {1.5, 2}}));
  EXPECT_EQ(k::elementwise(k::BinaryOp::kAdd, a, 1.0), Tensor::matrix({{2, 3}, {4, 5}}));
}

TEST(Elementwise, OnlyBiasBroadcastIsAllowed) {
  const Tensor a({2, 3});
  EXPECT_THROW(k::elementwise(k::BinaryOp::kAdd, a, Tensor({2})), ShapeError);
  EXPECT_THROW(k::elementwise(k::BinaryOp::kAdd, a, Tensor({3, 2})), ShapeError);
  EXPECT_THROW(k::elementwise(k::BinaryOp::kAdd, Tensor({3}), Tensor({2, 3})), ShapeError);
}

TEST(Elementwise, LogRejectsNonPositive) {
  EXPECT_THROW(k::elementwise(k::UnaryOp::kLog, Tensor::vector({1.0, 0.0})), std::domain_error);
  EXPECT_THROW(k::elementwise(k::UnaryOp::kLog, Tensor::vector({-2.0})), std::domain_error);
  EXPECT_DOUBLE_EQ(k::elementwise(k::UnaryOp::kLog, Tensor::vector({1.0}))[0], 0.0);
}

TEST(Elementwise, SigmoidIsStableAtExtremes) {
  const Tensor s = k::elementwise(k::UnaryOp::kSigmoid, Tensor::vector({-800, 800}));
  EXPECT_EQ(s[0], 0.0);
  EXPECT_EQ(s[1], 1.0);
  EXPECT_TRUE(s.all_finite());
}

TEST(ReduceSum, Examples) {
  const Tensor a = Tensor::matrix({{1, 2}, {3, 4}});
  EXPECT_DOUBLE_EQ(k::reduce_sum(a).item(), 10.0);
  EXPECT_EQ(k::reduce_sum(a, 0), Tensor::vector({4, 6}));
  EXPECT_EQ(k::reduce_sum(a, 1), Tensor::vector({3, 7}));
  for (int axis : {k::kAllAxes, 0, 1}) {
    const Tensor z = k::reduce_sum(Tensor({3, 2}), axis);
    for (double v : z.data()) EXPECT_EQ(v, 0.0);
  }
  EXPECT_THROW(k::reduce_sum(a, 2), std::invalid_argument);
}

TEST(Softmax, ConstantRowIsUniform) {
  const Tensor s = k::softmax_rows(Tensor::matrix({{4, 4, 4}}));
  for (double v : s.data()) EXPECT_NEAR(v, 1.0 / 3.0, 1e-15);
}

TEST(Softmax, LogThreeRow) {
  const Tensor s = k::softmax_rows(Tensor::matrix({{0.0, std::log(3.0)}}));
  EXPECT_NEAR(s[0], 0.25, 1e-15);
  EXPECT_NEAR(s[1], 0.75, 1e-15);
}

TEST(Softmax, LargeLogitsMatchExtendedPrecision) {
  const Tensor a = Tensor::matrix({{1000.0, 1000.5}});
  const Tensor s = k::softmax_rows(a);
  const auto ref = oracle::softmax_ld(a.row(0));
  EXPECT_NEAR(s[0], static_cast<double>(ref[0]), 1e-12);
  EXPECT_NEAR(s[1], static_cast<double>(ref[1]), 1e-12);
}

TEST(Softmax, MaskedEntriesAreExactlyZero) {
  BoolMatrix mask(2, 3);
  mask.set(0, 0);
  mask.set(0, 2);
  mask.set(1, 1);
  const Tensor s = k::softmax_rows(Tensor::matrix({{1, 2, 3}, {4, 5, 6}}), &mask);
  EXPECT_EQ(s.at(0, 1), 0.0);
  EXPECT_EQ(s.at(1, 0), 0.0);
  EXPECT_EQ(s.at(1, 2), 0.0);
  EXPECT_EQ(s.at(1, 1), 1.0);
  EXPECT_NEAR(s.at(0, 0) + s.at(0, 2), 1.0, 1e-12);
}

TEST(Softmax, FullyMaskedRowIsReportedByIndex) {
  BoolMatrix mask(3, 2, true);
  mask.set(2, 0, false);
  mask.set(2, 1, false);
  try {
    k::softmax_rows(Tensor({3, 2}), &mask);
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("2"), std::string::npos) << e.what();
  }
}

TEST(Softmax, RowsSumToOneAndAreShiftInvariant) {
  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const Tensor a = oracle::random_tensor({4, 7}, rng, -30, 30);
    const Tensor s = k::softmax_rows(a);
    const Tensor shifted = k::softmax_rows(k::elementwise(k::BinaryOp::kAdd, a, 123.25));
    for (std::size_t r = 0; r < 4; ++r) {
      const auto row = s.row(r);
      EXPECT_NEAR(std::accumulate(row.begin(), row.end(), 0.0), 1.0, 1e-12);
      const auto argmax = std::max_element(row.begin(), row.end()) - row.begin();
      const auto srow = shifted.row(r);
      EXPECT_EQ(argmax, std::max_element(srow.begin(), srow.end()) - srow.begin());
      for (std::size_t c = 0; c < 7; ++c) EXPECT_NEAR(row[c], srow[c], 1e-12);
    }
  }
}

TEST(Kernels, PureAndBitwiseRepeatable) {
  Rng rng(33);
  const Tensor a = oracle::random_tensor({6, 5}, rng);
  const Tensor b = oracle::random_tensor({5, 4}, rng);
  EXPECT_EQ(k::matmul(a, b), k::matmul(a, b));
  EXPECT_EQ(k::softmax_rows(a), k::softmax_rows(a));
  const SparseMatrix sa = SparseMatrix::from_dense(a);
  EXPECT_EQ(k::spmm(sa.transposed(), a), k::spmm(sa.transposed(), a));
}

TEST(Sparse, CanonicalOrderAndTranspose) {
  const SparseMatrix a(2, 3, {{1, 2, 5.0}, {0, 1, 3.0}, {1, 0, 4.0}});
  ASSERT_EQ(a.nnz(), 3u);
  EXPECT_EQ(a.entries()[0], (SparseEntry{0, 1, 3.0}));
  EXPECT_EQ(a.row(1).size(), 2u);
  EXPECT_EQ(a.transposed().to_dense(), k::transpose(a.to_dense()));
  EXPECT_EQ(SparseMatrix::from_dense(a.to_dense()), a);
}

}  // namespace
