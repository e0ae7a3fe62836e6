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

#include "diffprog/optim.hpp"
#include "diffprog/param_store.hpp"

namespace {

using namespace diffprog;

TEST(Sgd, ZeroGradientLeavesParameters) {
  ParamStore s;
  s.add("w", Tensor::vector({1.5, -2.0}));
  sgd_step(s, 0.3);
  EXPECT_EQ(s.value("w"), Tensor::vector({1.5, -2.0}));
}

TEST(Sgd, OneStep) {
  ParamStore s;
  s.add("w", Tensor::vector({1.0}));
  s.accumulate_grad("w", Tensor::vector({2.0}));
  sgd_step(s, 0.1);
  EXPECT_DOUBLE_EQ(s.value("w")[0], 0.8);
}

// Straight transcription of the bias-corrected update for one scalar.
struct ScalarAdam {
  double m = 0, v = 0;
  int t = 0;
  double step(double w, double g, double lr, double b1, double b2, double eps, double wd) {
    ++t;
    g += wd * w;
    m = b1 * m + (1 - b1) * g;
    v = b2 * v + (1 - b2) * g * g;
    const double mh = m / (1 - std::pow(b1, t));
    const double vh = v / (1 - std::pow(b2, t));
    return w - lr * mh / (std::sqrt(vh) + eps);
  }
};

TEST(Adam, FirstStepMovesByLearningRate) {
  ParamStore s;
  s.add("w", Tensor::full({3}, 0.5));
  s.accumulate_grad("w", Tensor::full({3}, 1.0));
  adam_step(s, {});
  for (double w : s.value("w").data()) EXPECT_NEAR(0.5 - w, 0.01, 1e-9);
}

TEST(Adam, MatchesScalarOracleOverManySteps) {
  ParamStore s;
  s.add("a", Tensor::vector({0.3, -1.2}));
  s.add("b", Tensor::vector({2.0}));
  const AdamOptions o{0.05, 0.8, 0.99, 1e-7, 0.01};
  std::vector<ScalarAdam> oracle(3);
  std::vector<double> w{0.3, -1.2, 2.0};
  for (int step = 0; step < 25; ++step) {
    s.zero_grad();
    const std::vector<double> g{std::sin(step + 1.0), std::cos(step * 0.3), 0.1 * step - 1};
    s.accumulate_grad("a", Tensor::vector({g[0], g[1]}));
    s.accumulate_grad("b", Tensor::vector({g[2]}));
    adam_step(s, o);
    for (std::size_t i = 0; i < 3; ++i) {
      w[i] = oracle[i].step(w[i], g[i], o.lr, o.beta1, o.beta2, o.eps, o.weight_decay);
    }
    EXPECT_DOUBLE_EQ(s.value("a")[0], w[0]);
    EXPECT_DOUBLE_EQ(s.value("a")[1], w[1]);
    EXPECT_DOUBLE_EQ(s.value("b")[0], w[2]);
  }
  EXPECT_EQ(s.optimizer_steps(), 25u);
}

TEST(Adam, ZeroGradientStillDecaysWeights) {
  ParamStore s;
  s.add("w", Tensor::vector({1.0}));
  adam_step(s, {0.01, 0.9, 0.999, 1e-8, 0.5});
  EXPECT_LT(s.value("w")[0], 1.0);
}

}  // namespace
