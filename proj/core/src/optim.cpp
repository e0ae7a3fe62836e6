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

#include "diffprog/optim.hpp"

#include <cmath>

namespace diffprog {

void sgd_step(ParamStore& store, double lr) {
  for (auto& [name, e] : store.entries()) {
    auto w = e.value.data();
    const auto g = e.grad.data();
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= lr * g[i];
  }
}

void adam_step(ParamStore& store, const AdamOptions& o) {
  const auto step = static_cast<double>(store.advance_optimizer());
  for (auto& [name, e] : store.entries()) {
    Tensor& m = store.slot(name, "adam.m");
    Tensor& v = store.slot(name, "adam.v");
    const double c1 = 1.0 - std::pow(o.beta1, step);
    const double c2 = 1.0 - std::pow(o.beta2, step);
    auto w = e.value.data();
    const auto g = e.grad.data();
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double grad = g[i] + o.weight_decay * w[i];
      m[i] = o.beta1 * m[i] + (1.0 - o.beta1) * grad;
      v[i] = o.beta2 * v[i] + (1.0 - o.beta2) * grad * grad;
      const double m_hat = m[i] / c1;
      const double v_hat = v[i] / c2;
      w[i] -= o.lr * m_hat / (std::sqrt(v_hat) + o.eps);
    }
  }
}

}  // namespace diffprog
