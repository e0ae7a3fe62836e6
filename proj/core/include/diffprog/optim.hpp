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

#include "diffprog/param_store.hpp"

namespace diffprog {

/// w <- w - lr * g for every parameter.
void sgd_step(ParamStore& store, double lr);

struct AdamOptions {
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  /// L2 coefficient added to the gradient before the moment updates.
  double weight_decay = 0.0;
};

/// Bias-corrected Adam. Moments live in the "adam.m" / "adam.v" slots; the
/// step count is the store's optimizer_steps().
void adam_step(ParamStore& store, const AdamOptions& options);

}  // namespace diffprog
