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
#include <functional>
#include <string>

#include "diffprog/param_store.hpp"
#include "diffprog/tape.hpp"

namespace diffprog {

/// Records a scalar-output computation on a fresh tape and returns the output
/// node. Must read parameters through `Tape::parameter` and be deterministic.
using Program = std::function<NodeId(Tape&)>;

struct GradientCheckReport {
  double max_relative_error = 0.0;
  std::string worst_parameter;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  std::size_t coordinates = 0;
};

/// |analytic - numeric| / max(|analytic|, |numeric|, floor). The floor keeps
/// near-zero gradients from turning finite-difference round-off into a large
/// relative error.
double relative_error(double analytic, double numeric, double floor) noexcept;

inline constexpr double kGradientCheckFloor = 1e-3;

/// Compares reverse-mode gradients of every parameter coordinate against the
/// central difference (f(w+eps) - f(w-eps)) / (2 eps). Parameter values are
/// restored afterwards and the store holds the analytic gradient.
///
/// Throws ShapeError if the program output is not a single element and
/// std::invalid_argument if eps is not positive.
GradientCheckReport gradient_check(const Program& program, ParamStore& params,
                                   double eps = 1e-6,
                                   double floor = kGradientCheckFloor);

}  // namespace diffprog
