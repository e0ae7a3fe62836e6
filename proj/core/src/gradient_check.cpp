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

#include "diffprog/gradient_check.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace diffprog {

double relative_error(double analytic, double numeric, double floor) noexcept {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / denom;
}

namespace {

double evaluate(const Program& program) {
  Tape tape;
  const NodeId out = program(tape);
  const Tensor& value = tape.value(out);
  if (value.size() != 1) {
    throw ShapeError("gradient_check: program output has shape " +
                     to_string(value.shape()) + ", expected a scalar");
  }
  return value[0];
}

}  // namespace

GradientCheckReport gradient_check(const Program& program, ParamStore& params,
                                   double eps, double floor) {
  if (!(eps > 0.0)) throw std::invalid_argument("gradient_check: eps must be positive");

  params.zero_grad();
  {
    Tape tape;
    tape.backward(program(tape));
  }
  std::map<std::string, Tensor> analytic;
  for (const auto& [name, entry] : params.entries()) analytic.emplace(name, entry.grad);

  GradientCheckReport report;
  for (auto& [name, entry] : params.entries()) {
    const Tensor& grad = analytic.at(name);
    for (std::size_t i = 0; i < entry.value.size(); ++i) {
      const double original = entry.value[i];
      entry.value[i] = original + eps;
      const double up = evaluate(program);
      entry.value[i] = original - eps;
      const double down = evaluate(program);
      entry.value[i] = original;

      const double numeric = (up - down) / (2.0 * eps);
      const double err = relative_error(grad[i], numeric, floor);
      ++report.coordinates;
      if (err > report.max_relative_error || report.worst_parameter.empty()) {
        report.max_relative_error = std::max(report.max_relative_error, err);
        report.worst_parameter = name;
        report.worst_index = i;
        report.analytic = grad[i];
        report.numeric = numeric;
      }
    }
  }
  return report;
}

}  // namespace diffprog
