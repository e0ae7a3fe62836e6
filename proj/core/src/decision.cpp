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

#include "diffprog/decision.hpp"

#include <cmath>
#include <stdexcept>

namespace diffprog {

std::string_view action_name(Action a) noexcept {
  switch (a) {
    case Action::kBuy: return "buy";
    case Action::kHold: return "hold";
    case Action::kSell: return "sell";
  }
  return "hold";
}

Action guided_decision(double p1, double p2) {
  if (!std::isfinite(p1) || !std::isfinite(p2)) {
    throw std::invalid_argument("guided_decision: trends must be finite");
  }
  const bool up1 = p1 > 0.0;
  const bool up2 = p2 > 0.0;
  if (up1 && up2) return Action::kBuy;
  if (up1 != up2) return Action::kHold;
  return Action::kSell;
}

}  // namespace diffprog
