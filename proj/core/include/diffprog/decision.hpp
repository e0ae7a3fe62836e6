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

#include <string_view>

namespace diffprog {

enum class Action { kBuy, kHold, kSell };

std::string_view action_name(Action a) noexcept;

/// Two-asset trend rule: buy when both predicted trends are positive, hold
/// when exactly one is, sell otherwise. Zero counts as non-positive.
/// Throws std::invalid_argument on NaN or infinite input.
Action guided_decision(double p1, double p2);

}  // namespace diffprog
