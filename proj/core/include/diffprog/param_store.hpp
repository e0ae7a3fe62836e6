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
#include <map>
#include <string>
#include <vector>

#include "diffprog/tensor.hpp"

namespace diffprog {

/// Named trainable tensors with gradient accumulators and optimizer slots.
/// Iteration order is lexicographic by name, which keeps optimizer updates
/// and parameter counts deterministic.
class ParamStore {
 public:
  struct Entry {
    Tensor value;
    Tensor grad;
    std::map<std::string, Tensor> slots;
  };

  /// Registers a new parameter; throws std::invalid_argument if the name is taken.
  void add(const std::string& name, Tensor init);

  bool contains(const std::string& name) const { return entries_.count(name) != 0; }
  const Tensor& value(const std::string& name) const { return entry(name).value; }
  Tensor& value(const std::string& name) { return entry(name).value; }

  /// Gradient accumulated since the last zero_grad().
  const Tensor& grad(const std::string& name) const { return entry(name).grad; }
  void accumulate_grad(const std::string& name, const Tensor& delta);
  /// Zeroes every gradient. Values and optimizer slots are untouched.
  void zero_grad();

  /// Optimizer slot, created as zeros shaped like the parameter on first use.
  Tensor& slot(const std::string& name, const std::string& slot_name);

  /// Number of optimizer updates applied so far (Adam bias correction).
  std::size_t optimizer_steps() const noexcept { return optimizer_steps_; }
  std::size_t advance_optimizer() noexcept { return ++optimizer_steps_; }

  std::vector<std::string> names() const;
  std::size_t size() const noexcept { return entries_.size(); }
  /// Total number of scalar parameters.
  std::size_t parameter_count() const;

  std::map<std::string, Entry>& entries() noexcept { return entries_; }
  const std::map<std::string, Entry>& entries() const noexcept { return entries_; }

 private:
  Entry& entry(const std::string& name);
  const Entry& entry(const std::string& name) const;

  std::map<std::string, Entry> entries_;
  std::size_t optimizer_steps_ = 0;
};

}  // namespace diffprog
