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

#include "diffprog/param_store.hpp"

#include <algorithm>
#include <stdexcept>

namespace diffprog {

void ParamStore::add(const std::string& name, Tensor init) {
  if (contains(name)) {
    throw std::invalid_argument("parameter '" + name + "' already registered");
  }
  Tensor grad(init.shape());
  entries_.emplace(name, Entry{std::move(init), std::move(grad), {}});
}

ParamStore::Entry& ParamStore::entry(const std::string& name) {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw std::out_of_range("unknown parameter '" + name + "'");
  return it->second;
}

const ParamStore::Entry& ParamStore::entry(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw std::out_of_range("unknown parameter '" + name + "'");
  return it->second;
}

void ParamStore::accumulate_grad(const std::string& name, const Tensor& delta) {
  Entry& e = entry(name);
  if (delta.shape() != e.grad.shape()) {
    throw ShapeError("gradient for '" + name + "' has shape " +
                     to_string(delta.shape()) + ", expected " +
                     to_string(e.grad.shape()));
  }
  auto g = e.grad.data();
  const auto d = delta.data();
  for (std::size_t i = 0; i < g.size(); ++i) g[i] += d[i];
}

void ParamStore::zero_grad() {
  for (auto& [name, e] : entries_) {
    auto g = e.grad.data();
    std::fill(g.begin(), g.end(), 0.0);
  }
}

Tensor& ParamStore::slot(const std::string& name, const std::string& slot_name) {
  Entry& e = entry(name);
  auto it = e.slots.find(slot_name);
  if (it == e.slots.end()) {
    it = e.slots.emplace(slot_name, Tensor(e.value.shape())).first;
  }
  return it->second;
}

std::vector<std::string> ParamStore::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [name, e] : entries_) out.push_back(name);
  return out;
}

std::size_t ParamStore::parameter_count() const {
  std::size_t total = 0;
  for (const auto& [name, e] : entries_) total += e.value.size();
  return total;
}

}  // namespace diffprog
