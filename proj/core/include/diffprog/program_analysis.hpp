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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "diffprog/tape.hpp"

namespace diffprog {

/// Structure-only view of a tape: kinds, edges and shapes, no values. Built
/// from a live tape or parsed back from Tape::dump() text.
class TapeGraph {
 public:
  static TapeGraph from_tape(const Tape& tape);
  /// Parses `id kind [input ids] shape` lines. Throws std::invalid_argument on
  /// malformed lines, out-of-order ids, unknown kinds or forward edges.
  static TapeGraph parse_dump(std::string_view text);

  std::size_t size() const noexcept { return kinds_.size(); }
  OpKind kind(NodeId id) const;
  const std::vector<std::size_t>& inputs(NodeId id) const;
  const std::vector<std::size_t>& consumers(NodeId id) const;
  const Shape& shape(NodeId id) const;
  bool is_leaf(NodeId id) const;

 private:
  void add(OpKind kind, std::vector<std::size_t> inputs, Shape shape);
  void check(NodeId id) const;

  std::vector<OpKind> kinds_;
  std::vector<std::vector<std::size_t>> inputs_;
  std::vector<std::vector<std::size_t>> consumers_;
  std::vector<Shape> shapes_;
};

/// Minimum number of recorded edges from `from` to `to`, following data flow
/// (input -> consumer). std::nullopt when `to` does not depend on `from`.
std::optional<std::size_t> shortest_path_length(const TapeGraph& graph, NodeId from,
                                                NodeId to);

struct PathProfile {
  struct Entry {
    NodeId input;
    std::optional<std::size_t> hops;
  };
  NodeId output;
  std::vector<Entry> entries;

  /// True when every input reaches the output with the same hop count.
  bool symmetric() const;
  std::string table() const;
};

PathProfile path_profile(const TapeGraph& graph, std::span<const NodeId> inputs,
                         NodeId output);

/// Leaf (input or parameter) nodes that `node` depends on, ascending.
std::vector<NodeId> dependency_set(const TapeGraph& graph, NodeId node);

/// A recorded program plus the nodes a path table is reported for.
struct PathDemo {
  Tape tape;
  std::vector<NodeId> inputs;
  std::vector<NodeId> outputs;
};

/// Unrolled recurrent cell over `steps` separate input vectors; the single
/// output is the final state.
PathDemo build_rnn_demo(std::size_t steps, std::size_t input_dim, std::size_t hidden_dim,
                        std::uint64_t seed);
/// Full-scope self-attention over `rows` separate input vectors; one output
/// per attended row.
PathDemo build_attention_demo(std::size_t rows, std::size_t dim, std::uint64_t seed);

}  // namespace diffprog
