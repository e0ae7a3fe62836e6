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

#include "diffprog/program_analysis.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

#include "diffprog/ops.hpp"
#include "diffprog/param_store.hpp"
#include "diffprog/primitives.hpp"
#include "diffprog/rng.hpp"

namespace diffprog {

void TapeGraph::add(OpKind kind, std::vector<std::size_t> inputs, Shape shape) {
  const std::size_t id = kinds_.size();
  for (std::size_t in : inputs) {
    if (in >= id) {
      throw std::invalid_argument("edge " + std::to_string(in) + " -> " +
                                  std::to_string(id) + " violates topological order");
    }
    consumers_[in].push_back(id);
  }
  kinds_.push_back(kind);
  inputs_.push_back(std::move(inputs));
  consumers_.emplace_back();
  shapes_.push_back(std::move(shape));
}

TapeGraph TapeGraph::from_tape(const Tape& tape) {
  TapeGraph g;
  for (const auto& n : tape.nodes()) {
    std::vector<std::size_t> inputs;
    inputs.reserve(n.inputs.size());
    for (NodeId in : n.inputs) inputs.push_back(in.value);
    g.add(n.kind, std::move(inputs), n.value.shape());
  }
  return g;
}

namespace {

std::vector<std::size_t> parse_list(std::string_view body, char sep) {
  std::vector<std::size_t> out;
  std::string token;
  std::istringstream in{std::string(body)};
  while (std::getline(in, token, sep)) {
    if (token.empty()) continue;
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(token, &pos);
    if (pos != token.size()) throw std::invalid_argument("bad number '" + token + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

}  // namespace

TapeGraph TapeGraph::parse_dump(std::string_view text) {
  TapeGraph g;
  std::istringstream lines{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fail = [&](const std::string& why) {
      throw std::invalid_argument("tape dump line " + std::to_string(line_no) + ": " + why);
    };
    const auto open1 = line.find('[');
    const auto close1 = line.find(']', open1);
    const auto open2 = line.find('[', close1);
    const auto close2 = line.find(']', open2);
    if (open1 == std::string::npos || close1 == std::string::npos ||
        open2 == std::string::npos || close2 == std::string::npos) {
      fail("expected `id kind [inputs] shape`");
    }
    std::istringstream head(line.substr(0, open1));
    std::size_t id = 0;
    std::string kind;
    if (!(head >> id >> kind)) fail("missing id or kind");
    if (id != g.size()) fail("ids must be consecutive from 0");
    const auto parsed = kind_from_name(kind);
    if (!parsed) fail("unknown kind '" + kind + "'");
    try {
      auto inputs = parse_list(std::string_view(line).substr(open1 + 1, close1 - open1 - 1), ' ');
      auto shape = parse_list(std::string_view(line).substr(open2 + 1, close2 - open2 - 1), ',');
      g.add(*parsed, std::move(inputs), std::move(shape));
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    } catch (const std::out_of_range& e) {
      fail(e.what());
    }
  }
  return g;
}

void TapeGraph::check(NodeId id) const {
  if (id.value >= kinds_.size()) {
    throw std::out_of_range("node id " + std::to_string(id.value) + " not in tape graph");
  }
}

OpKind TapeGraph::kind(NodeId id) const {
  check(id);
  return kinds_[id.value];
}
const std::vector<std::size_t>& TapeGraph::inputs(NodeId id) const {
  check(id);
  return inputs_[id.value];
}
const std::vector<std::size_t>& TapeGraph::consumers(NodeId id) const {
  check(id);
  return consumers_[id.value];
}
const Shape& TapeGraph::shape(NodeId id) const {
  check(id);
  return shapes_[id.value];
}
bool TapeGraph::is_leaf(NodeId id) const {
  const OpKind k = kind(id);
  return k == OpKind::kInput || k == OpKind::kParameter;
}

std::optional<std::size_t> shortest_path_length(const TapeGraph& graph, NodeId from,
                                                NodeId to) {
  graph.kind(from);
  graph.kind(to);
  if (from == to) return 0;
  if (to < from) return std::nullopt;

  std::vector<std::size_t> dist(graph.size(), SIZE_MAX);
  std::deque<std::size_t> frontier{from.value};
  dist[from.value] = 0;
  while (!frontier.empty()) {
    const std::size_t u = frontier.front();
    frontier.pop_front();
    for (std::size_t c : graph.consumers(NodeId{u})) {
      if (c > to.value || dist[c] != SIZE_MAX) continue;
      dist[c] = dist[u] + 1;
      if (c == to.value) return dist[c];
      frontier.push_back(c);
    }
  }
  return std::nullopt;
}

bool PathProfile::symmetric() const {
  if (entries.empty()) return true;
  return std::all_of(entries.begin(), entries.end(),
                     [&](const Entry& e) { return e.hops == entries.front().hops; });
}

std::string PathProfile::table() const {
  std::ostringstream out;
  out << "input\toutput\thops\n";
  for (const auto& e : entries) {
    out << e.input.value << '\t' << output.value << '\t';
    if (e.hops) {
      out << *e.hops;
    } else {
      out << "unreachable";
    }
    out << '\n';
  }
  return out.str();
}

PathProfile path_profile(const TapeGraph& graph, std::span<const NodeId> inputs,
                         NodeId output) {
  PathProfile profile{output, {}};
  profile.entries.reserve(inputs.size());
  for (NodeId in : inputs) {
    profile.entries.push_back({in, shortest_path_length(graph, in, output)});
  }
  return profile;
}

std::vector<NodeId> dependency_set(const TapeGraph& graph, NodeId node) {
  graph.kind(node);
  std::vector<bool> seen(node.value + 1, false);
  std::vector<std::size_t> stack{node.value};
  seen[node.value] = true;
  std::vector<NodeId> leaves;
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    if (graph.is_leaf(NodeId{u})) leaves.push_back(NodeId{u});
    for (std::size_t in : graph.inputs(NodeId{u})) {
      if (!seen[in]) {
        seen[in] = true;
        stack.push_back(in);
      }
    }
  }
  std::sort(leaves.begin(), leaves.end());
  return leaves;
}

namespace {

Tensor random_tensor(Shape shape, Rng& rng) {
  Tensor t(std::move(shape));
  for (double& v : t.data()) v = rng.uniform(-0.5, 0.5);
  return t;
}

}  // namespace

PathDemo build_rnn_demo(std::size_t steps, std::size_t input_dim, std::size_t hidden_dim,
                        std::uint64_t seed) {
  Rng rng(seed);
  PathDemo demo;
  Tape& tape = demo.tape;
  const RnnParams p{tape.input(random_tensor({hidden_dim, input_dim}, rng)),
                    tape.input(random_tensor({hidden_dim, hidden_dim}, rng)),
                    tape.input(random_tensor({hidden_dim}, rng))};
  NodeId h = tape.input(Tensor({hidden_dim}));
  for (std::size_t t = 0; t < steps; ++t) {
    const NodeId x = tape.input(random_tensor({input_dim}, rng));
    demo.inputs.push_back(x);
    h = rnn_cell(tape, h, x, p);
  }
  demo.outputs.push_back(h);
  return demo;
}

PathDemo build_attention_demo(std::size_t rows, std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  PathDemo demo;
  Tape& tape = demo.tape;
  AttentionParams p{};
  for (NodeId* w : {&p.wq, &p.wk, &p.wv, &p.wo}) *w = tape.input(random_tensor({dim, dim}, rng));
  for (NodeId* b : {&p.bq, &p.bk, &p.bv, &p.bo}) *b = tape.input(random_tensor({dim}, rng));
  for (std::size_t i = 0; i < rows; ++i) {
    demo.inputs.push_back(tape.input(random_tensor({dim}, rng)));
  }
  const NodeId x = ops::stack_rows(tape, demo.inputs);
  const NodeId y = self_attention(tape, x, BoolMatrix::full(rows), p);
  for (std::size_t t = 0; t < rows; ++t) demo.outputs.push_back(ops::select_row(tape, y, t));
  return demo;
}

}  // namespace diffprog
