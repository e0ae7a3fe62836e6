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

// Two-layer GCN locality: a node's logits must not move, bit for bit, when
// only the features of nodes more than two hops away change.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "diffprog/model.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

namespace locality {

struct Result {
  std::size_t nodes_checked = 0;
  std::size_t nodes_with_far_set = 0;
  std::size_t violations = 0;
  // Perturbing a node within reach did move the output (sanity).
  std::size_t near_moves = 0;
};

inline diffprog::graph::CitationGraph with_perturbed_features(
    const diffprog::graph::CitationGraph& g, const std::vector<bool>& touch, diffprog::Rng& rng) {
  std::vector<diffprog::SparseEntry> entries;
  for (const auto& e : g.features->entries()) {
    if (!touch[e.row]) entries.push_back(e);
  }
  for (std::size_t v = 0; v < g.num_nodes; ++v) {
    if (!touch[v]) continue;
    for (std::size_t f = 0; f < g.feature_dim; ++f) {
      if (rng.uniform() < 0.5) entries.push_back({v, f, rng.uniform(0.1, 3.0)});
    }
  }
  auto out = g;
  out.features = std::make_shared<const diffprog::SparseMatrix>(g.num_nodes, g.feature_dim,
                                                                std::move(entries));
  return out;
}

inline Result check_two_layer_gcn(std::size_t nodes, double p, std::uint64_t seed) {
  using namespace diffprog;
  const auto g = synthetic::random_graph(nodes, p, 8, seed);
  ModelConfig config = ModelConfig::canonical(ModelKind::kGcn2);
  Model base = build_model(config, g, seed);
  const Tensor reference = base.logits();
  Rng rng(seed + 17);
  Result r;
  for (std::size_t v = 0; v < g.num_nodes; ++v) {
    ++r.nodes_checked;
    const auto hops = oracle::bfs_hops(g, v);
    std::vector<bool> far(g.num_nodes), near(g.num_nodes);
    bool any_far = false;
    for (std::size_t u = 0; u < g.num_nodes; ++u) {
      far[u] = hops[u] > 2;
      near[u] = hops[u] <= 2;
      any_far = any_far || far[u];
    }
    if (!any_far) continue;
    ++r.nodes_with_far_set;
    Model moved = build_model(config, with_perturbed_features(g, far, rng), seed);
    const Tensor out = moved.logits();
    if (!std::equal(out.row(v).begin(), out.row(v).end(), reference.row(v).begin())) {
      ++r.violations;
    }
    Model touched = build_model(config, with_perturbed_features(g, near, rng), seed);
    const Tensor out_near = touched.logits();
    if (!std::equal(out_near.row(v).begin(), out_near.row(v).end(), reference.row(v).begin())) {
      ++r.near_moves;
    }
  }
  return r;
}

}  // namespace locality
