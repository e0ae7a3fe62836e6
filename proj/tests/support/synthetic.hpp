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

// Small seeded citation-like graphs for end-to-end tests.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <set>
#include <utility>
#include <vector>

#include "diffprog/citation_graph.hpp"
#include "diffprog/rng.hpp"

namespace synthetic {

struct Options {
  std::size_t nodes = 120;
  std::size_t classes = 3;
  std::size_t features = 40;
  double p_in = 0.08;
  double p_out = 0.005;
  /// Each node switches on this many features of its own class block and
  /// `noise_words` uniformly random ones.
  std::size_t class_words = 3;
  std::size_t noise_words = 3;
  std::size_t train = 30;
  std::size_t val = 30;
  std::size_t test = 60;
  std::uint64_t seed = 1;
};

/// Planted-partition graph: labels are i % classes, intra-class pairs are
/// linked with p_in and inter-class pairs with p_out, features are sparse
/// binary words biased toward a per-class block. Splits are consecutive:
/// train first, then val, then test.
inline diffprog::graph::CitationGraph planted(const Options& o) {
  diffprog::Rng rng(o.seed);
  diffprog::graph::CitationGraph g;
  g.num_nodes = o.nodes;
  g.num_classes = o.classes;
  g.feature_dim = o.features;
  g.labels.resize(o.nodes);
  for (std::size_t i = 0; i < o.nodes; ++i) g.labels[i] = i % o.classes;

  for (std::size_t u = 0; u < o.nodes; ++u) {
    for (std::size_t v = u + 1; v < o.nodes; ++v) {
      const double p = g.labels[u] == g.labels[v] ? o.p_in : o.p_out;
      if (rng.uniform() < p) {
        g.edges.push_back({u, v});
        g.edges.push_back({v, u});
      }
    }
  }
  std::sort(g.edges.begin(), g.edges.end());

  const std::size_t block = std::max<std::size_t>(1, o.features / o.classes);
  std::vector<diffprog::SparseEntry> entries;
  for (std::size_t i = 0; i < o.nodes; ++i) {
    std::set<std::size_t> words;
    for (std::size_t k = 0; k < o.class_words; ++k) {
      words.insert(std::min(o.features - 1, g.labels[i] * block + rng.below(block)));
    }
    for (std::size_t k = 0; k < o.noise_words; ++k) words.insert(rng.below(o.features));
    for (std::size_t w : words) entries.push_back({i, w, 1.0});
  }
  g.features = std::make_shared<const diffprog::SparseMatrix>(o.nodes, o.features,
                                                              std::move(entries));
  std::size_t next = 0;
  for (std::size_t i = 0; i < o.train; ++i) g.splits.train.push_back(next++);
  for (std::size_t i = 0; i < o.val; ++i) g.splits.val.push_back(next++);
  for (std::size_t i = 0; i < o.test; ++i) g.splits.test.push_back(next++);
  return g;
}

/// Erdős-Rényi graph with random features, used for locality checks.
inline diffprog::graph::CitationGraph random_graph(std::size_t n, double p, std::size_t features,
                                                   std::uint64_t seed) {
  Options o;
  o.nodes = n;
  o.classes = 2;
  o.features = features;
  o.p_in = p;
  o.p_out = p;
  o.train = n / 3;
  o.val = n / 3;
  o.test = n - 2 * (n / 3);
  o.seed = seed;
  return planted(o);
}

}  // namespace synthetic
