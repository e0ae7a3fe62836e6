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

// Independent reference implementations used by the tests. Nothing here calls
// into the kernels under test.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "diffprog/citation_graph.hpp"
#include "diffprog/rng.hpp"
#include "diffprog/sparse.hpp"
#include "diffprog/tape.hpp"
#include "diffprog/tensor.hpp"

namespace oracle {

using diffprog::Rng;
using diffprog::Tensor;

inline Tensor random_tensor(diffprog::Shape shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
  Tensor t(std::move(shape));
  for (double& v : t.data()) v = rng.uniform(lo, hi);
  return t;
}

/// Random values kept at least `gap` away from zero (relu kinks).
inline Tensor random_away_from_zero(diffprog::Shape shape, Rng& rng, double gap = 1e-3) {
  Tensor t(std::move(shape));
  for (double& v : t.data()) {
    do {
      v = rng.uniform(-1.0, 1.0);
    } while (std::abs(v) < gap);
  }
  return t;
}

inline Tensor triple_loop_matmul(const Tensor& a, const Tensor& b) {
  const std::size_t m = a.shape()[0], k = a.shape()[1], n = b.shape()[1];
  Tensor out({m, n});
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t p = 0; p < k; ++p) s += a.at(i, p) * b.at(p, j);
      out.at(i, j) = s;
    }
  }
  return out;
}

inline Tensor densify(std::size_t rows, std::size_t cols,
                      const std::vector<diffprog::SparseEntry>& entries) {
  Tensor out({rows, cols});
  for (const auto& e : entries) out.at(e.row, e.col) = e.value;
  return out;
}

inline std::vector<long double> softmax_ld(std::span<const double> row) {
  long double mx = row[0];
  for (double v : row) mx = std::max<long double>(mx, v);
  std::vector<long double> out(row.size());
  long double sum = 0.0L;
  for (std::size_t i = 0; i < row.size(); ++i) {
    out[i] = std::exp(static_cast<long double>(row[i]) - mx);
    sum += out[i];
  }
  for (auto& v : out) v /= sum;
  return out;
}

inline long double cross_entropy_ld(const Tensor& logits, std::span<const std::size_t> labels,
                                    std::span<const std::size_t> rows) {
  long double total = 0.0L;
  for (std::size_t r : rows) {
    const auto row = logits.row(r);
    long double mx = row[0];
    for (double v : row) mx = std::max<long double>(mx, v);
    long double s = 0.0L;
    for (double v : row) s += std::exp(static_cast<long double>(v) - mx);
    total += mx + std::log(s) - static_cast<long double>(row[labels[r]]);
  }
  return total / static_cast<long double>(rows.size());
}

/// Kahn's algorithm over the recorded edge list; true when every node is
/// emitted, i.e. there is no cycle.
inline bool acyclic(const diffprog::Tape& tape) {
  const auto& nodes = tape.nodes();
  std::vector<std::size_t> indegree(nodes.size(), 0);
  std::vector<std::vector<std::size_t>> out(nodes.size());
  for (const auto& n : nodes) {
    for (auto in : n.inputs) {
      out[in.value].push_back(n.id.value);
      ++indegree[n.id.value];
    }
  }
  std::deque<std::size_t> ready;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (indegree[i] == 0) ready.push_back(i);
  }
  std::size_t emitted = 0;
  while (!ready.empty()) {
    const std::size_t v = ready.front();
    ready.pop_front();
    ++emitted;
    for (std::size_t w : out[v]) {
      if (--indegree[w] == 0) ready.push_back(w);
    }
  }
  return emitted == nodes.size();
}

inline bool edges_ascend(const diffprog::Tape& tape) {
  for (const auto& n : tape.nodes()) {
    for (auto in : n.inputs) {
      if (!(in.value < n.id.value)) return false;
    }
  }
  return true;
}

/// Hop distances on the undirected simple graph of `g` from `source`;
/// unreachable nodes get SIZE_MAX.
inline std::vector<std::size_t> bfs_hops(const diffprog::graph::CitationGraph& g,
                                         std::size_t source) {
  std::vector<std::vector<std::size_t>> adj(g.num_nodes);
  for (const auto& e : g.edges) {
    adj[e.src].push_back(e.dst);
    adj[e.dst].push_back(e.src);
  }
  std::vector<std::size_t> dist(g.num_nodes, SIZE_MAX);
  std::deque<std::size_t> q{source};
  dist[source] = 0;
  while (!q.empty()) {
    const std::size_t v = q.front();
    q.pop_front();
    for (std::size_t w : adj[v]) {
      if (dist[w] == SIZE_MAX) {
        dist[w] = dist[v] + 1;
        q.push_back(w);
      }
    }
  }
  return dist;
}

/// Dense D̃^-1/2 (A + I) D̃^-1/2 computed with plain loops and pow.
inline Tensor dense_normalized_adjacency(const diffprog::graph::CitationGraph& g) {
  const std::size_t n = g.num_nodes;
  Tensor a({n, n});
  for (const auto& e : g.edges) a.at(e.src, e.dst) += 1.0;
  for (std::size_t i = 0; i < n; ++i) a.at(i, i) += 1.0;
  std::vector<double> deg(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) deg[i] += a.at(i, j);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      a.at(i, j) *= std::pow(deg[i], -0.5) * std::pow(deg[j], -0.5);
    }
  }
  return a;
}

/// Reachability by repeated boolean matrix products: reach[k][i][j] is true
/// iff a directed walk of exactly k edges leads from i to j. Returns the
/// smallest such k per pair (SIZE_MAX if none up to n-1).
inline std::vector<std::vector<std::size_t>> matrix_power_distances(const diffprog::Tape& tape) {
  const std::size_t n = tape.size();
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (const auto& node : tape.nodes()) {
    for (auto in : node.inputs) adj[in.value][node.id.value] = 1;
  }
  std::vector<std::vector<std::size_t>> dist(n, std::vector<std::size_t>(n, SIZE_MAX));
  std::vector<std::vector<char>> walk(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    walk[i][i] = 1;
    dist[i][i] = 0;
  }
  for (std::size_t k = 1; k < n; ++k) {
    std::vector<std::vector<char>> next(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t m = 0; m < n; ++m) {
        if (!walk[i][m]) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (adj[m][j]) next[i][j] = 1;
        }
      }
    }
    walk = std::move(next);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (walk[i][j] && dist[i][j] == SIZE_MAX) dist[i][j] = k;
      }
    }
  }
  return dist;
}

}  // namespace oracle
