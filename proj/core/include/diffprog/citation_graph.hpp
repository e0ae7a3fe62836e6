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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string_view>
#include <vector>

#include "diffprog/sparse.hpp"
#include "diffprog/tensor.hpp"

namespace diffprog::graph {

struct Edge {
  std::size_t src;
  std::size_t dst;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct Splits {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;

  bool operator==(const Splits&) const = default;
};

/// Node-classification dataset: directed edge entries, sparse features,
/// one label per node and the named splits. Features are shared between a
/// graph and the perturbed copies derived from it.
struct CitationGraph {
  std::size_t num_nodes = 0;
  std::size_t num_classes = 0;
  std::size_t feature_dim = 0;
  std::vector<Edge> edges;
  std::shared_ptr<const SparseMatrix> features;
  std::vector<std::size_t> labels;
  Splits splits;

  /// Bounds, label range, split disjointness and, when asked, edge symmetry.
  /// Throws std::invalid_argument describing the first violation.
  void validate(bool require_symmetric) const;
};

struct GraphStats {
  std::size_t num_nodes = 0;
  std::size_t directed_edge_entries = 0;
  double average_degree = 0.0;
  double average_clustering = 0.0;
  std::size_t isolated_nodes = 0;
};

/// Reads the neutral dataset directory (header.json, edges.tsv, features.tsv,
/// labels.tsv, splits.json). Throws std::runtime_error for a missing or
/// unreadable file and std::invalid_argument for any content violation.
CitationGraph load(const std::filesystem::path& dir);

/// Writes the neutral format. Loading and saving again is byte-identical.
void save(const CitationGraph& g, const std::filesystem::path& dir);

GraphStats stats(const CitationGraph& g);

/// With self-loops: D̃^-1/2 (A + I) D̃^-1/2. Without: D^-1/2 A D^-1/2, isolated
/// rows left empty. Repeated edge entries add up in A.
SparseMatrix normalize_adjacency(const CitationGraph& g, bool add_self_loops);

/// Same number of directed entries, each with endpoints drawn uniformly
/// (src != dst). Not symmetrized.
CitationGraph randomize_edges(const CitationGraph& g, std::uint64_t seed);

/// Drops round(fraction * U) of the U undirected pairs, both directions.
CitationGraph remove_edges(const CitationGraph& g, double fraction, std::uint64_t seed);

enum class Scope { kAll, kSelf, kNeighbors };

/// mask(u, v) iff (u, v) is an edge entry, or u == v when include_self.
BoolMatrix neighbor_mask(const CitationGraph& g, bool include_self);
/// kAll: full, kSelf: diagonal, kNeighbors: neighbor_mask with self.
BoolMatrix scope_mask(const CitationGraph& g, Scope scope);

/// "train" | "val" | "test" | "first:N" (indices 0..N-1, 1 <= N <= num_nodes).
std::vector<std::size_t> mask_from_spec(const CitationGraph& g, std::string_view spec);

}  // namespace diffprog::graph
