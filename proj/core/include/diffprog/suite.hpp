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
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "diffprog/citation_graph.hpp"
#include "diffprog/model.hpp"
#include "diffprog/training.hpp"

namespace diffprog {

/// One experiment configuration, repeated once per seed.
struct SuiteCell {
  std::string name;
  ModelConfig config;
  std::string mask = "train";
  std::string edges = "none";
  std::vector<std::uint64_t> seeds{0};
  Hyperparams hyper;
};

struct SuiteSpec {
  std::vector<SuiteCell> cells;
};

/// Parses a suite description:
///
///   {"defaults": {"epochs": 200, "seeds": [0, 1, 2, 3, 4], ...},
///    "cells": [{"model": "gcn2", "mask": "first:400", "edges": "remove:0.5"}, ...]}
///
/// Recognized keys (defaults or cell): name, model, hidden, attn_scope,
/// dropout, mask, edges, seeds, optimizer, lr, weight_decay, epochs,
/// normalize_features. Unknown keys, bad values or a missing model throw
/// std::invalid_argument.
SuiteSpec parse_suite_spec(std::string_view json_text);
SuiteSpec load_suite_spec(const std::filesystem::path& file);

struct CellResult {
  SuiteCell cell;
  std::vector<RunReport> runs;

  double mean_accuracy() const;
};

struct SuiteOptions {
  /// Worker threads; 0 picks the hardware concurrency.
  std::size_t jobs = 0;
  /// Called after each finished run, serialized across workers.
  std::function<void(const SuiteCell&, const RunReport&)> on_run;
};

/// Runs every (cell, seed) pair. Edge perturbations are drawn with the run
/// seed. Runs are independent, so the result does not depend on `jobs`.
std::vector<CellResult> run_suite(const SuiteSpec& spec, const graph::CitationGraph& g,
                                  const SuiteOptions& options = {});

/// A single run, including the edge perturbation.
RunReport run_cell(const SuiteCell& cell, const graph::CitationGraph& g, std::uint64_t seed);

/// One CSV row per run; header line first.
std::string suite_csv(const std::vector<CellResult>& results);
std::string report_json(const RunReport& report);

}  // namespace diffprog
