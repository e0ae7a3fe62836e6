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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "diffprog/citation_graph.hpp"
#include "diffprog/model.hpp"

namespace diffprog {

enum class Optimizer { kSgd, kAdam };

std::string_view optimizer_name(Optimizer o) noexcept;
Optimizer parse_optimizer(std::string_view name);

/// Training recipe. The defaults are the usual citation-network baseline
/// settings.
struct Hyperparams {
  Optimizer optimizer = Optimizer::kAdam;
  double lr = 0.01;
  double weight_decay = 5e-4;
  std::size_t epochs = 200;
  std::uint64_t seed = 0;
  bool normalize_features = true;

  void validate() const;
};

struct RunReport {
  ModelConfig config;
  std::string mask;
  std::string edges = "none";
  std::uint64_t seed = 0;
  std::vector<double> train_loss;
  double test_accuracy = 0.0;
  std::size_t param_count = 0;
  double seconds = 0.0;
};

/// Fraction of `rows` whose argmax logit equals the label. Ties go to the
/// lowest class id. Throws std::invalid_argument for an empty row set.
double accuracy(const Tensor& logits, std::span<const std::size_t> labels,
                std::span<const std::size_t> rows);

/// Inference-mode accuracy of `model` on the rows named by `mask_spec`.
double evaluate(Model& model, const graph::CitationGraph& g, std::string_view mask_spec);

/// Applies an edge perturbation: "none", "random" or "remove:F" with F a
/// fraction in [0, 1] (or a percentage written "remove:20%").
graph::CitationGraph perturb_edges(const graph::CitationGraph& g, std::string_view spec,
                                   std::uint64_t seed);

/// Full-batch training: one fresh tape per epoch, cross-entropy over the
/// masked nodes, one optimizer step, then test-split accuracy after the last
/// epoch. Deterministic for a given (config, graph, mask, hyperparams).
RunReport train(const ModelConfig& config, const graph::CitationGraph& g,
                std::string_view mask_spec, const Hyperparams& hyper);

/// One optimizer epoch on an already-built model; returns the training loss.
double train_epoch(Model& model, std::span<const std::size_t> train_rows,
                   const Hyperparams& hyper, Rng& dropout_rng);

}  // namespace diffprog
