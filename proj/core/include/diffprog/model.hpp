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
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "diffprog/citation_graph.hpp"
#include "diffprog/param_store.hpp"
#include "diffprog/primitives.hpp"
#include "diffprog/rng.hpp"
#include "diffprog/tape.hpp"

namespace diffprog {

enum class ModelKind { kMlp2, kMlp3, kGcn2, kGcn3, kAttn };

std::string_view model_kind_name(ModelKind kind) noexcept;
/// Throws std::invalid_argument for an unknown name.
ModelKind parse_model_kind(std::string_view name);
std::string_view scope_name(graph::Scope scope) noexcept;
graph::Scope parse_scope(std::string_view name);

inline constexpr std::size_t kCiteSeerFeatures = 3703;
inline constexpr std::size_t kCiteSeerClasses = 6;

/// Declarative model description.
///
/// mlp2:  dense(F->h0, relu) -> dense(h0->C)
/// mlp3:  dense(F->h0, relu) -> dense(h0->h1, relu) -> dense(h1->C)
/// gcn2:  gcn(F->h0, relu) -> dropout -> gcn(h0->C)
/// gcn3:  gcn(F->h0, relu) -> gcn(h0->h1, relu) -> gcn(h1->C)
/// attn:  dense(F->h0) -> self_attention(h0, scope) -> dropout -> dense(h0->C)
struct ModelConfig {
  ModelKind kind = ModelKind::kGcn2;
  std::vector<std::size_t> hidden_dims;
  graph::Scope attn_scope = graph::Scope::kAll;
  double dropout_rate = 0.5;

  /// Default hidden sizes: mlp2/gcn2 {16}, mlp3 {512, 256}, attn {120},
  /// gcn3 {16, 16} for the standard train split and {256, 256} otherwise.
  static ModelConfig canonical(ModelKind kind, std::string_view mask_spec = "train");

  /// Throws std::invalid_argument if the hidden list does not fit the kind.
  void validate() const;
  std::string describe() const;
};

/// Scalar parameter count build_model would allocate for the given input
/// and class dimensions.
std::size_t param_count(const ModelConfig& config, std::size_t feature_dim = kCiteSeerFeatures,
                        std::size_t num_classes = kCiteSeerClasses);

/// Graph-derived constants a model reads during the forward pass.
struct ModelInputs {
  std::shared_ptr<const SparseMatrix> features;
  std::shared_ptr<const SparseMatrix> adjacency;
  std::shared_ptr<const AttentionPattern> scope;
  std::shared_ptr<const std::vector<std::size_t>> labels;
  std::size_t num_classes = 0;

  /// Row-normalizes features when asked; builds only what `config` needs.
  static ModelInputs from_graph(const graph::CitationGraph& g, const ModelConfig& config,
                                bool normalize_features);
};

/// A built model: its parameter store and its forward procedure. Weights use
/// seeded uniform Glorot initialization, biases start at zero.
class Model {
 public:
  Model(ModelConfig config, ModelInputs inputs, std::uint64_t seed);

  /// Records the forward pass and returns the logits node [N, C].
  NodeId forward(Tape& tape, bool training, Rng& dropout_rng);
  /// Inference-mode logits.
  Tensor logits();

  ParamStore& params() noexcept { return params_; }
  const ParamStore& params() const noexcept { return params_; }
  const ModelConfig& config() const noexcept { return config_; }
  const ModelInputs& inputs() const noexcept { return inputs_; }

 private:
  void add_dense(const std::string& name, std::size_t in, std::size_t out, Rng& rng);
  void add_gcn(const std::string& name, std::size_t in, std::size_t out, Rng& rng);
  DenseParams dense_params(Tape& tape, const std::string& name);
  GcnParams gcn_params(Tape& tape, const std::string& name);

  ModelConfig config_;
  ModelInputs inputs_;
  ParamStore params_;
};

Model build_model(const ModelConfig& config, const graph::CitationGraph& g, std::uint64_t seed,
                  bool normalize_features = true);

}  // namespace diffprog
