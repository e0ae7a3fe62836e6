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

#include "diffprog/model.hpp"

#include <cmath>
#include <stdexcept>

#include "diffprog/kernels.hpp"

namespace diffprog {

std::string_view model_kind_name(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::kMlp2: return "mlp2";
    case ModelKind::kMlp3: return "mlp3";
    case ModelKind::kGcn2: return "gcn2";
    case ModelKind::kGcn3: return "gcn3";
    case ModelKind::kAttn: return "attn";
  }
  return "gcn2";
}

ModelKind parse_model_kind(std::string_view name) {
  for (ModelKind k : {ModelKind::kMlp2, ModelKind::kMlp3, ModelKind::kGcn2, ModelKind::kGcn3,
                      ModelKind::kAttn}) {
    if (model_kind_name(k) == name) return k;
  }
  throw std::invalid_argument("unknown model '" + std::string(name) + "'");
}

std::string_view scope_name(graph::Scope scope) noexcept {
  switch (scope) {
    case graph::Scope::kAll: return "all";
    case graph::Scope::kSelf: return "self";
    case graph::Scope::kNeighbors: return "neighbors";
  }
  return "all";
}

graph::Scope parse_scope(std::string_view name) {
  for (graph::Scope s : {graph::Scope::kAll, graph::Scope::kSelf, graph::Scope::kNeighbors}) {
    if (scope_name(s) == name) return s;
  }
  throw std::invalid_argument("unknown attention scope '" + std::string(name) + "'");
}

ModelConfig ModelConfig::canonical(ModelKind kind, std::string_view mask_spec) {
  ModelConfig c;
  c.kind = kind;
  switch (kind) {
    case ModelKind::kMlp2:
    case ModelKind::kGcn2: c.hidden_dims = {16}; break;
    case ModelKind::kMlp3: c.hidden_dims = {512, 256}; break;
    case ModelKind::kGcn3:
      c.hidden_dims = mask_spec == "train" ? std::vector<std::size_t>{16, 16}
                                           : std::vector<std::size_t>{256, 256};
      break;
    case ModelKind::kAttn: c.hidden_dims = {120}; break;
  }
  return c;
}

void ModelConfig::validate() const {
  const std::size_t want =
      (kind == ModelKind::kMlp3 || kind == ModelKind::kGcn3) ? 2 : 1;
  if (hidden_dims.size() != want) {
    throw std::invalid_argument(std::string(model_kind_name(kind)) + " needs " +
                                std::to_string(want) + " hidden dims, got " +
                                std::to_string(hidden_dims.size()));
  }
  for (std::size_t h : hidden_dims) {
    if (h == 0) throw std::invalid_argument("hidden dims must be positive");
  }
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw std::invalid_argument("dropout rate must be in [0, 1)");
  }
}

std::string ModelConfig::describe() const {
  std::string out(model_kind_name(kind));
  out += "(";
  for (std::size_t i = 0; i < hidden_dims.size(); ++i) {
    if (i) out += "x";
    out += std::to_string(hidden_dims[i]);
  }
  out += ")";
  if (kind == ModelKind::kAttn) {
    out += "/";
    out += scope_name(attn_scope);
  }
  return out;
}

std::size_t param_count(const ModelConfig& config, std::size_t feature_dim,
                        std::size_t num_classes) {
  config.validate();
  auto layer = [](std::size_t in, std::size_t out) { return in * out + out; };
  const auto& h = config.hidden_dims;
  switch (config.kind) {
    case ModelKind::kMlp2:
    case ModelKind::kGcn2: return layer(feature_dim, h[0]) + layer(h[0], num_classes);
    case ModelKind::kMlp3:
    case ModelKind::kGcn3:
      return layer(feature_dim, h[0]) + layer(h[0], h[1]) + layer(h[1], num_classes);
    case ModelKind::kAttn:
      return layer(feature_dim, h[0]) + 4 * layer(h[0], h[0]) + layer(h[0], num_classes);
  }
  return 0;
}

ModelInputs ModelInputs::from_graph(const graph::CitationGraph& g, const ModelConfig& config,
                                    bool normalize_features) {
  ModelInputs in;
  in.num_classes = g.num_classes;
  in.labels = std::make_shared<const std::vector<std::size_t>>(g.labels);
  if (normalize_features) {
    std::vector<SparseEntry> entries(g.features->entries().begin(), g.features->entries().end());
    std::vector<double> row_sum(g.num_nodes, 0.0);
    for (const auto& e : entries) row_sum[e.row] += e.value;
    for (auto& e : entries) {
      if (row_sum[e.row] != 0.0) e.value /= row_sum[e.row];
    }
    in.features = std::make_shared<const SparseMatrix>(g.num_nodes, g.feature_dim,
                                                       std::move(entries));
  } else {
    in.features = g.features;
  }
  if (config.kind == ModelKind::kGcn2 || config.kind == ModelKind::kGcn3) {
    in.adjacency = std::make_shared<const SparseMatrix>(graph::normalize_adjacency(g, true));
  }
  if (config.kind == ModelKind::kAttn) {
    in.scope = std::make_shared<const AttentionPattern>(
        AttentionPattern::from_mask(graph::scope_mask(g, config.attn_scope)));
  }
  return in;
}

namespace {

Tensor glorot(std::size_t rows, std::size_t cols, std::size_t fan_in, std::size_t fan_out,
              Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Tensor t({rows, cols});
  for (double& v : t.data()) v = rng.uniform(-limit, limit);
  return t;
}

}  // namespace

Model::Model(ModelConfig config, ModelInputs inputs, std::uint64_t seed)
    : config_(std::move(config)), inputs_(std::move(inputs)) {
  config_.validate();
  if (!inputs_.features) throw std::invalid_argument("model inputs lack features");
  Rng rng(seed);
  const std::size_t f = inputs_.features->cols();
  const std::size_t c = inputs_.num_classes;
  const auto& h = config_.hidden_dims;
  switch (config_.kind) {
    case ModelKind::kMlp2:
      add_dense("layer0", f, h[0], rng);
      add_dense("layer1", h[0], c, rng);
      break;
    case ModelKind::kMlp3:
      add_dense("layer0", f, h[0], rng);
      add_dense("layer1", h[0], h[1], rng);
      add_dense("layer2", h[1], c, rng);
      break;
    case ModelKind::kGcn2:
      if (!inputs_.adjacency) throw std::invalid_argument("gcn model needs an adjacency");
      add_gcn("layer0", f, h[0], rng);
      add_gcn("layer1", h[0], c, rng);
      break;
    case ModelKind::kGcn3:
      if (!inputs_.adjacency) throw std::invalid_argument("gcn model needs an adjacency");
      add_gcn("layer0", f, h[0], rng);
      add_gcn("layer1", h[0], h[1], rng);
      add_gcn("layer2", h[1], c, rng);
      break;
    case ModelKind::kAttn: {
      if (!inputs_.scope) throw std::invalid_argument("attention model needs a scope");
      const std::size_t d = h[0];
      add_dense("layer0", f, d, rng);
      for (const char* proj : {"attn.q", "attn.k", "attn.v", "attn.o"}) {
        add_dense(proj, d, d, rng);
      }
      add_dense("layer1", d, c, rng);
      break;
    }
  }
}

void Model::add_dense(const std::string& name, std::size_t in, std::size_t out, Rng& rng) {
  params_.add(name + ".weight", glorot(out, in, in, out, rng));
  params_.add(name + ".bias", Tensor({out}));
}

void Model::add_gcn(const std::string& name, std::size_t in, std::size_t out, Rng& rng) {
  params_.add(name + ".weight", glorot(in, out, in, out, rng));
  params_.add(name + ".bias", Tensor({out}));
}

DenseParams Model::dense_params(Tape& tape, const std::string& name) {
  return {tape.parameter(params_, name + ".weight"), tape.parameter(params_, name + ".bias")};
}

GcnParams Model::gcn_params(Tape& tape, const std::string& name) {
  return {tape.parameter(params_, name + ".weight"), tape.parameter(params_, name + ".bias")};
}

NodeId Model::forward(Tape& tape, bool training, Rng& dropout_rng) {
  const auto& x = inputs_.features;
  const double p = config_.dropout_rate;
  switch (config_.kind) {
    case ModelKind::kMlp2: {
      const NodeId h = dense(tape, x, dense_params(tape, "layer0"), Activation::kRelu);
      return dense(tape, h, dense_params(tape, "layer1"), Activation::kNone);
    }
    case ModelKind::kMlp3: {
      NodeId h = dense(tape, x, dense_params(tape, "layer0"), Activation::kRelu);
      h = dense(tape, h, dense_params(tape, "layer1"), Activation::kRelu);
      return dense(tape, h, dense_params(tape, "layer2"), Activation::kNone);
    }
    case ModelKind::kGcn2: {
      NodeId h = gcn_layer(tape, x, inputs_.adjacency, gcn_params(tape, "layer0"),
                           Activation::kRelu);
      h = dropout(tape, h, p, training, dropout_rng);
      return gcn_layer(tape, h, inputs_.adjacency, gcn_params(tape, "layer1"),
                       Activation::kNone);
    }
    case ModelKind::kGcn3: {
      NodeId h = gcn_layer(tape, x, inputs_.adjacency, gcn_params(tape, "layer0"),
                           Activation::kRelu);
      h = gcn_layer(tape, h, inputs_.adjacency, gcn_params(tape, "layer1"), Activation::kRelu);
      return gcn_layer(tape, h, inputs_.adjacency, gcn_params(tape, "layer2"),
                       Activation::kNone);
    }
    case ModelKind::kAttn: {
      NodeId h = dense(tape, x, dense_params(tape, "layer0"), Activation::kNone);
      const DenseParams q = dense_params(tape, "attn.q");
      const DenseParams k = dense_params(tape, "attn.k");
      const DenseParams v = dense_params(tape, "attn.v");
      const DenseParams o = dense_params(tape, "attn.o");
      const AttentionParams ap{q.weight, k.weight, v.weight, o.weight,
                               q.bias,   k.bias,   v.bias,   o.bias};
      h = self_attention(tape, h, inputs_.scope, ap);
      h = dropout(tape, h, p, training, dropout_rng);
      return dense(tape, h, dense_params(tape, "layer1"), Activation::kNone);
    }
  }
  throw std::logic_error("unhandled model kind");
}

Tensor Model::logits() {
  Tape tape;
  Rng unused(0);
  return tape.value(forward(tape, /*training=*/false, unused));
}

Model build_model(const ModelConfig& config, const graph::CitationGraph& g, std::uint64_t seed,
                  bool normalize_features) {
  config.validate();
  return Model(config, ModelInputs::from_graph(g, config, normalize_features), seed);
}

}  // namespace diffprog
