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

#include "diffprog/training.hpp"

#include <charconv>
#include <chrono>
#include <stdexcept>

#include "diffprog/optim.hpp"
#include "diffprog/primitives.hpp"

namespace diffprog {

std::string_view optimizer_name(Optimizer o) noexcept {
  return o == Optimizer::kSgd ? "sgd" : "adam";
}

Optimizer parse_optimizer(std::string_view name) {
  if (name == "sgd") return Optimizer::kSgd;
  if (name == "adam") return Optimizer::kAdam;
  throw std::invalid_argument("unknown optimizer '" + std::string(name) + "'");
}

void Hyperparams::validate() const {
  if (epochs < 1) throw std::invalid_argument("epochs must be at least 1");
  if (!(lr >= 0.0)) throw std::invalid_argument("learning rate must be non-negative");
  if (!(weight_decay >= 0.0)) throw std::invalid_argument("weight decay must be non-negative");
}

double accuracy(const Tensor& logits, std::span<const std::size_t> labels,
                std::span<const std::size_t> rows) {
  if (rows.empty()) throw std::invalid_argument("accuracy over an empty mask");
  std::size_t correct = 0;
  for (std::size_t r : rows) {
    const auto row = logits.row(r);
    std::size_t best = 0;
    for (std::size_t j = 1; j < row.size(); ++j) {
      if (row[j] > row[best]) best = j;
    }
    if (best == labels[r]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(rows.size());
}

double evaluate(Model& model, const graph::CitationGraph& g, std::string_view mask_spec) {
  const auto rows = graph::mask_from_spec(g, mask_spec);
  return accuracy(model.logits(), g.labels, rows);
}

graph::CitationGraph perturb_edges(const graph::CitationGraph& g, std::string_view spec,
                                   std::uint64_t seed) {
  if (spec == "none") return g;
  if (spec == "random") return graph::randomize_edges(g, seed);
  constexpr std::string_view prefix = "remove:";
  if (spec.substr(0, prefix.size()) == prefix) {
    std::string_view number = spec.substr(prefix.size());
    const bool percent = !number.empty() && number.back() == '%';
    if (percent) number.remove_suffix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), value);
    if (number.empty() || ec != std::errc() || ptr != number.data() + number.size()) {
      throw std::invalid_argument("bad edge spec '" + std::string(spec) + "'");
    }
    return graph::remove_edges(g, percent ? value / 100.0 : value, seed);
  }
  throw std::invalid_argument("unknown edge spec '" + std::string(spec) + "'");
}

double train_epoch(Model& model, std::span<const std::size_t> train_rows,
                   const Hyperparams& hyper, Rng& dropout_rng) {
  auto& params = model.params();
  params.zero_grad();
  Tape tape;
  const NodeId logits = model.forward(tape, /*training=*/true, dropout_rng);
  const NodeId loss = cross_entropy(
      tape, logits, model.inputs().labels,
      std::make_shared<const std::vector<std::size_t>>(train_rows.begin(), train_rows.end()));
  const double value = tape.value(loss)[0];
  tape.backward(loss);
  if (hyper.optimizer == Optimizer::kSgd) {
    sgd_step(params, hyper.lr);
  } else {
    adam_step(params, AdamOptions{hyper.lr, 0.9, 0.999, 1e-8, hyper.weight_decay});
  }
  return value;
}

RunReport train(const ModelConfig& config, const graph::CitationGraph& g,
                std::string_view mask_spec, const Hyperparams& hyper) {
  hyper.validate();
  const auto start = std::chrono::steady_clock::now();
  const auto train_rows = graph::mask_from_spec(g, mask_spec);
  const auto test_rows = graph::mask_from_spec(g, "test");

  Model model = build_model(config, g, hyper.seed, hyper.normalize_features);
  Rng dropout_rng(hyper.seed ^ 0x9e3779b97f4a7c15ULL);

  RunReport report;
  report.config = config;
  report.mask = std::string(mask_spec);
  report.seed = hyper.seed;
  report.param_count = model.params().parameter_count();
  report.train_loss.reserve(hyper.epochs);
  for (std::size_t epoch = 0; epoch < hyper.epochs; ++epoch) {
    report.train_loss.push_back(train_epoch(model, train_rows, hyper, dropout_rng));
  }
  report.test_accuracy = accuracy(model.logits(), g.labels, test_rows);
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace diffprog
