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

// Command-line front end: dataset statistics, single training runs, suites,
// tape path tables and the two-asset decision rule.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "diffprog/citation_graph.hpp"
#include "diffprog/decision.hpp"
#include "diffprog/program_analysis.hpp"
#include "diffprog/suite.hpp"
#include "diffprog/training.hpp"

namespace {

using namespace diffprog;

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

int cmd_stats(const std::string& dir) {
  const graph::CitationGraph g = graph::load(dir);
  const graph::GraphStats s = graph::stats(g);
  std::printf("nodes                  %zu\n", s.num_nodes);
  std::printf("classes                %zu\n", g.num_classes);
  std::printf("features               %zu\n", g.feature_dim);
  std::printf("directed edge entries  %zu\n", s.directed_edge_entries);
  std::printf("average degree         %.4f\n", s.average_degree);
  std::printf("average clustering     %.4f\n", s.average_clustering);
  std::printf("isolated nodes         %zu\n", s.isolated_nodes);
  std::printf("splits                 %zu/%zu/%zu\n", g.splits.train.size(),
              g.splits.val.size(), g.splits.test.size());
  return 0;
}

struct TrainArgs {
  std::string data = "data/citeseer";
  std::string model = "gcn2";
  std::string mask = "train";
  std::string edges = "none";
  std::string scope = "all";
  std::vector<std::size_t> hidden;
  std::string optimizer = "adam";
  std::uint64_t seed = 0;
  std::size_t epochs = 200;
  double lr = 0.01;
  double weight_decay = 5e-4;
  double dropout = 0.5;
  bool raw_features = false;
  std::string out;
};

int cmd_train(const TrainArgs& a) {
  SuiteCell cell;
  cell.mask = a.mask;
  cell.edges = a.edges;
  cell.config = ModelConfig::canonical(parse_model_kind(a.model), a.mask);
  if (!a.hidden.empty()) cell.config.hidden_dims = a.hidden;
  cell.config.attn_scope = parse_scope(a.scope);
  cell.config.dropout_rate = a.dropout;
  cell.config.validate();
  cell.hyper.optimizer = parse_optimizer(a.optimizer);
  cell.hyper.epochs = a.epochs;
  cell.hyper.lr = a.lr;
  cell.hyper.weight_decay = a.weight_decay;
  cell.hyper.normalize_features = !a.raw_features;

  const graph::CitationGraph g = graph::load(a.data);
  const RunReport report = run_cell(cell, g, a.seed);
  write_output(a.out, report_json(report));
  std::fprintf(stderr, "%s mask=%s edges=%s seed=%llu test_accuracy=%.4f\n",
               cell.config.describe().c_str(), a.mask.c_str(), a.edges.c_str(),
               static_cast<unsigned long long>(a.seed), report.test_accuracy);
  return 0;
}

int cmd_suite(const std::string& spec_file, const std::string& data, const std::string& out,
              std::size_t jobs) {
  const SuiteSpec spec = load_suite_spec(spec_file);
  const graph::CitationGraph g = graph::load(data);
  SuiteOptions options;
  options.jobs = jobs;
  options.on_run = [](const SuiteCell& cell, const RunReport& r) {
    std::fprintf(stderr, "%-40s seed=%-3llu acc=%.4f (%.1fs)\n", cell.name.c_str(),
                 static_cast<unsigned long long>(r.seed), r.test_accuracy, r.seconds);
  };
  const auto results = run_suite(spec, g, options);
  write_output(out, suite_csv(results));
  for (const auto& res : results) {
    std::fprintf(stderr, "%-40s mean=%.4f over %zu seeds\n", res.cell.name.c_str(),
                 res.mean_accuracy(), res.runs.size());
  }
  return 0;
}

int cmd_paths(const std::string& demo, std::size_t length, std::size_t dim) {
  PathDemo d = demo == "rnn" ? build_rnn_demo(length, dim, dim, 0)
                             : build_attention_demo(length, dim, 0);
  const TapeGraph graph = TapeGraph::from_tape(d.tape);
  for (NodeId out : d.outputs) {
    const PathProfile profile = path_profile(graph, d.inputs, out);
    std::cout << profile.table();
    std::cout << "symmetric: " << (profile.symmetric() ? "yes" : "no") << "\n\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"diffprog: differentiable programs on citation graphs"};
  app.require_subcommand(1);

  std::string stats_dir;
  auto* stats = app.add_subcommand("stats", "Print dataset statistics");
  stats->add_option("data-dir", stats_dir, "Neutral-format dataset directory")->required();

  TrainArgs t;
  auto* train = app.add_subcommand("train", "Train one model and write a JSON report");
  train->add_option("--data", t.data, "Dataset directory")->capture_default_str();
  train->add_option("--model", t.model, "mlp2|mlp3|gcn2|gcn3|attn")
      ->check(CLI::IsMember({"mlp2", "mlp3", "gcn2", "gcn3", "attn"}))
      ->capture_default_str();
  train->add_option("--mask", t.mask, "train|val|test|first:N")->capture_default_str();
  train->add_option("--edges", t.edges, "none|random|remove:P")->capture_default_str();
  train->add_option("--attn-scope", t.scope, "all|self|neighbors")
      ->check(CLI::IsMember({"all", "self", "neighbors"}))
      ->capture_default_str();
  train->add_option("--hidden", t.hidden, "Hidden sizes (default: canonical)");
  train->add_option("--optimizer", t.optimizer, "adam|sgd")
      ->check(CLI::IsMember({"adam", "sgd"}))
      ->capture_default_str();
  train->add_option("--seed", t.seed)->capture_default_str();
  train->add_option("--epochs", t.epochs)->check(CLI::PositiveNumber)->capture_default_str();
  train->add_option("--lr", t.lr)->check(CLI::NonNegativeNumber)->capture_default_str();
  train->add_option("--weight-decay", t.weight_decay)
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  train->add_option("--dropout", t.dropout)->check(CLI::Range(0.0, 0.999999))->capture_default_str();
  train->add_flag("--raw-features", t.raw_features, "Skip row normalization of features");
  train->add_option("--out", t.out, "Report path (stdout if omitted)");

  std::string spec_file;
  std::string suite_data = "data/citeseer";
  std::string suite_out;
  std::size_t jobs = 0;
  auto* suite = app.add_subcommand("suite", "Run an experiment suite and write a CSV table");
  suite->add_option("--spec", spec_file, "Suite JSON")->required();
  suite->add_option("--data", suite_data, "Dataset directory")->capture_default_str();
  suite->add_option("--out", suite_out, "CSV path (stdout if omitted)");
  suite->add_option("--jobs", jobs, "Worker threads (0 = all cores)")->capture_default_str();

  std::string demo;
  std::size_t length = 0;
  std::size_t dim = 4;
  auto* paths = app.add_subcommand("paths", "Print tape path-length tables for a demo program");
  paths->add_option("--demo", demo, "rnn|attention")
      ->required()
      ->check(CLI::IsMember({"rnn", "attention"}));
  paths->add_option("--length", length, "Steps (rnn, default 6) or rows (attention, default 5)");
  paths->add_option("--dim", dim, "Vector width")->check(CLI::PositiveNumber)->capture_default_str();

  double p1 = 0.0;
  double p2 = 0.0;
  auto* decide = app.add_subcommand("decide", "Two-asset buy/hold/sell rule");
  decide->add_option("--p1", p1, "Predicted trend of asset 1")->required();
  decide->add_option("--p2", p2, "Predicted trend of asset 2")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (stats->parsed()) return cmd_stats(stats_dir);
    if (train->parsed()) return cmd_train(t);
    if (suite->parsed()) return cmd_suite(spec_file, suite_data, suite_out, jobs);
    if (paths->parsed()) {
      if (length == 0) length = demo == "rnn" ? 6 : 5;
      return cmd_paths(demo, length, dim);
    }
    if (decide->parsed()) {
      std::cout << action_name(guided_decision(p1, p2)) << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "diffprog: error: %s\n", e.what());
    return 2;
  }
  return 1;
}
