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

#include "diffprog/suite.hpp"

#include <atomic>
#include <charconv>
#include <exception>
#include <fstream>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace diffprog {

namespace {

using nlohmann::json;

const std::set<std::string, std::less<>> kKeys = {
    "name", "model",  "hidden", "attn_scope", "dropout",      "mask",
    "edges", "seeds", "optimizer", "lr",      "weight_decay", "epochs",
    "normalize_features"};

[[noreturn]] void malformed(const std::string& what) {
  throw std::invalid_argument("suite spec: " + what);
}

void check_keys(const json& obj, const std::string& where) {
  if (!obj.is_object()) malformed(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!kKeys.contains(key)) malformed("unknown key '" + key + "' in " + where);
  }
}

// Cell values override defaults; `merged` holds the union.
json merge(const json& defaults, const json& cell) {
  json merged = defaults;
  for (const auto& [key, value] : cell.items()) merged[key] = value;
  return merged;
}

template <typename T>
T get(const json& obj, const char* key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    malformed("bad value for '" + std::string(key) + "' in " + where);
  }
}

SuiteCell build_cell(const json& m, std::size_t index) {
  const std::string where = "cell " + std::to_string(index);
  if (!m.contains("model")) malformed(where + " has no model");
  SuiteCell cell;
  const ModelKind kind = parse_model_kind(get<std::string>(m, "model", where));
  if (m.contains("mask")) cell.mask = get<std::string>(m, "mask", where);
  cell.config = ModelConfig::canonical(kind, cell.mask);
  if (m.contains("hidden")) {
    const json& h = m.at("hidden");
    cell.config.hidden_dims = h.is_array() ? get<std::vector<std::size_t>>(m, "hidden", where)
                                           : std::vector<std::size_t>{
                                                 get<std::size_t>(m, "hidden", where)};
  }
  if (m.contains("attn_scope")) {
    cell.config.attn_scope = parse_scope(get<std::string>(m, "attn_scope", where));
  }
  if (m.contains("dropout")) cell.config.dropout_rate = get<double>(m, "dropout", where);
  if (m.contains("edges")) cell.edges = get<std::string>(m, "edges", where);
  if (m.contains("seeds")) {
    cell.seeds = get<std::vector<std::uint64_t>>(m, "seeds", where);
    if (cell.seeds.empty()) malformed(where + " has no seeds");
  }
  if (m.contains("optimizer")) {
    cell.hyper.optimizer = parse_optimizer(get<std::string>(m, "optimizer", where));
  }
  if (m.contains("lr")) cell.hyper.lr = get<double>(m, "lr", where);
  if (m.contains("weight_decay")) cell.hyper.weight_decay = get<double>(m, "weight_decay", where);
  if (m.contains("epochs")) cell.hyper.epochs = get<std::size_t>(m, "epochs", where);
  if (m.contains("normalize_features")) {
    cell.hyper.normalize_features = get<bool>(m, "normalize_features", where);
  }
  cell.name = m.contains("name") ? get<std::string>(m, "name", where)
                                 : cell.config.describe() + "/" + cell.mask + "/" + cell.edges;
  cell.config.validate();
  cell.hyper.validate();
  return cell;
}

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string hidden_string(const std::vector<std::size_t>& dims) {
  std::string out;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) out += 'x';
    out += std::to_string(dims[i]);
  }
  return out;
}

}  // namespace

SuiteSpec parse_suite_spec(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    malformed(std::string("not valid JSON: ") + e.what());
  }
  if (!root.is_object()) malformed("top level must be an object");
  for (const auto& [key, value] : root.items()) {
    if (key != "defaults" && key != "cells") malformed("unknown top-level key '" + key + "'");
  }
  json defaults = json::object();
  if (root.contains("defaults")) {
    defaults = root.at("defaults");
    check_keys(defaults, "defaults");
  }
  if (!root.contains("cells") || !root.at("cells").is_array() || root.at("cells").empty()) {
    malformed("needs a non-empty 'cells' array");
  }
  SuiteSpec spec;
  std::size_t index = 0;
  for (const json& c : root.at("cells")) {
    check_keys(c, "cell " + std::to_string(index));
    spec.cells.push_back(build_cell(merge(defaults, c), index));
    ++index;
  }
  return spec;
}

SuiteSpec load_suite_spec(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open suite spec " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_suite_spec(ss.str());
}

double CellResult::mean_accuracy() const {
  if (runs.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& r : runs) sum += r.test_accuracy;
  return sum / static_cast<double>(runs.size());
}

RunReport run_cell(const SuiteCell& cell, const graph::CitationGraph& g, std::uint64_t seed) {
  Hyperparams hyper = cell.hyper;
  hyper.seed = seed;
  RunReport report;
  if (cell.edges == "none") {
    report = train(cell.config, g, cell.mask, hyper);
  } else {
    report = train(cell.config, perturb_edges(g, cell.edges, seed), cell.mask, hyper);
  }
  report.edges = cell.edges;
  return report;
}

std::vector<CellResult> run_suite(const SuiteSpec& spec, const graph::CitationGraph& g,
                                  const SuiteOptions& options) {
  struct Task {
    std::size_t cell;
    std::size_t run;
  };
  std::vector<Task> tasks;
  std::vector<CellResult> results;
  for (std::size_t c = 0; c < spec.cells.size(); ++c) {
    results.push_back({spec.cells[c], std::vector<RunReport>(spec.cells[c].seeds.size())});
    for (std::size_t s = 0; s < spec.cells[c].seeds.size(); ++s) tasks.push_back({c, s});
  }

  std::size_t jobs = options.jobs ? options.jobs : std::thread::hardware_concurrency();
  jobs = std::max<std::size_t>(1, std::min(jobs, tasks.size()));

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex mu;
  auto worker = [&] {
    while (!failed) {
      const std::size_t t = next++;
      if (t >= tasks.size()) return;
      const auto [c, s] = tasks[t];
      const SuiteCell& cell = spec.cells[c];
      try {
        RunReport r = run_cell(cell, g, cell.seeds[s]);
        std::lock_guard lock(mu);
        if (options.on_run) options.on_run(cell, r);
        results[c].runs[s] = std::move(r);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < jobs; ++i) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  return results;
}

std::string suite_csv(const std::vector<CellResult>& results) {
  std::string out =
      "cell,model,hidden,attn_scope,dropout,mask,edges,seed,epochs,final_train_loss,"
      "test_accuracy,param_count,seconds\n";
  for (const auto& res : results) {
    for (const auto& r : res.runs) {
      const bool attn = r.config.kind == ModelKind::kAttn;
      out += csv_field(res.cell.name) + ',';
      out += std::string(model_kind_name(r.config.kind)) + ',';
      out += hidden_string(r.config.hidden_dims) + ',';
      out += (attn ? std::string(scope_name(r.config.attn_scope)) : std::string()) + ',';
      out += fmt(r.config.dropout_rate) + ',';
      out += csv_field(r.mask) + ',';
      out += csv_field(r.edges) + ',';
      out += std::to_string(r.seed) + ',';
      out += std::to_string(r.train_loss.size()) + ',';
      out += (r.train_loss.empty() ? std::string() : fmt(r.train_loss.back())) + ',';
      out += fmt(r.test_accuracy) + ',';
      out += std::to_string(r.param_count) + ',';
      out += fmt(r.seconds) + '\n';
    }
  }
  return out;
}

std::string report_json(const RunReport& r) {
  json config = {{"model", model_kind_name(r.config.kind)},
                 {"hidden_dims", r.config.hidden_dims},
                 {"dropout_rate", r.config.dropout_rate}};
  if (r.config.kind == ModelKind::kAttn) config["attn_scope"] = scope_name(r.config.attn_scope);
  const json j = {{"config", config},
                  {"mask", r.mask},
                  {"edges", r.edges},
                  {"seed", r.seed},
                  {"train_loss", r.train_loss},
                  {"test_accuracy", r.test_accuracy},
                  {"param_count", r.param_count},
                  {"seconds", r.seconds}};
  return j.dump(2) + "\n";
}

}  // namespace diffprog
