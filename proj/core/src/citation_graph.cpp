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

#include "diffprog/citation_graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "diffprog/rng.hpp"

namespace diffprog::graph {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& what) { throw std::invalid_argument(what); }

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

template <typename T>
T parse_number(std::string_view token, const fs::path& file, std::size_t line) {
  T value{};
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    invalid(file.filename().string() + ":" + std::to_string(line) + ": bad number '" +
            std::string(token) + "'");
  }
  return value;
}

// Splits `content` into lines of exactly `fields` tab-separated tokens.
template <typename Fn>
void for_each_row(const std::string& content, std::size_t fields, const fs::path& file,
                  Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  std::vector<std::string_view> tokens;
  while (pos < content.size()) {
    std::size_t end = content.find('\n', pos);
    if (end == std::string::npos) end = content.size();
    std::string_view line(content.data() + pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    tokens.clear();
    std::size_t start = 0;
    while (true) {
      const std::size_t tab = line.find('\t', start);
      tokens.push_back(line.substr(start, tab == std::string_view::npos ? line.npos : tab - start));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    if (tokens.size() != fields) {
      invalid(file.filename().string() + ":" + std::to_string(line_no) + ": expected " +
              std::to_string(fields) + " tab-separated fields");
    }
    fn(tokens, line_no);
  }
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::vector<std::size_t> json_indices(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    invalid(std::string("splits.json: missing array '") + key + "'");
  }
  return j.at(key).get<std::vector<std::size_t>>();
}

// Sorted, de-duplicated undirected neighbor lists without self-loops.
std::vector<std::vector<std::size_t>> simple_neighbors(const CitationGraph& g) {
  std::vector<std::vector<std::size_t>> adj(g.num_nodes);
  for (const Edge& e : g.edges) {
    if (e.src == e.dst) continue;
    adj[e.src].push_back(e.dst);
    adj[e.dst].push_back(e.src);
  }
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return adj;
}

std::size_t count_common(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::size_t i = 0, j = 0, common = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  return common;
}

}  // namespace

void CitationGraph::validate(bool require_symmetric) const {
  for (const Edge& e : edges) {
    if (e.src >= num_nodes || e.dst >= num_nodes) {
      invalid("edge (" + std::to_string(e.src) + ", " + std::to_string(e.dst) +
              ") references a node outside [0, " + std::to_string(num_nodes) + ")");
    }
  }
  if (labels.size() != num_nodes) {
    invalid("expected " + std::to_string(num_nodes) + " labels, got " +
            std::to_string(labels.size()));
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= num_classes) {
      invalid("label " + std::to_string(labels[i]) + " of node " + std::to_string(i) +
              " outside [0, " + std::to_string(num_classes) + ")");
    }
  }
  if (!features || features->rows() != num_nodes || features->cols() != feature_dim) {
    invalid("feature matrix does not match " + std::to_string(num_nodes) + "x" +
            std::to_string(feature_dim));
  }
  std::vector<int> owner(num_nodes, -1);
  const std::vector<std::size_t>* lists[] = {&splits.train, &splits.val, &splits.test};
  const char* names[] = {"train", "val", "test"};
  for (int s = 0; s < 3; ++s) {
    for (std::size_t idx : *lists[s]) {
      if (idx >= num_nodes) {
        invalid(std::string(names[s]) + " split index " + std::to_string(idx) +
                " out of range");
      }
      if (owner[idx] != -1) {
        invalid("splits overlap: node " + std::to_string(idx) + " in both " +
                names[owner[idx]] + " and " + names[s]);
      }
      owner[idx] = s;
    }
  }
  if (require_symmetric) {
    std::vector<Edge> sorted = edges;
    std::sort(sorted.begin(), sorted.end());
    for (const Edge& e : sorted) {
      if (!std::binary_search(sorted.begin(), sorted.end(), Edge{e.dst, e.src})) {
        invalid("asymmetric edge list: (" + std::to_string(e.src) + ", " +
                std::to_string(e.dst) + ") has no reverse entry");
      }
    }
  }
}

CitationGraph load(const fs::path& dir) {
  for (const char* name :
       {"header.json", "edges.tsv", "features.tsv", "labels.tsv", "splits.json"}) {
    if (!fs::exists(dir / name)) {
      throw std::runtime_error("missing dataset file " + (dir / name).string());
    }
  }

  CitationGraph g;
  std::size_t declared_edges = 0;
  try {
    const json header = json::parse(read_file(dir / "header.json"));
    g.num_nodes = header.at("num_nodes").get<std::size_t>();
    g.feature_dim = header.at("feature_dim").get<std::size_t>();
    g.num_classes = header.at("num_classes").get<std::size_t>();
    declared_edges = header.at("num_directed_edges").get<std::size_t>();
  } catch (const json::exception& e) {
    invalid(std::string("header.json: ") + e.what());
  }

  const fs::path edges_path = dir / "edges.tsv";
  for_each_row(read_file(edges_path), 2, edges_path,
               [&](const std::vector<std::string_view>& t, std::size_t line) {
                 g.edges.push_back({parse_number<std::size_t>(t[0], edges_path, line),
                                    parse_number<std::size_t>(t[1], edges_path, line)});
               });
  if (g.edges.size() != declared_edges) {
    invalid("header declares " + std::to_string(declared_edges) +
            " directed edges, edges.tsv has " + std::to_string(g.edges.size()));
  }

  const fs::path features_path = dir / "features.tsv";
  std::vector<SparseEntry> entries;
  for_each_row(read_file(features_path), 3, features_path,
               [&](const std::vector<std::string_view>& t, std::size_t line) {
                 entries.push_back({parse_number<std::size_t>(t[0], features_path, line),
                                    parse_number<std::size_t>(t[1], features_path, line),
                                    parse_number<double>(t[2], features_path, line)});
               });
  try {
    g.features = std::make_shared<const SparseMatrix>(g.num_nodes, g.feature_dim,
                                                      std::move(entries));
  } catch (const std::out_of_range& e) {
    invalid(std::string("features.tsv: ") + e.what());
  }

  const fs::path labels_path = dir / "labels.tsv";
  std::vector<long long> labels(g.num_nodes, -1);
  std::size_t label_rows = 0;
  for_each_row(read_file(labels_path), 2, labels_path,
               [&](const std::vector<std::string_view>& t, std::size_t line) {
                 const auto node = parse_number<std::size_t>(t[0], labels_path, line);
                 const auto cls = parse_number<std::size_t>(t[1], labels_path, line);
                 ++label_rows;
                 if (node >= g.num_nodes) {
                   invalid("labels.tsv: node " + std::to_string(node) + " out of range");
                 }
                 if (labels[node] != -1) {
                   invalid("labels.tsv: node " + std::to_string(node) + " labelled twice");
                 }
                 labels[node] = static_cast<long long>(cls);
               });
  if (label_rows != g.num_nodes) {
    invalid("header declares " + std::to_string(g.num_nodes) + " nodes, labels.tsv has " +
            std::to_string(label_rows));
  }
  g.labels.assign(labels.begin(), labels.end());

  try {
    const json splits = json::parse(read_file(dir / "splits.json"));
    g.splits.train = json_indices(splits, "train");
    g.splits.val = json_indices(splits, "val");
    g.splits.test = json_indices(splits, "test");
  } catch (const json::exception& e) {
    invalid(std::string("splits.json: ") + e.what());
  }

  g.validate(/*require_symmetric=*/true);
  return g;
}

void save(const CitationGraph& g, const fs::path& dir) {
  fs::create_directories(dir);
  const json header = {{"num_nodes", g.num_nodes},
                       {"feature_dim", g.feature_dim},
                       {"num_classes", g.num_classes},
                       {"num_directed_edges", g.edges.size()}};
  write_file(dir / "header.json", header.dump() + "\n");

  std::vector<Edge> edges = g.edges;
  std::sort(edges.begin(), edges.end());
  std::string out;
  for (const Edge& e : edges) {
    out += std::to_string(e.src);
    out += '\t';
    out += std::to_string(e.dst);
    out += '\n';
  }
  write_file(dir / "edges.tsv", out);

  out.clear();
  if (g.features) {
    for (const auto& e : g.features->entries()) {
      out += std::to_string(e.row);
      out += '\t';
      out += std::to_string(e.col);
      out += '\t';
      out += format_double(e.value);
      out += '\n';
    }
  }
  write_file(dir / "features.tsv", out);

  out.clear();
  for (std::size_t i = 0; i < g.labels.size(); ++i) {
    out += std::to_string(i);
    out += '\t';
    out += std::to_string(g.labels[i]);
    out += '\n';
  }
  write_file(dir / "labels.tsv", out);

  const json splits = {{"train", g.splits.train}, {"val", g.splits.val}, {"test", g.splits.test}};
  write_file(dir / "splits.json", splits.dump() + "\n");
}

GraphStats stats(const CitationGraph& g) {
  GraphStats s;
  s.num_nodes = g.num_nodes;
  s.directed_edge_entries = g.edges.size();
  if (g.num_nodes == 0) return s;
  s.average_degree = static_cast<double>(g.edges.size()) / static_cast<double>(g.num_nodes);

  std::vector<bool> touched(g.num_nodes, false);
  for (const Edge& e : g.edges) {
    touched[e.src] = true;
    touched[e.dst] = true;
  }
  s.isolated_nodes = static_cast<std::size_t>(std::count(touched.begin(), touched.end(), false));

  const auto adj = simple_neighbors(g);
  double total = 0.0;
  for (std::size_t v = 0; v < g.num_nodes; ++v) {
    const std::size_t k = adj[v].size();
    if (k < 2) continue;
    std::size_t twice_links = 0;
    for (std::size_t u : adj[v]) twice_links += count_common(adj[v], adj[u]);
    total += static_cast<double>(twice_links) / static_cast<double>(k * (k - 1));
  }
  s.average_clustering = total / static_cast<double>(g.num_nodes);
  return s;
}

SparseMatrix normalize_adjacency(const CitationGraph& g, bool add_self_loops) {
  const std::size_t n = g.num_nodes;
  std::vector<Edge> sorted = g.edges;
  if (add_self_loops) {
    for (std::size_t i = 0; i < n; ++i) sorted.push_back({i, i});
  }
  std::sort(sorted.begin(), sorted.end());

  std::vector<SparseEntry> entries;
  entries.reserve(sorted.size());
  for (const Edge& e : sorted) {
    if (!entries.empty() && entries.back().row == e.src && entries.back().col == e.dst) {
      entries.back().value += 1.0;
    } else {
      entries.push_back({e.src, e.dst, 1.0});
    }
  }
  std::vector<double> degree(n, 0.0);
  for (const auto& e : entries) degree[e.row] += e.value;
  for (auto& e : entries) e.value /= std::sqrt(degree[e.row] * degree[e.col]);
  return SparseMatrix(n, n, std::move(entries));
}

CitationGraph randomize_edges(const CitationGraph& g, std::uint64_t seed) {
  CitationGraph out = g;
  if (g.num_nodes < 2) {
    out.edges.clear();
    return out;
  }
  Rng rng(seed);
  for (Edge& e : out.edges) {
    e.src = rng.below(g.num_nodes);
    std::size_t dst = rng.below(g.num_nodes - 1);
    if (dst >= e.src) ++dst;
    e.dst = dst;
  }
  return out;
}

CitationGraph remove_edges(const CitationGraph& g, double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("remove fraction must be in [0, 1], got " +
                                std::to_string(fraction));
  }
  std::vector<Edge> pairs;
  for (const Edge& e : g.edges) {
    pairs.push_back({std::min(e.src, e.dst), std::max(e.src, e.dst)});
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  const auto target = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(pairs.size())));
  Rng rng(seed);
  for (std::size_t i = 0; i < target; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(pairs.size() - i));
    std::swap(pairs[i], pairs[j]);
  }
  std::vector<Edge> removed(pairs.begin(), pairs.begin() + static_cast<std::ptrdiff_t>(target));
  std::sort(removed.begin(), removed.end());

  CitationGraph out = g;
  out.edges.clear();
  for (const Edge& e : g.edges) {
    const Edge key{std::min(e.src, e.dst), std::max(e.src, e.dst)};
    if (!std::binary_search(removed.begin(), removed.end(), key)) out.edges.push_back(e);
  }
  return out;
}

BoolMatrix neighbor_mask(const CitationGraph& g, bool include_self) {
  BoolMatrix m(g.num_nodes, g.num_nodes);
  for (const Edge& e : g.edges) m.set(e.src, e.dst);
  if (include_self) {
    for (std::size_t i = 0; i < g.num_nodes; ++i) m.set(i, i);
  }
  return m;
}

BoolMatrix scope_mask(const CitationGraph& g, Scope scope) {
  switch (scope) {
    case Scope::kAll: return BoolMatrix::full(g.num_nodes);
    case Scope::kSelf: return BoolMatrix::diagonal(g.num_nodes);
    case Scope::kNeighbors: return neighbor_mask(g, true);
  }
  return BoolMatrix::full(g.num_nodes);
}

std::vector<std::size_t> mask_from_spec(const CitationGraph& g, std::string_view spec) {
  if (spec == "train") return g.splits.train;
  if (spec == "val") return g.splits.val;
  if (spec == "test") return g.splits.test;
  constexpr std::string_view prefix = "first:";
  if (spec.substr(0, prefix.size()) == prefix) {
    const std::string_view digits = spec.substr(prefix.size());
    std::size_t n = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size()) {
      invalid("mask spec '" + std::string(spec) + "': bad node count");
    }
    if (n == 0 || n > g.num_nodes) {
      invalid("mask spec '" + std::string(spec) + "': count must be in [1, " +
              std::to_string(g.num_nodes) + "]");
    }
    std::vector<std::size_t> out(n);
    std::iota(out.begin(), out.end(), std::size_t{0});
    return out;
  }
  invalid("unknown mask spec '" + std::string(spec) + "'");
}

}  // namespace diffprog::graph
