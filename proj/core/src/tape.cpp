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

#include "diffprog/tape.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "diffprog/kernels.hpp"

namespace diffprog {

namespace {

constexpr std::array<std::pair<OpKind, std::string_view>, 23> kKindNames{{
    {OpKind::kInput, "input"},
    {OpKind::kParameter, "parameter"},
    {OpKind::kMatMul, "matmul"},
    {OpKind::kMatMulBT, "matmul_bt"},
    {OpKind::kTranspose, "transpose"},
    {OpKind::kSpMM, "spmm"},
    {OpKind::kAdd, "add"},
    {OpKind::kSub, "sub"},
    {OpKind::kMul, "mul"},
    {OpKind::kAffine, "affine"},
    {OpKind::kScalarMul, "scalar_mul"},
    {OpKind::kSigmoid, "sigmoid"},
    {OpKind::kTanh, "tanh"},
    {OpKind::kRelu, "relu"},
    {OpKind::kExp, "exp"},
    {OpKind::kLog, "log"},
    {OpKind::kSum, "sum"},
    {OpKind::kSoftmaxRows, "softmax_rows"},
    {OpKind::kAttention, "attention"},
    {OpKind::kCrossEntropy, "cross_entropy"},
    {OpKind::kDropout, "dropout"},
    {OpKind::kStackRows, "stack_rows"},
    {OpKind::kSelectRow, "select_row"},
}};

template <typename T>
const T& get_attrs(OpKind kind, const OpAttrs& attrs) {
  const T* p = std::get_if<T>(&attrs);
  if (!p) {
    throw std::invalid_argument("attributes do not match op kind '" +
                                std::string(kind_name(kind)) + "'");
  }
  return *p;
}

void expect_arity(OpKind kind, std::size_t got, std::size_t want) {
  if (got != want) {
    throw std::invalid_argument("op '" + std::string(kind_name(kind)) + "' takes " +
                                std::to_string(want) + " inputs, got " +
                                std::to_string(got));
  }
}

// Matrix view of a matmul operand: a vector on the left is a row, on the right
// a column.
Tensor as_left(const Tensor& t) {
  return t.rank() == 2 ? t : t.reshaped({1, t.size()});
}
Tensor as_right(const Tensor& t) {
  return t.rank() == 2 ? t : t.reshaped({t.size(), 1});
}

// Column sums, for gradients of a bias broadcast across rows.
Tensor reduce_like(const Tensor& grad, const Shape& target) {
  if (grad.shape() == target) return grad;
  return kernels::reduce_sum(grad, 0);
}

Tensor hadamard(const Tensor& a, const Tensor& b) {
  return kernels::elementwise(kernels::BinaryOp::kMul, a, b);
}

}  // namespace

std::string_view kind_name(OpKind kind) noexcept {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<OpKind> kind_from_name(std::string_view name) noexcept {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

AttentionPattern AttentionPattern::from_mask(const BoolMatrix& mask) {
  AttentionPattern p;
  p.cols_ = mask.cols();
  p.row_offsets_.reserve(mask.rows() + 1);
  for (std::size_t r = 0; r < mask.rows(); ++r) {
    for (std::size_t c = 0; c < mask.cols(); ++c) {
      if (mask(r, c)) p.keys_.push_back(c);
    }
    if (p.keys_.size() == p.row_offsets_.back()) {
      throw std::invalid_argument("attention scope mask row " + std::to_string(r) +
                                  " has no allowed entry");
    }
    p.row_offsets_.push_back(p.keys_.size());
  }
  return p;
}

const TapeNode& Tape::node(NodeId id) const {
  check_id(id);
  return nodes_[id.value];
}

void Tape::check_id(NodeId id) const {
  if (id.value >= nodes_.size()) {
    throw std::out_of_range("node id " + std::to_string(id.value) +
                            " is not on the tape (size " +
                            std::to_string(nodes_.size()) + ")");
  }
}

NodeId Tape::input(Tensor value) {
  NodeId id{nodes_.size()};
  nodes_.push_back(TapeNode{id, OpKind::kInput, {}, {}, std::move(value), {}, {}});
  ++num_inputs_;
  return id;
}

NodeId Tape::parameter(ParamStore& store, const std::string& name) {
  NodeId id{nodes_.size()};
  Tensor value = store.value(name);
  nodes_.push_back(TapeNode{id, OpKind::kParameter, {}, attrs::Param{&store, name},
                            std::move(value), {}, {}});
  ++num_inputs_;
  return id;
}

NodeId Tape::record(OpKind kind, std::vector<NodeId> inputs, OpAttrs op_attrs) {
  if (kind == OpKind::kInput || kind == OpKind::kParameter) {
    throw std::invalid_argument("leaf nodes are created with input()/parameter()");
  }
  for (NodeId in : inputs) check_id(in);
  Tensor saved;
  Tensor value = forward(kind, inputs, op_attrs, saved);
  NodeId id{nodes_.size()};
  nodes_.push_back(TapeNode{id, kind, std::move(inputs), std::move(op_attrs),
                            std::move(value), std::move(saved), {}});
  return id;
}

Tensor Tape::forward(OpKind kind, const std::vector<NodeId>& in, const OpAttrs& at,
                     Tensor& saved) const {
  using kernels::BinaryOp;
  using kernels::UnaryOp;
  auto v = [&](std::size_t i) -> const Tensor& { return nodes_[in[i].value].value; };

  switch (kind) {
    case OpKind::kMatMul:
      expect_arity(kind, in.size(), 2);
      return kernels::matmul(v(0), v(1));
    case OpKind::kMatMulBT:
      expect_arity(kind, in.size(), 2);
      return kernels::matmul_bt(v(0), v(1));
    case OpKind::kTranspose:
      expect_arity(kind, in.size(), 1);
      return kernels::transpose(v(0));
    case OpKind::kSpMM: {
      expect_arity(kind, in.size(), 1);
      const auto& a = get_attrs<attrs::Sparse>(kind, at);
      if (!a.matrix) throw std::invalid_argument("spmm: missing sparse operand");
      return kernels::spmm(*a.matrix, v(0));
    }
    case OpKind::kAdd:
      expect_arity(kind, in.size(), 2);
      return kernels::elementwise(BinaryOp::kAdd, v(0), v(1));
    case OpKind::kSub:
      expect_arity(kind, in.size(), 2);
      return kernels::elementwise(BinaryOp::kSub, v(0), v(1));
    case OpKind::kMul:
      expect_arity(kind, in.size(), 2);
      return kernels::elementwise(BinaryOp::kMul, v(0), v(1));
    case OpKind::kAffine: {
      expect_arity(kind, in.size(), 1);
      const auto& a = get_attrs<attrs::Affine>(kind, at);
      Tensor out = v(0);
      for (double& x : out.data()) x = a.alpha * x + a.beta;
      return out;
    }
    case OpKind::kScalarMul:
      expect_arity(kind, in.size(), 2);
      if (v(0).size() != 1) {
        throw ShapeError("scalar_mul: first operand must hold one element, got " +
                         to_string(v(0).shape()));
      }
      return kernels::scale(v(1), v(0)[0]);
    case OpKind::kSigmoid:
      expect_arity(kind, in.size(), 1);
      return kernels::elementwise(UnaryOp::kSigmoid, v(0));
    case OpKind::kTanh:
      expect_arity(kind, in.size(), 1);
      return kernels::elementwise(UnaryOp::kTanh, v(0));
    case OpKind::kRelu:
      expect_arity(kind, in.size(), 1);
      return kernels::elementwise(UnaryOp::kRelu, v(0));
    case OpKind::kExp:
      expect_arity(kind, in.size(), 1);
      return kernels::elementwise(UnaryOp::kExp, v(0));
    case OpKind::kLog:
      expect_arity(kind, in.size(), 1);
      return kernels::elementwise(UnaryOp::kLog, v(0));
    case OpKind::kSum:
      expect_arity(kind, in.size(), 1);
      return kernels::reduce_sum(v(0), get_attrs<attrs::Axis>(kind, at).axis);
    case OpKind::kSoftmaxRows: {
      expect_arity(kind, in.size(), 1);
      const auto& a = get_attrs<attrs::Softmax>(kind, at);
      return kernels::softmax_rows(v(0), a.mask.get());
    }
    case OpKind::kAttention: {
      expect_arity(kind, in.size(), 3);
      const auto& a = get_attrs<attrs::Attention>(kind, at);
      const Tensor& q = v(0);
      const Tensor& k = v(1);
      const Tensor& val = v(2);
      if (!a.pattern) throw std::invalid_argument("attention: missing pattern");
      const auto& pat = *a.pattern;
      if (q.rank() != 2 || k.rank() != 2 || val.rank() != 2 ||
          q.cols() != k.cols() || k.rows() != val.rows() || pat.rows() != q.rows() ||
          pat.cols() != k.rows()) {
        throw ShapeError("attention: incompatible shapes q" + to_string(q.shape()) +
                         " k" + to_string(k.shape()) + " v" + to_string(val.shape()) +
                         " pattern [" + std::to_string(pat.rows()) + "," +
                         std::to_string(pat.cols()) + "]");
      }
      const std::size_t d = q.cols();
      const std::size_t dv = val.cols();
      saved = Tensor({pat.nnz()});
      Tensor out({q.rows(), dv});
      for (std::size_t t = 0; t < q.rows(); ++t) {
        const auto keys = pat.keys(t);
        auto w = saved.data().subspan(pat.offset(t), keys.size());
        const auto qt = q.row(t);
        for (std::size_t j = 0; j < keys.size(); ++j) {
          const auto ki = k.row(keys[j]);
          double s = 0.0;
          for (std::size_t c = 0; c < d; ++c) s += qt[c] * ki[c];
          w[j] = s * a.scale;
        }
        kernels::softmax_inplace(w);
        auto yt = out.row(t);
        for (std::size_t j = 0; j < keys.size(); ++j) {
          const auto vi = val.row(keys[j]);
          for (std::size_t c = 0; c < dv; ++c) yt[c] += w[j] * vi[c];
        }
      }
      return out;
    }
    case OpKind::kCrossEntropy: {
      expect_arity(kind, in.size(), 1);
      const auto& a = get_attrs<attrs::CrossEntropy>(kind, at);
      const Tensor& logits = v(0);
      if (!a.labels || !a.rows) throw std::invalid_argument("cross_entropy: missing labels");
      if (a.rows->empty()) throw std::invalid_argument("cross_entropy: empty mask");
      if (logits.rank() != 2 || a.labels->size() != logits.rows()) {
        throw ShapeError("cross_entropy: logits " + to_string(logits.shape()) +
                         " vs " + std::to_string(a.labels->size()) + " labels");
      }
      const std::size_t c = logits.cols();
      saved = Tensor({a.rows->size(), c});
      double total = 0.0;
      for (std::size_t r = 0; r < a.rows->size(); ++r) {
        const std::size_t node = (*a.rows)[r];
        if (node >= logits.rows()) {
          throw std::out_of_range("cross_entropy: mask index " + std::to_string(node) +
                                  " out of range");
        }
        const std::size_t label = (*a.labels)[node];
        if (label >= c) {
          throw std::out_of_range("cross_entropy: label " + std::to_string(label) +
                                  " outside [0, " + std::to_string(c) + ")");
        }
        const auto row = logits.row(node);
        const double lse = kernels::log_sum_exp(row);
        total += lse - row[label];
        auto p = saved.row(r);
        for (std::size_t j = 0; j < c; ++j) p[j] = std::exp(row[j] - lse);
      }
      return Tensor::scalar(total / static_cast<double>(a.rows->size()));
    }
    case OpKind::kDropout: {
      expect_arity(kind, in.size(), 1);
      const auto& a = get_attrs<attrs::Dropout>(kind, at);
      if (!a.keep || a.keep->shape() != v(0).shape()) {
        throw ShapeError("dropout: keep mask does not match input " +
                         to_string(v(0).shape()));
      }
      return hadamard(v(0), *a.keep);
    }
    case OpKind::kStackRows: {
      if (in.empty()) throw std::invalid_argument("stack_rows needs at least one input");
      const Shape& first = v(0).shape();
      if (first.size() > 1) {
        throw ShapeError("stack_rows: inputs must be rank 0 or 1, got " + to_string(first));
      }
      const std::size_t width = v(0).size();
      Tensor out(first.empty() ? Shape{in.size()} : Shape{in.size(), width});
      for (std::size_t i = 0; i < in.size(); ++i) {
        if (v(i).shape() != first) {
          throw ShapeError("stack_rows: shape " + to_string(v(i).shape()) +
                           " differs from " + to_string(first));
        }
        std::copy(v(i).data().begin(), v(i).data().end(),
                  out.data().begin() + static_cast<std::ptrdiff_t>(i * width));
      }
      return out;
    }
    case OpKind::kSelectRow: {
      expect_arity(kind, in.size(), 1);
      const std::size_t idx = get_attrs<attrs::Row>(kind, at).index;
      const Tensor& x = v(0);
      if (x.rank() == 0 || idx >= x.shape()[0]) {
        throw std::out_of_range("select_row: index " + std::to_string(idx) +
                                " out of range for " + to_string(x.shape()));
      }
      if (x.rank() == 1) return Tensor::scalar(x[idx]);
      const auto r = x.row(idx);
      return Tensor::vector(std::vector<double>(r.begin(), r.end()));
    }
    case OpKind::kInput:
    case OpKind::kParameter:
      break;
  }
  throw std::invalid_argument("unknown op kind");
}

void Tape::accumulate(NodeId id, const Tensor& delta) {
  TapeNode& n = nodes_[id.value];
  if (!n.adjoint) {
    n.adjoint = delta;
    return;
  }
  auto dst = n.adjoint->data();
  const auto src = delta.data();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

Tensor Tape::adjoint(NodeId id) const {
  const TapeNode& n = node(id);
  return n.adjoint ? *n.adjoint : Tensor(n.value.shape());
}

void Tape::backward(NodeId output) {
  check_id(output);
  if (nodes_[output.value].value.size() != 1) {
    throw ShapeError("backward needs a one-element output, node " +
                     std::to_string(output.value) + " has shape " +
                     to_string(nodes_[output.value].value.shape()));
  }
  for (auto& n : nodes_) n.adjoint.reset();
  nodes_[output.value].adjoint = Tensor::full(nodes_[output.value].value.shape(), 1.0);

  for (std::size_t i = output.value + 1; i-- > 0;) {
    const TapeNode& n = nodes_[i];
    if (!n.adjoint) continue;
    if (n.kind == OpKind::kParameter) {
      const auto& p = std::get<attrs::Param>(n.attrs);
      p.store->accumulate_grad(p.name, *n.adjoint);
      continue;
    }
    if (n.kind == OpKind::kInput) continue;
    propagate(n);
  }
}

void Tape::propagate(const TapeNode& n) {
  using kernels::BinaryOp;
  const Tensor& g = *n.adjoint;
  const Tensor& y = n.value;
  auto v = [&](std::size_t i) -> const Tensor& { return nodes_[n.inputs[i].value].value; };
  auto send = [&](std::size_t i, const Tensor& delta) { accumulate(n.inputs[i], delta); };

  switch (n.kind) {
    case OpKind::kMatMul: {
      const Tensor a2 = as_left(v(0));
      const Tensor b2 = as_right(v(1));
      const Tensor g2 = g.reshaped({a2.rows(), b2.cols()});
      send(0, kernels::matmul_bt(g2, b2).reshaped(v(0).shape()));
      send(1, kernels::matmul_at(a2, g2).reshaped(v(1).shape()));
      return;
    }
    case OpKind::kMatMulBT: {
      const Tensor a2 = as_left(v(0));
      const Tensor b2 = as_left(v(1));
      const Tensor g2 = g.reshaped({a2.rows(), b2.rows()});
      send(0, kernels::matmul(g2, b2).reshaped(v(0).shape()));
      send(1, kernels::matmul_at(g2, a2).reshaped(v(1).shape()));
      return;
    }
    case OpKind::kTranspose:
      send(0, kernels::transpose(g));
      return;
    case OpKind::kSpMM:
      send(0, kernels::spmm_t(*std::get<attrs::Sparse>(n.attrs).matrix, g));
      return;
    case OpKind::kAdd:
      send(0, g);
      send(1, reduce_like(g, v(1).shape()));
      return;
    case OpKind::kSub:
      send(0, g);
      send(1, reduce_like(kernels::scale(g, -1.0), v(1).shape()));
      return;
    case OpKind::kMul:
      send(0, hadamard(g, v(1)));
      send(1, reduce_like(hadamard(g, v(0)), v(1).shape()));
      return;
    case OpKind::kAffine:
      send(0, kernels::scale(g, std::get<attrs::Affine>(n.attrs).alpha));
      return;
    case OpKind::kScalarMul: {
      const Tensor& x = v(1);
      double ds = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) ds += g[i] * x[i];
      send(0, Tensor(v(0).shape(), {ds}));
      send(1, kernels::scale(g, v(0)[0]));
      return;
    }
    case OpKind::kSigmoid: {
      Tensor d = g;
      for (std::size_t i = 0; i < d.size(); ++i) d[i] *= y[i] * (1.0 - y[i]);
      send(0, d);
      return;
    }
    case OpKind::kTanh: {
      Tensor d = g;
      for (std::size_t i = 0; i < d.size(); ++i) d[i] *= 1.0 - y[i] * y[i];
      send(0, d);
      return;
    }
    case OpKind::kRelu: {
      Tensor d = g;
      const Tensor& x = v(0);
      for (std::size_t i = 0; i < d.size(); ++i) {
        if (!(x[i] > 0.0)) d[i] = 0.0;
      }
      send(0, d);
      return;
    }
    case OpKind::kExp:
      send(0, hadamard(g, y));
      return;
    case OpKind::kLog: {
      Tensor d = g;
      const Tensor& x = v(0);
      for (std::size_t i = 0; i < d.size(); ++i) d[i] /= x[i];
      send(0, d);
      return;
    }
    case OpKind::kSum: {
      const int axis = std::get<attrs::Axis>(n.attrs).axis;
      const Tensor& x = v(0);
      Tensor d(x.shape());
      if (axis == kernels::kAllAxes || x.rank() == 1) {
        std::fill(d.data().begin(), d.data().end(), g[0]);
      } else {
        for (std::size_t i = 0; i < x.rows(); ++i) {
          for (std::size_t j = 0; j < x.cols(); ++j) d.at(i, j) = axis == 0 ? g[j] : g[i];
        }
      }
      send(0, d);
      return;
    }
    case OpKind::kSoftmaxRows: {
      Tensor d(y.shape());
      for (std::size_t r = 0; r < y.rows(); ++r) {
        const auto yr = y.row(r);
        const auto gr = g.row(r);
        double dot = 0.0;
        for (std::size_t j = 0; j < yr.size(); ++j) dot += yr[j] * gr[j];
        auto dr = d.row(r);
        for (std::size_t j = 0; j < yr.size(); ++j) dr[j] = yr[j] * (gr[j] - dot);
      }
      send(0, d);
      return;
    }
    case OpKind::kAttention: {
      const auto& a = std::get<attrs::Attention>(n.attrs);
      const auto& pat = *a.pattern;
      const Tensor& q = v(0);
      const Tensor& k = v(1);
      const Tensor& val = v(2);
      const std::size_t d = q.cols();
      const std::size_t dv = val.cols();
      Tensor dq(q.shape());
      Tensor dk(k.shape());
      Tensor dval(val.shape());
      std::vector<double> dw;
      for (std::size_t t = 0; t < q.rows(); ++t) {
        const auto keys = pat.keys(t);
        const auto w = n.saved.data().subspan(pat.offset(t), keys.size());
        const auto gt = g.row(t);
        dw.assign(keys.size(), 0.0);
        double weighted = 0.0;
        for (std::size_t j = 0; j < keys.size(); ++j) {
          const auto vi = val.row(keys[j]);
          double s = 0.0;
          for (std::size_t c = 0; c < dv; ++c) s += gt[c] * vi[c];
          dw[j] = s;
          weighted += w[j] * s;
          auto dvi = dval.row(keys[j]);
          for (std::size_t c = 0; c < dv; ++c) dvi[c] += w[j] * gt[c];
        }
        const auto qt = q.row(t);
        auto dqt = dq.row(t);
        for (std::size_t j = 0; j < keys.size(); ++j) {
          const double ds = w[j] * (dw[j] - weighted) * a.scale;
          if (ds == 0.0) continue;
          const auto ki = k.row(keys[j]);
          auto dki = dk.row(keys[j]);
          for (std::size_t c = 0; c < d; ++c) {
            dqt[c] += ds * ki[c];
            dki[c] += ds * qt[c];
          }
        }
      }
      send(0, dq);
      send(1, dk);
      send(2, dval);
      return;
    }
    case OpKind::kCrossEntropy: {
      const auto& a = std::get<attrs::CrossEntropy>(n.attrs);
      const Tensor& logits = v(0);
      Tensor d(logits.shape());
      const double coef = g[0] / static_cast<double>(a.rows->size());
      for (std::size_t r = 0; r < a.rows->size(); ++r) {
        const std::size_t node = (*a.rows)[r];
        const auto p = n.saved.row(r);
        auto dr = d.row(node);
        for (std::size_t j = 0; j < p.size(); ++j) dr[j] += coef * p[j];
        dr[(*a.labels)[node]] -= coef;
      }
      send(0, d);
      return;
    }
    case OpKind::kDropout:
      send(0, hadamard(g, *std::get<attrs::Dropout>(n.attrs).keep));
      return;
    case OpKind::kStackRows: {
      const std::size_t width = v(0).size();
      for (std::size_t i = 0; i < n.inputs.size(); ++i) {
        const auto seg = g.data().subspan(i * width, width);
        send(i, Tensor(v(i).shape(), std::vector<double>(seg.begin(), seg.end())));
      }
      return;
    }
    case OpKind::kSelectRow: {
      const std::size_t idx = std::get<attrs::Row>(n.attrs).index;
      Tensor d(v(0).shape());
      const std::size_t width = g.size();
      std::copy(g.data().begin(), g.data().end(),
                d.data().begin() + static_cast<std::ptrdiff_t>(idx * width));
      send(0, d);
      return;
    }
    case OpKind::kInput:
    case OpKind::kParameter:
      break;
  }
  throw std::logic_error("no backward rule for op kind '" +
                         std::string(kind_name(n.kind)) + "'");
}

std::string Tape::dump() const {
  std::ostringstream out;
  for (const auto& n : nodes_) {
    out << n.id.value << ' ' << kind_name(n.kind) << " [";
    for (std::size_t i = 0; i < n.inputs.size(); ++i) {
      if (i) out << ' ';
      out << n.inputs[i].value;
    }
    out << "] " << to_string(n.value.shape()) << '\n';
  }
  return out.str();
}

}  // namespace diffprog
