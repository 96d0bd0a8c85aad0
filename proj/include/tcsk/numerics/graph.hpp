// Copyright 2026 The TC-SKNet Authors
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

#include <deque>
#include <functional>
#include <string>
#include <vector>

#include "tcsk/numerics/tensor.hpp"

namespace tcsk {

template <typename Scalar>
class Graph;

/// Handle to a node of a Graph. Cheap to copy; valid while its graph lives.
template <typename Scalar>
class Var {
 public:
  Var() = default;
  Var(Graph<Scalar>* graph, Index id) : graph_(graph), id_(id) {}

  Graph<Scalar>& graph() const { return *graph_; }
  Index id() const { return id_; }
  const Tensor<Scalar>& value() const { return graph_->value(id_); }
  const Shape& shape() const { return value().shape(); }
  bool valid() const { return graph_ != nullptr; }

 private:
  Graph<Scalar>* graph_ = nullptr;
  Index id_ = -1;
};

/// Tape of operations recorded in execution order.
///
/// Nodes are appended by the op functions in ops.hpp, so a node's inputs always
/// precede it. backward() walks the tape once in reverse, calling each node's
/// pullback with the accumulated output gradient. Not thread-safe; use one graph
/// per thread.
template <typename Scalar>
class Graph {
 public:
  using Storage = Vector<Scalar>;
  /// Receives the gradient flowing into the node's output.
  using Pullback = std::function<void(Graph&, const Storage&)>;

  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  /// Constant leaf; no gradient is tracked.
  Var<Scalar> constant(Tensor<Scalar> value);
  /// Leaf whose gradient is kept on the tape (see grad()).
  Var<Scalar> variable(Tensor<Scalar> value);
  /// Leaf bound to a model parameter; backward() accumulates into `param.grad()`.
  Var<Scalar> parameter(Tensor<Scalar>& param);

  Var<Scalar> record(std::string op, Tensor<Scalar> value, std::vector<Index> inputs,
                     Pullback pullback);

  const Tensor<Scalar>& value(Index id) const { return nodes_[id].value; }
  const std::string& op(Index id) const { return nodes_[id].op; }
  const std::vector<Index>& inputs(Index id) const { return nodes_[id].inputs; }
  bool requires_grad(Index id) const { return nodes_[id].requires_grad; }
  Index size() const { return static_cast<Index>(nodes_.size()); }

  /// Gradient buffer of a node that requires grad, zero-initialized on first use.
  /// Returns nullptr for nodes outside the differentiable subgraph.
  Storage* grad_sink(Index id);

  /// Gradient accumulated on a node by the last backward(), or an empty vector.
  const Storage& grad(Var<Scalar> v) const;

  /// Reverse pass from a single-element root (seed 1).
  void backward(Var<Scalar> root);
  /// Reverse pass with an explicit seed of the root's size.
  void backward(Var<Scalar> root, const Storage& seed);

 private:
  struct Node {
    std::string op;
    Tensor<Scalar> value;
    std::vector<Index> inputs;
    Pullback pullback;
    bool requires_grad = false;
    Storage grad;
    Tensor<Scalar>* param = nullptr;
  };

  // deque keeps references to earlier nodes stable while appending.
  std::deque<Node> nodes_;
  Storage empty_;
};

extern template class Graph<float>;
extern template class Graph<double>;

}  // namespace tcsk
