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

#include "tcsk/numerics/graph.hpp"

#include "tcsk/util/error.hpp"

namespace tcsk {

template <typename Scalar>
Var<Scalar> Graph<Scalar>::constant(Tensor<Scalar> value) {
  nodes_.push_back(Node{"constant", std::move(value), {}, nullptr, false, {}, nullptr});
  return Var<Scalar>(this, size() - 1);
}

template <typename Scalar>
Var<Scalar> Graph<Scalar>::variable(Tensor<Scalar> value) {
  nodes_.push_back(Node{"variable", std::move(value), {}, nullptr, true, {}, nullptr});
  return Var<Scalar>(this, size() - 1);
}

template <typename Scalar>
Var<Scalar> Graph<Scalar>::parameter(Tensor<Scalar>& param) {
  nodes_.push_back(Node{"parameter", Tensor<Scalar>(param.shape(), param.data()), {}, nullptr,
                        true, {}, &param});
  return Var<Scalar>(this, size() - 1);
}

template <typename Scalar>
Var<Scalar> Graph<Scalar>::record(std::string op, Tensor<Scalar> value, std::vector<Index> inputs,
                                  Pullback pullback) {
  bool needs = false;
  for (Index in : inputs) {
    if (in < 0 || in >= size()) throw Error("Graph::record: input id out of range");
    needs = needs || nodes_[in].requires_grad;
  }
  nodes_.push_back(Node{std::move(op), std::move(value), std::move(inputs),
                        needs ? std::move(pullback) : Pullback{}, needs, {}, nullptr});
  return Var<Scalar>(this, size() - 1);
}

template <typename Scalar>
typename Graph<Scalar>::Storage* Graph<Scalar>::grad_sink(Index id) {
  Node& node = nodes_[id];
  if (!node.requires_grad) return nullptr;
  if (node.grad.size() != node.value.size()) node.grad = Storage::Zero(node.value.size());
  return &node.grad;
}

template <typename Scalar>
const typename Graph<Scalar>::Storage& Graph<Scalar>::grad(Var<Scalar> v) const {
  const Node& node = nodes_[v.id()];
  return node.grad.size() == node.value.size() ? node.grad : empty_;
}

template <typename Scalar>
void Graph<Scalar>::backward(Var<Scalar> root) {
  if (root.value().size() != 1) {
    throw DimensionError("Graph::backward: root " + shape_string(root.shape()) +
                         " is not a single value; pass an explicit seed");
  }
  backward(root, Storage::Ones(1));
}

template <typename Scalar>
void Graph<Scalar>::backward(Var<Scalar> root, const Storage& seed) {
  if (seed.size() != root.value().size()) {
    throw DimensionError("Graph::backward: seed has " + std::to_string(seed.size()) +
                         " values, root has " + std::to_string(root.value().size()));
  }
  for (Node& node : nodes_) node.grad.resize(0);
  if (Storage* g = grad_sink(root.id())) *g = seed;

  for (Index id = root.id(); id >= 0; --id) {
    Node& node = nodes_[id];
    if (!node.requires_grad || node.grad.size() == 0) continue;
    if (node.pullback) node.pullback(*this, node.grad);
    if (node.param != nullptr) {
      auto& target = node.param->grad();
      if (!target || target->size() != node.grad.size()) {
        target = Storage::Zero(node.grad.size());
      }
      *target += node.grad;
    }
  }
}

template class Graph<float>;
template class Graph<double>;

}  // namespace tcsk
