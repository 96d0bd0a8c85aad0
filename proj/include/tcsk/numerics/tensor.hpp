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

#include <Eigen/Dense>

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace tcsk {

using Index = std::int64_t;
using Shape = std::vector<Index>;

Index shape_size(const Shape& shape);
std::string shape_string(const Shape& shape);

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using RowMajorMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Dense row-major N-d array with an optional gradient buffer.
///
/// Storage is a flat Eigen vector; `matrix()` exposes any rank >= 1 tensor as a
/// rows x cols view where cols is the last extent.
template <typename Scalar>
class Tensor {
 public:
  using Storage = Vector<Scalar>;
  using MatrixMap = Eigen::Map<RowMajorMatrix<Scalar>>;
  using ConstMatrixMap = Eigen::Map<const RowMajorMatrix<Scalar>>;

  Tensor() : shape_{0}, data_() {}
  Tensor(Shape shape, Storage data);
  explicit Tensor(Shape shape) : Tensor(shape, Storage::Zero(shape_size(shape))) {}

  static Tensor zeros(Shape shape) { return Tensor(std::move(shape)); }
  static Tensor constant(Shape shape, Scalar value);
  static Tensor scalar(Scalar value) { return Tensor(Shape{}, Storage::Constant(1, value)); }
  /// Row-major literal, e.g. `Tensor<double>::from({2, 2}, {1, 2, 3, 4})`.
  static Tensor from(Shape shape, std::initializer_list<Scalar> values);

  const Shape& shape() const { return shape_; }
  Index rank() const { return static_cast<Index>(shape_.size()); }
  Index extent(Index axis) const;
  Index size() const { return data_.size(); }

  Storage& data() { return data_; }
  const Storage& data() const { return data_; }
  Scalar& operator[](Index i) { return data_[i]; }
  Scalar operator[](Index i) const { return data_[i]; }

  /// Element access for rank-2 tensors.
  Scalar& operator()(Index r, Index c) { return data_[r * shape_.back() + c]; }
  Scalar operator()(Index r, Index c) const { return data_[r * shape_.back() + c]; }

  MatrixMap matrix();
  ConstMatrixMap matrix() const;

  std::optional<Storage>& grad() { return grad_; }
  const std::optional<Storage>& grad() const { return grad_; }
  void zero_grad() { grad_.reset(); }

  /// Same data, different extents with equal element count.
  Tensor reshaped(Shape shape) const;

  template <typename Other>
  Tensor<Other> cast() const {
    return Tensor<Other>(shape_, data_.template cast<Other>());
  }

  bool all_finite() const { return data_.allFinite(); }

  friend bool operator==(const Tensor& a, const Tensor& b) {
    return a.shape_ == b.shape_ && a.data_.size() == b.data_.size() &&
           (a.data_.array() == b.data_.array()).all();
  }

 private:
  Shape shape_;
  Storage data_;
  std::optional<Storage> grad_;
};

extern template class Tensor<float>;
extern template class Tensor<double>;

}  // namespace tcsk
