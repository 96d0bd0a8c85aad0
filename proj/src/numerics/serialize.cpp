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

#include "tcsk/numerics/serialize.hpp"

#include "tcsk/util/binary_io.hpp"
#include "tcsk/util/error.hpp"

namespace tcsk {

namespace {
constexpr std::uint32_t kMaxRank = 16;
constexpr std::uint64_t kMaxElements = std::uint64_t{1} << 32;
}  // namespace

void write_tensor(std::ostream& os, const Tensor<float>& tensor) {
  binary::write_magic(os, "TNSR");
  binary::write_u32(os, static_cast<std::uint32_t>(tensor.rank()));
  for (Index e : tensor.shape()) binary::write_u64(os, static_cast<std::uint64_t>(e));
  for (Index i = 0; i < tensor.size(); ++i) binary::write_f32(os, tensor[i]);
}

Tensor<float> read_tensor(std::istream& is) {
  binary::expect_magic(is, "TNSR", "tensor");
  const std::uint32_t rank = binary::read_u32(is, "tensor rank");
  if (rank > kMaxRank) throw FormatError("tensor rank " + std::to_string(rank) + " too large");
  Shape shape(rank);
  std::uint64_t count = 1;
  for (auto& e : shape) {
    const std::uint64_t extent = binary::read_u64(is, "tensor extent");
    count *= extent;
    if (extent > kMaxElements || count > kMaxElements) {
      throw FormatError("tensor extents exceed the supported size");
    }
    e = static_cast<Index>(extent);
  }
  Tensor<float> t(shape);
  for (Index i = 0; i < t.size(); ++i) t[i] = binary::read_f32(is, "tensor data");
  return t;
}

}  // namespace tcsk
