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

#include <istream>
#include <ostream>

#include "tcsk/numerics/tensor.hpp"

namespace tcsk {

// Binary layout (little-endian): "TNSR", u32 rank, rank x u64 extents,
// then prod(extents) float32 values in row-major order.

void write_tensor(std::ostream& os, const Tensor<float>& tensor);
Tensor<float> read_tensor(std::istream& is);

}  // namespace tcsk
