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

#include "tcsk/augment/pgm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "tcsk/util/error.hpp"

namespace tcsk {

void write_pgm(const std::filesystem::path& path, const Eigen::MatrixXf& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create image " + path.string());
  out << "P5\n" << image.cols() << ' ' << image.rows() << "\n255\n";
  for (Eigen::Index r = 0; r < image.rows(); ++r) {
    for (Eigen::Index c = 0; c < image.cols(); ++c) {
      const float v = std::clamp(image(r, c), 0.0f, 1.0f);
      out.put(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0f))));
    }
  }
  if (!out) throw IoError("failed writing image " + path.string());
}

}  // namespace tcsk
