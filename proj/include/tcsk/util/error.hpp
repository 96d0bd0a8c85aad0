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

#include <stdexcept>
#include <string>

namespace tcsk {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tensor extents that do not fit the operation.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid hyperparameters, presets or flags.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or truncated binary/text file.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Filesystem failures; the message always carries the path.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A numeric computation produced NaN/Inf or needs state that does not exist yet.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace tcsk
