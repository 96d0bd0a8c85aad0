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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tcsk {

/// A flat TOML subset: `[section]` headers and `key = value` lines, where a value
/// is a number, `true`/`false`, a double-quoted string, or a one-line array of
/// numbers. `#` starts a comment. Keys before the first header belong to section "".
class FlatConfig {
 public:
  /// `source` names the text in error messages.
  static FlatConfig parse(std::string_view text, const std::string& source = "<config>");
  static FlatConfig load(const std::filesystem::path& path);

  /// Sections in order of first appearance.
  const std::vector<std::string>& sections() const { return order_; }
  std::vector<std::string> keys(const std::string& section) const;
  bool has(const std::string& section, const std::string& key) const;

  double number(const std::string& section, const std::string& key) const;
  double number_or(const std::string& section, const std::string& key, double fallback) const;
  /// Numbers that must be integral.
  long long integer(const std::string& section, const std::string& key) const;
  bool boolean(const std::string& section, const std::string& key) const;
  std::string string(const std::string& section, const std::string& key) const;
  std::vector<double> numbers(const std::string& section, const std::string& key) const;

  /// Throws ConfigError naming the first key of `section` not in `allowed`.
  void require_known(const std::string& section, const std::vector<std::string>& allowed) const;
  /// Throws ConfigError naming the first section not in `allowed`.
  void require_sections(const std::vector<std::string>& allowed) const;

 private:
  struct Entry {
    std::string raw;
    int line = 0;
  };
  const Entry& entry(const std::string& section, const std::string& key) const;
  [[noreturn]] void fail(const Entry& e, const std::string& key, const std::string& msg) const;

  std::string source_;
  std::vector<std::string> order_;
  std::map<std::string, std::vector<std::pair<std::string, Entry>>> values_;
};

}  // namespace tcsk
