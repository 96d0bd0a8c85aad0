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

#include "tcsk/util/flat_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "tcsk/util/error.hpp"

namespace tcsk {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Drops a trailing comment that is not inside a string.
std::string_view strip_comment(std::string_view s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

std::optional<double> to_number(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

bool valid_key(std::string_view k) {
  return !k.empty() && std::all_of(k.begin(), k.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

}  // namespace

FlatConfig FlatConfig::parse(std::string_view text, const std::string& source) {
  FlatConfig cfg;
  cfg.source_ = source;
  std::string section;
  cfg.order_.push_back(section);
  cfg.values_[section];
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = trim(strip_comment(text.substr(pos, end - pos)));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    auto error = [&](const std::string& msg) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": " + msg);
    };
    if (line.front() == '[') {
      if (line.back() != ']') error("unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!valid_key(section)) error("invalid section name '" + section + "'");
      if (cfg.values_.count(section)) error("duplicate section [" + section + "]");
      cfg.order_.push_back(section);
      cfg.values_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) error("expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (!valid_key(key)) error("invalid key '" + key + "'");
    if (value.empty()) error("missing value for '" + key + "'");
    auto& entries = cfg.values_[section];
    if (std::any_of(entries.begin(), entries.end(), [&](const auto& e) { return e.first == key; })) {
      error("duplicate key '" + key + "'");
    }
    entries.push_back({key, Entry{value, line_no}});
    if (end == text.size()) break;
  }
  if (cfg.values_[""].empty()) {
    cfg.order_.erase(cfg.order_.begin());
    cfg.values_.erase("");
  }
  return cfg;
}

FlatConfig FlatConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str(), path.string());
}

std::vector<std::string> FlatConfig::keys(const std::string& section) const {
  std::vector<std::string> out;
  const auto it = values_.find(section);
  if (it == values_.end()) return out;
  for (const auto& e : it->second) out.push_back(e.first);
  return out;
}

bool FlatConfig::has(const std::string& section, const std::string& key) const {
  const auto it = values_.find(section);
  if (it == values_.end()) return false;
  return std::any_of(it->second.begin(), it->second.end(),
                     [&](const auto& e) { return e.first == key; });
}

const FlatConfig::Entry& FlatConfig::entry(const std::string& section,
                                           const std::string& key) const {
  const auto it = values_.find(section);
  if (it != values_.end()) {
    for (const auto& e : it->second) {
      if (e.first == key) return e.second;
    }
  }
  const std::string where = section.empty() ? key : section + "." + key;
  throw ConfigError(source_ + ": missing required key '" + where + "'");
}

void FlatConfig::fail(const Entry& e, const std::string& key, const std::string& msg) const {
  throw ConfigError(source_ + ":" + std::to_string(e.line) + ": '" + key + "' " + msg);
}

double FlatConfig::number(const std::string& section, const std::string& key) const {
  const Entry& e = entry(section, key);
  const auto v = to_number(e.raw);
  if (!v) fail(e, key, "must be a number, got " + e.raw);
  return *v;
}

double FlatConfig::number_or(const std::string& section, const std::string& key,
                             double fallback) const {
  return has(section, key) ? number(section, key) : fallback;
}

long long FlatConfig::integer(const std::string& section, const std::string& key) const {
  const double v = number(section, key);
  if (v != std::floor(v) || std::abs(v) > 9.0e15) {
    fail(entry(section, key), key, "must be an integer");
  }
  return static_cast<long long>(v);
}

bool FlatConfig::boolean(const std::string& section, const std::string& key) const {
  const Entry& e = entry(section, key);
  if (e.raw == "true") return true;
  if (e.raw == "false") return false;
  fail(e, key, "must be true or false, got " + e.raw);
}

std::string FlatConfig::string(const std::string& section, const std::string& key) const {
  const Entry& e = entry(section, key);
  if (e.raw.size() < 2 || e.raw.front() != '"' || e.raw.back() != '"') {
    fail(e, key, "must be a double-quoted string");
  }
  return e.raw.substr(1, e.raw.size() - 2);
}

std::vector<double> FlatConfig::numbers(const std::string& section, const std::string& key) const {
  const Entry& e = entry(section, key);
  if (e.raw.size() < 2 || e.raw.front() != '[' || e.raw.back() != ']') {
    fail(e, key, "must be an array like [1, 2, 3]");
  }
  std::vector<double> out;
  const std::string_view body = trim(std::string_view(e.raw).substr(1, e.raw.size() - 2));
  if (body.empty()) return out;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    const auto comma = std::min(body.find(',', pos), body.size());
    const std::string_view item = trim(body.substr(pos, comma - pos));
    if (item.empty() && comma == body.size() && !out.empty()) break;  // trailing comma
    const auto v = to_number(item);
    if (!v) fail(e, key, "has a non-numeric element '" + std::string(item) + "'");
    out.push_back(*v);
    pos = comma + 1;
  }
  return out;
}

void FlatConfig::require_known(const std::string& section,
                               const std::vector<std::string>& allowed) const {
  for (const auto& key : keys(section)) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      const std::string where = section.empty() ? key : section + "." + key;
      fail(entry(section, key), where, "is not a recognised setting");
    }
  }
}

void FlatConfig::require_sections(const std::vector<std::string>& allowed) const {
  for (const auto& s : order_) {
    if (std::find(allowed.begin(), allowed.end(), s) == allowed.end()) {
      throw ConfigError(source_ + ": unknown section [" + s + "]");
    }
  }
}

}  // namespace tcsk
