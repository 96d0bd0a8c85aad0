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

#include "tcsk/data/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "tcsk/util/error.hpp"

namespace tcsk {

std::string to_string(Split split) { return split == Split::train ? "train" : "test"; }

std::optional<Split> parse_split(std::string_view name) {
  if (name == "train") return Split::train;
  if (name == "test") return Split::test;
  return std::nullopt;
}

std::size_t Manifest::label_index(const std::string& label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw FormatError("unknown label '" + label + "'");
  return static_cast<std::size_t>(it - labels.begin());
}

std::size_t Manifest::count(Split split) const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [&](const auto& e) { return e.split == split; }));
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Splits one CSV line; double-quoted fields may contain commas and "" escapes.
std::vector<std::string> split_csv(const std::string& line, bool& ok) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  ok = true;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"' && trim(field).empty()) {
      quoted = true;
      was_quoted = true;
      field.clear();
    } else if (c == ',') {
      out.push_back(was_quoted ? field : trim(field));
      field.clear();
      was_quoted = false;
    } else {
      field += c;
    }
  }
  if (quoted) ok = false;
  out.push_back(was_quoted ? field : trim(field));
  return out;
}

std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace

Manifest load_manifest(const std::filesystem::path& path, const std::vector<std::string>& classes) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path.string());

  auto fail = [&](std::size_t line, const std::string& msg) -> FormatError {
    return FormatError(path.string() + ":" + std::to_string(line) + ": " + msg);
  };

  Manifest m;
  m.root = path.parent_path();
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::set<std::string> seen_paths;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    bool ok = true;
    auto fields = split_csv(line, ok);
    if (!ok) throw fail(line_no, "unterminated quote");
    if (!header_seen) {
      if (fields != std::vector<std::string>{"path", "label", "device", "split"})
        throw fail(line_no, "expected header 'path,label,device,split'");
      header_seen = true;
      continue;
    }
    if (fields.size() != 4)
      throw fail(line_no, "expected 4 fields, got " + std::to_string(fields.size()));
    ManifestEntry e{fields[0], fields[1], fields[2], Split::train};
    if (e.path.empty()) throw fail(line_no, "empty path");
    if (e.label.empty()) throw fail(line_no, "empty label");
    auto split = parse_split(fields[3]);
    if (!split) throw fail(line_no, "bad split '" + fields[3] + "' (expected train or test)");
    e.split = *split;
    if (!classes.empty() && std::find(classes.begin(), classes.end(), e.label) == classes.end())
      throw fail(line_no, "unknown label '" + e.label + "'");
    if (!seen_paths.insert(e.path).second) throw fail(line_no, "duplicate path '" + e.path + "'");
    if (!std::filesystem::is_regular_file(m.root / e.path))
      throw fail(line_no, "missing file '" + (m.root / e.path).string() + "'");
    m.entries.push_back(std::move(e));
  }
  if (!header_seen) throw fail(line_no, "missing header 'path,label,device,split'");

  if (!classes.empty()) {
    m.labels = classes;
  } else {
    std::set<std::string> unique;
    for (const auto& e : m.entries) unique.insert(e.label);
    m.labels.assign(unique.begin(), unique.end());
  }
  return m;
}

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create manifest " + path.string());
  out << "path,label,device,split\n";
  for (const auto& e : entries)
    out << quote_csv(e.path) << ',' << quote_csv(e.label) << ',' << quote_csv(e.device) << ','
        << to_string(e.split) << '\n';
  if (!out) throw IoError("failed writing manifest " + path.string());
}

}  // namespace tcsk
