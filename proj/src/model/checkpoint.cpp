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

#include "tcsk/model/checkpoint.hpp"

#include <fstream>
#include <map>

#include "tcsk/numerics/serialize.hpp"
#include "tcsk/util/binary_io.hpp"
#include "tcsk/util/error.hpp"

namespace tcsk {
namespace {

constexpr std::uint32_t kMaxEntries = 1u << 16;

std::vector<std::pair<std::string, double>> config_fields(const TcskNetConfig& c) {
  return {{"in_channels", static_cast<double>(c.in_channels)},
          {"c_channels", static_cast<double>(c.c_channels)},
          {"l_size", static_cast<double>(c.l_size)},
          {"p_size", static_cast<double>(c.p_size)},
          {"dropout", c.dropout},
          {"n_classes", static_cast<double>(c.n_classes)},
          {"separable", c.separable ? 1.0 : 0.0}};
}

TcskNetConfig config_from(const std::map<std::string, double>& fields) {
  auto get = [&](const std::string& key) {
    const auto it = fields.find(key);
    if (it == fields.end()) throw FormatError("checkpoint config lacks field '" + key + "'");
    return it->second;
  };
  TcskNetConfig c;
  c.in_channels = static_cast<Index>(get("in_channels"));
  c.c_channels = static_cast<Index>(get("c_channels"));
  c.l_size = static_cast<Index>(get("l_size"));
  c.p_size = static_cast<Index>(get("p_size"));
  c.dropout = get("dropout");
  c.n_classes = static_cast<Index>(get("n_classes"));
  c.separable = get("separable") != 0.0;
  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw FormatError(std::string("checkpoint config invalid: ") + e.what());
  }
  return c;
}

Tensor<float> as_tensor(const Vector<float>& v) { return Tensor<float>({v.size()}, v); }

std::uint32_t read_count(std::istream& is, std::string_view what) {
  const std::uint32_t n = binary::read_u32(is, what);
  if (n > kMaxEntries) throw FormatError("implausible " + std::string(what) + " " + std::to_string(n));
  return n;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const TcskNet<float>& net,
                     const FeatureStats& stats, const std::vector<std::string>& labels) {
  TcskNet<float> copy = net;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create checkpoint " + path.string());
  binary::write_magic(out, "TSKN");
  binary::write_u32(out, kCheckpointVersion);

  const auto fields = config_fields(copy.config());
  binary::write_u32(out, static_cast<std::uint32_t>(fields.size()));
  for (const auto& [key, value] : fields) {
    binary::write_string(out, key);
    binary::write_f64(out, value);
  }

  binary::write_u32(out, static_cast<std::uint32_t>(stats.mean.size()));
  for (Index i = 0; i < stats.mean.size(); ++i) binary::write_f32(out, stats.mean[i]);
  for (Index i = 0; i < stats.stddev.size(); ++i) binary::write_f32(out, stats.stddev[i]);

  binary::write_u32(out, static_cast<std::uint32_t>(labels.size()));
  for (const auto& label : labels) binary::write_string(out, label);

  const auto params = copy.parameters();
  const auto bn = copy.batchnorm_stats();
  binary::write_u32(out, static_cast<std::uint32_t>(params.size() + 2 * bn.size()));
  for (const auto& [name, tensor] : params) {
    binary::write_string(out, name);
    write_tensor(out, *tensor);
  }
  for (const auto& [name, s] : bn) {
    binary::write_string(out, name + ".running_mean");
    write_tensor(out, as_tensor(s->mean));
    binary::write_string(out, name + ".running_var");
    write_tensor(out, as_tensor(s->var));
  }
  if (!out) throw IoError("failed writing checkpoint " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  try {
    binary::expect_magic(in, "TSKN", "checkpoint");
    const std::uint32_t version = binary::read_u32(in, "checkpoint version");
    if (version != kCheckpointVersion) {
      throw FormatError("unsupported checkpoint version " + std::to_string(version) +
                        " (expected " + std::to_string(kCheckpointVersion) + ")");
    }

    std::map<std::string, double> fields;
    const std::uint32_t n_fields = read_count(in, "config field count");
    for (std::uint32_t i = 0; i < n_fields; ++i) {
      std::string key = binary::read_string(in, "config field name");
      fields[std::move(key)] = binary::read_f64(in, "config field value");
    }
    Checkpoint ck{TcskNet<float>(config_from(fields)), {}, {}};

    const std::uint32_t n_coeffs = read_count(in, "statistics length");
    ck.stats.mean.resize(n_coeffs);
    ck.stats.stddev.resize(n_coeffs);
    for (std::uint32_t i = 0; i < n_coeffs; ++i) ck.stats.mean[i] = binary::read_f32(in, "feature mean");
    for (std::uint32_t i = 0; i < n_coeffs; ++i) {
      ck.stats.stddev[i] = binary::read_f32(in, "feature stddev");
    }

    const std::uint32_t n_labels = read_count(in, "label count");
    for (std::uint32_t i = 0; i < n_labels; ++i) ck.labels.push_back(binary::read_string(in, "label"));

    std::map<std::string, Tensor<float>> tensors;
    const std::uint32_t n_tensors = read_count(in, "tensor count");
    for (std::uint32_t i = 0; i < n_tensors; ++i) {
      std::string name = binary::read_string(in, "tensor name");
      tensors[std::move(name)] = read_tensor(in);
    }
    auto take = [&](const std::string& name, const Shape& shape) {
      const auto it = tensors.find(name);
      if (it == tensors.end()) throw FormatError("checkpoint lacks tensor '" + name + "'");
      if (it->second.shape() != shape) {
        throw FormatError("tensor '" + name + "' has shape " + shape_string(it->second.shape()) +
                          ", configuration expects " + shape_string(shape));
      }
      Tensor<float> t = std::move(it->second);
      tensors.erase(it);
      return t;
    };
    for (auto& [name, tensor] : ck.net.parameters()) *tensor = take(name, tensor->shape());
    for (auto& [name, s] : ck.net.batchnorm_stats()) {
      const Shape shape{static_cast<Index>(s->mean.size())};
      s->mean = take(name + ".running_mean", shape).data();
      s->var = take(name + ".running_var", shape).data();
    }
    if (!tensors.empty()) throw FormatError("unexpected tensor '" + tensors.begin()->first + "'");
    return ck;
  } catch (const FormatError& e) {
    throw FormatError(std::string(e.what()) + " in " + path.string());
  }
}

}  // namespace tcsk
