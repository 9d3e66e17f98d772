// Copyright 2026 The H2V Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "h2v/nn/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <vector>

#include "h2v/error.hpp"

namespace h2v::nn {

namespace {

constexpr std::array<char, 8> kMagic = {'H', '2', 'V', 'C', 'K', 'P', 'T', '\0'};

void put_u32(std::ostream& os, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

void put_string(std::ostream& os, const std::string& s) {
  put_u32(os, static_cast<std::uint32_t>(s.size()));
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4)) fail(ErrorKind::kSchema, "checkpoint truncated");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

std::string get_string(std::istream& is) {
  const std::uint32_t n = get_u32(is);
  if (n > (1u << 26)) fail(ErrorKind::kSchema, "checkpoint string too long");
  std::string s(n, '\0');
  if (n && !is.read(s.data(), n)) fail(ErrorKind::kSchema, "checkpoint truncated");
  return s;
}

struct StoredTensor {
  std::vector<int> shape;
  std::vector<float> values;
};

std::string read_header(std::istream& is) {
  std::array<char, 8> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic) {
    fail(ErrorKind::kSchema, "not an h2v checkpoint (bad magic)");
  }
  const std::uint32_t version = get_u32(is);
  if (version != kCheckpointVersion) {
    fail(ErrorKind::kSchema, "unsupported checkpoint version " + std::to_string(version));
  }
  return get_string(is);
}

}  // namespace

void write_checkpoint(std::ostream& os, const std::string& config_json, const ParamList& params) {
  os.write(kMagic.data(), kMagic.size());
  put_u32(os, kCheckpointVersion);
  put_string(os, config_json);
  put_u32(os, static_cast<std::uint32_t>(params.size()));
  for (const auto* p : params) {
    put_string(os, p->name);
    put_u32(os, static_cast<std::uint32_t>(p->value.shape.size()));
    for (int d : p->value.shape) put_u32(os, static_cast<std::uint32_t>(d));
    for (double v : p->value.data) put_u32(os, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  }
}

void save_checkpoint(const std::string& path, const std::string& config_json,
                     const ParamList& params) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(ErrorKind::kIo, "cannot open checkpoint for writing: " + path);
  write_checkpoint(os, config_json, params);
  if (!os) fail(ErrorKind::kIo, "failed writing checkpoint: " + path);
}

std::string read_checkpoint_config(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(ErrorKind::kIo, "cannot open checkpoint: " + path);
  return read_header(is);
}

std::string read_checkpoint(std::istream& is, const ParamList& params) {
  std::string config = read_header(is);
  const std::uint32_t count = get_u32(is);
  std::map<std::string, StoredTensor> stored;
  for (std::uint32_t i = 0; i < count; ++i) {
    std::string name = get_string(is);
    StoredTensor t;
    const std::uint32_t rank = get_u32(is);
    if (rank > 8) fail(ErrorKind::kSchema, "checkpoint tensor rank too large: " + name);
    for (std::uint32_t r = 0; r < rank; ++r) t.shape.push_back(static_cast<int>(get_u32(is)));
    const std::size_t n = Tensor::numel(t.shape);
    if (n > (1u << 28)) fail(ErrorKind::kSchema, "checkpoint tensor too large: " + name);
    t.values.resize(n);
    for (auto& v : t.values) v = std::bit_cast<float>(get_u32(is));
    stored.emplace(std::move(name), std::move(t));
  }
  for (auto* p : params) {
    auto it = stored.find(p->name);
    if (it == stored.end()) fail(ErrorKind::kSchema, "checkpoint lacks tensor " + p->name);
    if (it->second.shape != p->value.shape) {
      fail(ErrorKind::kSchema, "checkpoint shape mismatch for " + p->name + ": " +
                                   shape_str(it->second.shape) + " vs " + shape_str(p->value.shape));
    }
    for (std::size_t k = 0; k < p->value.size(); ++k) p->value.data[k] = it->second.values[k];
    p->grad.zero();
    p->velocity.zero();
  }
  return config;
}

std::string load_checkpoint(const std::string& path, const ParamList& params) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(ErrorKind::kIo, "cannot open checkpoint: " + path);
  return read_checkpoint(is, params);
}

}  // namespace h2v::nn
