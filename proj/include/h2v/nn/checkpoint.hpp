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

#pragma once

#include <iosfwd>
#include <string>

#include "h2v/nn/tensor.hpp"

namespace h2v::nn {

// Binary layout, all integers u32 little-endian:
//   "H2VCKPT\0", version, len + model config JSON,
//   count, then per tensor: len + name, rank, dims..., f32 LE values.
inline constexpr unsigned kCheckpointVersion = 1;

void write_checkpoint(std::ostream& os, const std::string& config_json, const ParamList& params);
void save_checkpoint(const std::string& path, const std::string& config_json,
                     const ParamList& params);

// Reads the config JSON only, so callers can build the matching model first.
std::string read_checkpoint_config(const std::string& path);

// Fills params by name; every param must be present with the same shape.
// Returns the stored config JSON. Errors: kIo (unreadable), kSchema (bad
// magic, version, missing tensor, shape mismatch).
std::string read_checkpoint(std::istream& is, const ParamList& params);
std::string load_checkpoint(const std::string& path, const ParamList& params);

}  // namespace h2v::nn
