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

#include <filesystem>
#include <string>

#include "h2v/frame.hpp"

namespace h2v {

// Binary PPM (P6) and PGM (P5), 8-bit.
Frame read_pnm(const std::filesystem::path& path);
void write_pnm(const Frame& frame, const std::filesystem::path& path);

// 8-bit PNG via libpng. Alpha is dropped, palettes and 16-bit are reduced.
Frame read_png(const std::filesystem::path& path);
void write_png(const Frame& frame, const std::filesystem::path& path);

// Dispatches on extension (.png, .ppm, .pgm, .pnm).
Frame read_image(const std::filesystem::path& path);
void write_image(const Frame& frame, const std::filesystem::path& path);

// Quantizes a [0,1] value to 8 bits with round-half-up and clamping.
unsigned char to_byte(float v);

}  // namespace h2v
