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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "h2v/frame.hpp"

namespace h2v {

enum class Y4mChroma { k420, k444 };

struct Y4mHeader {
  int width = 0;
  int height = 0;
  int fps_num = 25;
  int fps_den = 1;
  Y4mChroma chroma = Y4mChroma::k420;
};

// Raw planar 8-bit picture as stored in the stream.
struct YuvPicture {
  int width = 0;
  int height = 0;
  Y4mChroma chroma = Y4mChroma::k420;
  std::vector<std::uint8_t> y, u, v;

  int chroma_width() const { return chroma == Y4mChroma::k444 ? width : (width + 1) / 2; }
  int chroma_height() const { return chroma == Y4mChroma::k444 ? height : (height + 1) / 2; }
};

// Parses the stream header line (W, H, F, C tokens; others are ignored).
Y4mHeader parse_y4m_header(const std::string& line);
std::string format_y4m_header(const Y4mHeader& header);

// Full-range BT.601 conversions. 4:2:0 upsampling replicates each chroma
// sample over its 2x2 block; downsampling averages the block.
Frame yuv_to_frame(const YuvPicture& pic);
YuvPicture frame_to_yuv(const Frame& frame, Y4mChroma chroma);

std::vector<YuvPicture> read_y4m_pictures(std::istream& in, Y4mHeader* header_out = nullptr);
void write_y4m_pictures(std::ostream& out, const Y4mHeader& header,
                        const std::vector<YuvPicture>& pictures);

FrameSequence read_y4m(const std::filesystem::path& path);
void write_y4m(const FrameSequence& seq, const std::filesystem::path& path,
               Y4mChroma chroma = Y4mChroma::k420);

}  // namespace h2v
