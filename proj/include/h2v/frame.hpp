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

#include <cstddef>
#include <vector>

#include "h2v/geometry.hpp"

namespace h2v {

// Row-major interleaved intensity grid with values in [0,1].
class Frame {
 public:
  // Ingested frames must be at least this large on both axes.
  static constexpr int kMinDim = 16;

  Frame() = default;
  // Throws kGeometry on non-positive dims or channels other than 1 or 3.
  Frame(int width, int height, int channels, float fill = 0.0f);
  Frame(int width, int height, int channels, std::vector<float> data);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  bool empty() const { return data_.empty(); }

  float& at(int x, int y, int c = 0) {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }
  float at(int x, int y, int c = 0) const {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }

  const std::vector<float>& data() const { return data_; }
  std::vector<float>& data() { return data_; }

  // Single-channel luma with weights 0.299/0.587/0.114 (identity for gray).
  Frame to_gray() const;

  bool operator==(const Frame&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<float> data_;
};

struct FrameSequence {
  std::vector<Frame> frames;
  int fps_num = 25;
  int fps_den = 1;

  std::size_t size() const { return frames.size(); }
  bool empty() const { return frames.empty(); }
  const Frame& operator[](std::size_t i) const { return frames[i]; }
  int width() const { return frames.empty() ? 0 : frames.front().width(); }
  int height() const { return frames.empty() ? 0 : frames.front().height(); }
};

// Bilinear resample to an exact size (pixel-center aligned).
Frame resize_bilinear(const Frame& src, int width, int height);

// Box-average downsample; used where aliasing matters more than sharpness.
Frame resize_area(const Frame& src, int width, int height);

// Resizes so the shorter side equals short_side, preserving aspect.
Frame resize_short_side(const Frame& src, int short_side);

// Copies the integer window [x, x+w) x [y, y+h). Throws kGeometry if the
// window leaves the frame.
Frame crop(const Frame& src, int x, int y, int w, int h);

}  // namespace h2v
