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

#include "h2v/frame.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "h2v/error.hpp"

namespace h2v {

namespace {

void check_dims(int width, int height, int channels) {
  if (width <= 0 || height <= 0) {
    fail(ErrorKind::kGeometry, "frame dims must be positive, got " + std::to_string(width) +
                                   "x" + std::to_string(height));
  }
  if (channels != 1 && channels != 3) {
    fail(ErrorKind::kGeometry, "frame channels must be 1 or 3, got " + std::to_string(channels));
  }
}

}  // namespace

Frame::Frame(int width, int height, int channels, float fill)
    : width_(width), height_(height), channels_(channels) {
  check_dims(width, height, channels);
  data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

Frame::Frame(int width, int height, int channels, std::vector<float> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
  check_dims(width, height, channels);
  if (data_.size() != static_cast<std::size_t>(width) * height * channels) {
    fail(ErrorKind::kGeometry, "frame data length does not match dims");
  }
}

Frame Frame::to_gray() const {
  if (channels_ == 1) return *this;
  Frame out(width_, height_, 1);
  const std::size_t n = static_cast<std::size_t>(width_) * height_;
  for (std::size_t i = 0; i < n; ++i) {
    const float* p = &data_[i * 3];
    out.data_[i] = 0.299f * p[0] + 0.587f * p[1] + 0.114f * p[2];
  }
  return out;
}

Frame resize_bilinear(const Frame& src, int width, int height) {
  Frame out(width, height, src.channels());
  const double sx = static_cast<double>(src.width()) / width;
  const double sy = static_cast<double>(src.height()) / height;
  const int c_count = src.channels();
  for (int y = 0; y < height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, src.height() - 1.0);
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, src.height() - 1);
    const double ay = fy - y0;
    for (int x = 0; x < width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, src.width() - 1.0);
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, src.width() - 1);
      const double ax = fx - x0;
      for (int c = 0; c < c_count; ++c) {
        const double top = (1 - ax) * src.at(x0, y0, c) + ax * src.at(x1, y0, c);
        const double bot = (1 - ax) * src.at(x0, y1, c) + ax * src.at(x1, y1, c);
        out.at(x, y, c) = static_cast<float>((1 - ay) * top + ay * bot);
      }
    }
  }
  return out;
}

Frame resize_area(const Frame& src, int width, int height) {
  Frame out(width, height, src.channels());
  const double sx = static_cast<double>(src.width()) / width;
  const double sy = static_cast<double>(src.height()) / height;
  const int c_count = src.channels();
  std::vector<double> acc(c_count);
  for (int y = 0; y < height; ++y) {
    const double y0 = y * sy;
    const double y1 = (y + 1) * sy;
    for (int x = 0; x < width; ++x) {
      const double x0 = x * sx;
      const double x1 = (x + 1) * sx;
      std::fill(acc.begin(), acc.end(), 0.0);
      double total = 0.0;
      for (int py = static_cast<int>(std::floor(y0)); py < static_cast<int>(std::ceil(y1)); ++py) {
        const double wy = std::min(y1, py + 1.0) - std::max(y0, static_cast<double>(py));
        if (wy <= 0) continue;
        for (int px = static_cast<int>(std::floor(x0)); px < static_cast<int>(std::ceil(x1));
             ++px) {
          const double wx = std::min(x1, px + 1.0) - std::max(x0, static_cast<double>(px));
          if (wx <= 0) continue;
          const double wgt = wx * wy;
          total += wgt;
          for (int c = 0; c < c_count; ++c) acc[c] += wgt * src.at(px, py, c);
        }
      }
      for (int c = 0; c < c_count; ++c) out.at(x, y, c) = static_cast<float>(acc[c] / total);
    }
  }
  return out;
}

Frame resize_short_side(const Frame& src, int short_side) {
  const int w = src.width();
  const int h = src.height();
  if (std::min(w, h) == short_side) return src;
  int nw;
  int nh;
  if (w <= h) {
    nw = short_side;
    nh = static_cast<int>(std::lround(static_cast<double>(h) * short_side / w));
  } else {
    nh = short_side;
    nw = static_cast<int>(std::lround(static_cast<double>(w) * short_side / h));
  }
  if (nw < w && nh < h) return resize_area(src, nw, nh);
  return resize_bilinear(src, nw, nh);
}

Frame crop(const Frame& src, int x, int y, int w, int h) {
  if (w <= 0 || h <= 0 || x < 0 || y < 0 || x + w > src.width() || y + h > src.height()) {
    fail(ErrorKind::kGeometry, "crop window (" + std::to_string(x) + "," + std::to_string(y) +
                                   "," + std::to_string(w) + "," + std::to_string(h) +
                                   ") outside frame " + std::to_string(src.width()) + "x" +
                                   std::to_string(src.height()));
  }
  Frame out(w, h, src.channels());
  const int c = src.channels();
  for (int row = 0; row < h; ++row) {
    const float* in = &src.data()[(static_cast<std::size_t>(y + row) * src.width() + x) * c];
    std::copy(in, in + static_cast<std::size_t>(w) * c,
              &out.data()[static_cast<std::size_t>(row) * w * c]);
  }
  return out;
}

}  // namespace h2v
