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

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>

namespace h2v {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Axis-aligned pixel rectangle, top-left origin, half-open [x, x+w) x [y, y+h).
struct BBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double left() const { return x; }
  double top() const { return y; }
  double right() const { return x + w; }
  double bottom() const { return y + h; }
  double area() const { return w * h; }
  Point center() const { return {x + w / 2.0, y + h / 2.0}; }

  bool valid() const {
    return w > 0.0 && h > 0.0 && std::isfinite(x) && std::isfinite(y) &&
           std::isfinite(x + w) && std::isfinite(y + h);
  }

  std::array<double, 4> as_array() const { return {x, y, w, h}; }
  static BBox from_array(const std::array<double, 4>& a) { return {a[0], a[1], a[2], a[3]}; }

  bool operator==(const BBox&) const = default;
};

inline double intersection_area(const BBox& a, const BBox& b) {
  const double iw = std::min(a.right(), b.right()) - std::max(a.left(), b.left());
  const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.top(), b.top());
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  return iw * ih;
}

inline double iou(const BBox& a, const BBox& b) {
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

// Clips a box to [0,W)x[0,H). Returns nullopt when nothing is left.
inline std::optional<BBox> clamp_to_frame(const BBox& b, double frame_w, double frame_h) {
  const double x0 = std::clamp(b.left(), 0.0, frame_w);
  const double y0 = std::clamp(b.top(), 0.0, frame_h);
  const double x1 = std::clamp(b.right(), 0.0, frame_w);
  const double y1 = std::clamp(b.bottom(), 0.0, frame_h);
  if (x1 - x0 <= 0.0 || y1 - y0 <= 0.0) return std::nullopt;
  return BBox{x0, y0, x1 - x0, y1 - y0};
}

inline BBox union_box(const BBox& a, const BBox& b) {
  const double x0 = std::min(a.left(), b.left());
  const double y0 = std::min(a.top(), b.top());
  const double x1 = std::max(a.right(), b.right());
  const double y1 = std::max(a.bottom(), b.bottom());
  return {x0, y0, x1 - x0, y1 - y0};
}

inline BBox scale_box(const BBox& b, double sx, double sy) {
  return {b.x * sx, b.y * sy, b.w * sx, b.h * sy};
}

}  // namespace h2v
