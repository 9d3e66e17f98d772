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

#include "h2v/nn/roi_align.hpp"

#include <cmath>

#include "h2v/error.hpp"

namespace h2v::nn {

namespace {

struct Tap {
  int y0, x0, y1, x1;
  double w00, w01, w10, w11;
  bool valid;
};

Tap bilinear_tap(int h, int w, double y, double x) {
  Tap t{};
  if (y < -1.0 || y > h || x < -1.0 || x > w) {
    t.valid = false;
    return t;
  }
  t.valid = true;
  y = std::max(y, 0.0);
  x = std::max(x, 0.0);
  t.y0 = static_cast<int>(y);
  t.x0 = static_cast<int>(x);
  if (t.y0 >= h - 1) {
    t.y0 = t.y1 = h - 1;
    y = t.y0;
  } else {
    t.y1 = t.y0 + 1;
  }
  if (t.x0 >= w - 1) {
    t.x0 = t.x1 = w - 1;
    x = t.x0;
  } else {
    t.x1 = t.x0 + 1;
  }
  const double ly = y - t.y0;
  const double lx = x - t.x0;
  const double hy = 1.0 - ly;
  const double hx = 1.0 - lx;
  t.w00 = hy * hx;
  t.w01 = hy * lx;
  t.w10 = ly * hx;
  t.w11 = ly * lx;
  return t;
}

struct RoiGeometry {
  double x0, y0, bin_w, bin_h;
};

RoiGeometry map_box(const BBox& b, const RoiAlignConfig& cfg) {
  const double x0 = b.x * cfg.spatial_scale;
  const double y0 = b.y * cfg.spatial_scale;
  const double w = b.w * cfg.spatial_scale;
  const double h = b.h * cfg.spatial_scale;
  if (!(w > 0.0) || !(h > 0.0) || !std::isfinite(x0) || !std::isfinite(y0)) {
    fail(ErrorKind::kGeometry, "degenerate RoI box after mapping to feature coords");
  }
  return {x0, y0, w / cfg.out_size, h / cfg.out_size};
}

struct CellTap {
  int cell;
  Tap tap;
};

// All valid bilinear taps of a box, each tagged with its output cell and
// already scaled by the 1/(s*s) averaging weight.
std::vector<CellTap> box_taps(const RoiGeometry& g, int fh, int fw, const RoiAlignConfig& cfg) {
  const int s = cfg.sampling_ratio;
  const double inv = 1.0 / (s * s);
  std::vector<CellTap> taps;
  taps.reserve(static_cast<std::size_t>(cfg.out_size) * cfg.out_size * s * s);
  for (int py = 0; py < cfg.out_size; ++py) {
    for (int px = 0; px < cfg.out_size; ++px) {
      for (int iy = 0; iy < s; ++iy) {
        const double y = g.y0 + py * g.bin_h + (iy + 0.5) * g.bin_h / s;
        for (int ix = 0; ix < s; ++ix) {
          const double x = g.x0 + px * g.bin_w + (ix + 0.5) * g.bin_w / s;
          Tap t = bilinear_tap(fh, fw, y, x);
          if (!t.valid) continue;
          t.w00 *= inv;
          t.w01 *= inv;
          t.w10 *= inv;
          t.w11 *= inv;
          taps.push_back({py * cfg.out_size + px, t});
        }
      }
    }
  }
  return taps;
}

}  // namespace

double bilinear_sample(const double* plane, int h, int w, double y, double x) {
  const Tap t = bilinear_tap(h, w, y, x);
  if (!t.valid) return 0.0;
  return t.w00 * plane[t.y0 * w + t.x0] + t.w01 * plane[t.y0 * w + t.x1] +
         t.w10 * plane[t.y1 * w + t.x0] + t.w11 * plane[t.y1 * w + t.x1];
}

Tensor roi_align_forward(const Tensor& fmap, const std::vector<BBox>& boxes,
                         const RoiAlignConfig& cfg) {
  if (fmap.rank() != 4 || fmap.dim(0) != 1) {
    fail(ErrorKind::kConfig, "roi_align expects a (1,C,H,W) map, got " + shape_str(fmap.shape));
  }
  const int c_count = fmap.dim(1);
  const int fh = fmap.dim(2);
  const int fw = fmap.dim(3);
  const int out = cfg.out_size;
  Tensor y({static_cast<int>(boxes.size()), c_count, out, out});
  for (std::size_t n = 0; n < boxes.size(); ++n) {
    const auto taps = box_taps(map_box(boxes[n], cfg), fh, fw, cfg);
    for (int c = 0; c < c_count; ++c) {
      const double* plane = fmap.data.data() + static_cast<std::size_t>(c) * fh * fw;
      double* dst = &y.at(static_cast<int>(n), c, 0, 0);
      for (const auto& [cell, t] : taps) {
        dst[cell] += t.w00 * plane[t.y0 * fw + t.x0] + t.w01 * plane[t.y0 * fw + t.x1] +
                     t.w10 * plane[t.y1 * fw + t.x0] + t.w11 * plane[t.y1 * fw + t.x1];
      }
    }
  }
  check_finite(y, "roi_align");
  return y;
}

Tensor roi_align_backward(const Tensor& dy, const std::vector<int>& fmap_shape,
                          const std::vector<BBox>& boxes, const RoiAlignConfig& cfg) {
  Tensor dfmap(fmap_shape);
  const int c_count = fmap_shape[1];
  const int fh = fmap_shape[2];
  const int fw = fmap_shape[3];
  for (std::size_t n = 0; n < boxes.size(); ++n) {
    const auto taps = box_taps(map_box(boxes[n], cfg), fh, fw, cfg);
    for (int c = 0; c < c_count; ++c) {
      double* plane = dfmap.data.data() + static_cast<std::size_t>(c) * fh * fw;
      const double* src = dy.data.data() + (n * c_count + c) * cfg.out_size * cfg.out_size;
      for (const auto& [cell, t] : taps) {
        const double gv = src[cell];
        plane[t.y0 * fw + t.x0] += t.w00 * gv;
        plane[t.y0 * fw + t.x1] += t.w01 * gv;
        plane[t.y1 * fw + t.x0] += t.w10 * gv;
        plane[t.y1 * fw + t.x1] += t.w11 * gv;
      }
    }
  }
  return dfmap;
}

}  // namespace h2v::nn
