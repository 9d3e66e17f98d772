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

#include <algorithm>
#include <cmath>

#include "h2v/features.hpp"

namespace h2v {

FeatureMap tenengrad_map(const Frame& frame, const TenengradConfig& cfg) {
  const Frame g = frame.to_gray();
  const int w = g.width();
  const int h = g.height();
  const int gw = grid_cells(w);
  const int gh = grid_cells(h);
  std::vector<double> sum(static_cast<std::size_t>(gw) * gh, 0.0);
  std::vector<int> count(sum.size(), 0);
  const auto px = [&](int x, int y) {
    return static_cast<double>(g.at(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1)));
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double gx = (px(x + 1, y - 1) + 2 * px(x + 1, y) + px(x + 1, y + 1) - px(x - 1, y - 1) -
                         2 * px(x - 1, y) - px(x - 1, y + 1)) / 8.0;
      const double gy = (px(x - 1, y + 1) + 2 * px(x, y + 1) + px(x + 1, y + 1) - px(x - 1, y - 1) -
                         2 * px(x, y - 1) - px(x + 1, y - 1)) / 8.0;
      double mag = std::sqrt(gx * gx + gy * gy);
      if (mag < cfg.grad_threshold) mag = 0.0;
      const std::size_t cell = static_cast<std::size_t>(y / kFeatureStride) * gw + x / kFeatureStride;
      sum[cell] += mag;
      ++count[cell];
    }
  }
  FeatureMap out(gw, gh, 1);
  double peak = 0.0;
  for (std::size_t i = 0; i < sum.size(); ++i) {
    sum[i] /= count[i];
    peak = std::max(peak, sum[i]);
  }
  const double scale = peak < 1e-6 ? 1.0 : 1.0 / peak;
  for (std::size_t i = 0; i < sum.size(); ++i) out.data[i] = static_cast<float>(sum[i] * scale);
  return out;
}

}  // namespace h2v
