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

#include "h2v/pipeline.hpp"

namespace h2v {

CandidateRecord detect_bright_regions(const Frame& frame, const std::string& id,
                                      const BrightDetectorConfig& cfg) {
  const Frame gray = frame.to_gray();
  const int w = gray.width();
  const int h = gray.height();
  std::vector<int> label(static_cast<std::size_t>(w) * h, -1);
  std::vector<int> stack;
  CandidateRecord rec;
  rec.image_id = id;
  rec.width = w;
  rec.height = h;
  int next = 0;
  for (int y0 = 0; y0 < h; ++y0) {
    for (int x0 = 0; x0 < w; ++x0) {
      const std::size_t i0 = static_cast<std::size_t>(y0) * w + x0;
      if (label[i0] >= 0 || gray.at(x0, y0) <= cfg.luma_threshold) continue;
      int minx = x0, maxx = x0, miny = y0, maxy = y0, area = 0;
      stack.assign(1, static_cast<int>(i0));
      label[i0] = next;
      while (!stack.empty()) {
        const int i = stack.back();
        stack.pop_back();
        const int x = i % w;
        const int y = i / w;
        ++area;
        minx = std::min(minx, x);
        maxx = std::max(maxx, x);
        miny = std::min(miny, y);
        maxy = std::max(maxy, y);
        const int nx[4] = {x - 1, x + 1, x, x};
        const int ny[4] = {y, y, y - 1, y + 1};
        for (int k = 0; k < 4; ++k) {
          if (nx[k] < 0 || ny[k] < 0 || nx[k] >= w || ny[k] >= h) continue;
          const std::size_t j = static_cast<std::size_t>(ny[k]) * w + nx[k];
          if (label[j] >= 0 || gray.at(nx[k], ny[k]) <= cfg.luma_threshold) continue;
          label[j] = next;
          stack.push_back(static_cast<int>(j));
        }
      }
      ++next;
      if (area < cfg.min_area) continue;
      CandidateEntry e;
      e.face = BBox{double(minx), double(miny), double(maxx - minx + 1), double(maxy - miny + 1)};
      rec.entries.push_back(e);
    }
  }
  return rec;
}

}  // namespace h2v
