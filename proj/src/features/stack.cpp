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

#include "h2v/error.hpp"
#include "h2v/features.hpp"
#include "h2v/image_io.hpp"

namespace h2v {

float FeatureMap::max_value() const { return data.empty() ? 0.0f : *std::max_element(data.begin(), data.end()); }
float FeatureMap::min_value() const { return data.empty() ? 0.0f : *std::min_element(data.begin(), data.end()); }

double FeatureMap::mean() const {
  double s = 0.0;
  for (float v : data) s += v;
  return data.empty() ? 0.0 : s / static_cast<double>(data.size());
}

FeatureMap FeatureStack::concat() const {
  FeatureMap out(width(), height(), channels());
  auto it = std::copy(sal.data.begin(), sal.data.end(), out.data.begin());
  it = std::copy(blur.data.begin(), blur.data.end(), it);
  std::copy(embed.data.begin(), embed.data.end(), it);
  return out;
}

nn::Tensor FeatureStack::to_tensor() const {
  const FeatureMap c = concat();
  nn::Tensor t({1, c.channels, c.height, c.width});
  std::copy(c.data.begin(), c.data.end(), t.data.begin());
  return t;
}

nn::Tensor frame_to_tensor(const Frame& frame) {
  const int w = frame.width();
  const int h = frame.height();
  const int ch = frame.channels();
  nn::Tensor t({1, 3, h, w});
  for (int c = 0; c < 3; ++c) {
    const int src_c = ch == 3 ? c : 0;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) t.at(0, c, y, x) = frame.at(x, y, src_c);
    }
  }
  return t;
}

FeatureMap EncoderProvider::compute(const Frame& frame) {
  const nn::Tensor e = encoder_.forward(frame_to_tensor(frame));
  const nn::Tensor r = nn::resize_map_forward(e, grid_cells(frame.height()), grid_cells(frame.width()));
  FeatureMap out(r.dim(3), r.dim(2), r.dim(1));
  std::transform(r.data.begin(), r.data.end(), out.data.begin(),
                 [](double v) { return static_cast<float>(v); });
  return out;
}

FeatureStack build_feature_stack(const Frame& frame, FeatureProvider& sal, FeatureProvider& blur,
                                 FeatureProvider& embed) {
  if (embed.channels() <= 0) fail(ErrorKind::kConfig, "embedding provider has no channels");
  const int gw = grid_cells(frame.width());
  const int gh = grid_cells(frame.height());
  FeatureStack s{sal.compute(frame), blur.compute(frame), embed.compute(frame)};
  for (const FeatureMap* m : {&s.sal, &s.blur, &s.embed}) {
    if (m->width != gw || m->height != gh) {
      fail(ErrorKind::kDimensionMismatch, "feature map is " + std::to_string(m->width) + "x" +
                                              std::to_string(m->height) + ", grid is " +
                                              std::to_string(gw) + "x" + std::to_string(gh));
    }
  }
  if (s.sal.channels != 1 || s.blur.channels != 1) {
    fail(ErrorKind::kDimensionMismatch, "saliency and blur maps must be single-channel");
  }
  return s;
}

FeatureStack build_feature_stack(const Frame& frame, nn::EncoderModel& encoder) {
  SaliencyProvider sal;
  TenengradProvider blur;
  EncoderProvider embed(encoder);
  return build_feature_stack(frame, sal, blur, embed);
}

void dump_feature_stack(const FeatureStack& stack, const std::filesystem::path& dir,
                        const std::string& prefix) {
  std::filesystem::create_directories(dir);
  const auto dump = [&](const FeatureMap& m, int c, const std::string& name) {
    Frame f(m.width, m.height, 1);
    float lo = 1e30f, hi = -1e30f;
    const std::size_t plane = static_cast<std::size_t>(m.width) * m.height;
    for (std::size_t i = 0; i < plane; ++i) {
      lo = std::min(lo, m.data[c * plane + i]);
      hi = std::max(hi, m.data[c * plane + i]);
    }
    const float range = hi - lo > 1e-12f ? hi - lo : 1.0f;
    for (std::size_t i = 0; i < plane; ++i) f.data()[i] = (m.data[c * plane + i] - lo) / range;
    write_pnm(f, dir / (prefix + "_" + name + ".pgm"));
  };
  dump(stack.sal, 0, "sal");
  dump(stack.blur, 0, "blur");
  for (int c = 0; c < stack.embed.channels; ++c) dump(stack.embed, c, "embed" + std::to_string(c));
}

}  // namespace h2v
