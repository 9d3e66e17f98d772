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

#include "h2v/crop_planner.hpp"

#include <algorithm>
#include <cmath>

#include "h2v/error.hpp"

namespace h2v {

int round_to_even(double v) {
  const double lo = 2.0 * std::floor(v / 2.0);
  return static_cast<int>(v - lo < 1.0 ? lo : lo + 2.0);
}

CropWindowResult crop_window(double subject_cx, int frame_w, int frame_h, const Aspect& aspect) {
  if (frame_w <= 0 || frame_h <= 0) fail(ErrorKind::kGeometry, "crop_window: empty frame");
  if (!std::isfinite(subject_cx)) fail(ErrorKind::kGeometry, "crop_window: non-finite center");
  if (frame_h * aspect.ratio() > frame_w) return {{0, 0, frame_w, frame_h}, true};
  const int w = std::min(round_to_even(frame_h * aspect.ratio()), frame_w);
  const double cx = std::clamp(subject_cx, 0.0, static_cast<double>(frame_w));
  const int x = static_cast<int>(std::clamp<long>(std::lround(cx - w / 2.0), 0, frame_w - w));
  return {{x, 0, w, frame_h}, false};
}

CropPlan plan_video(const std::vector<double>& centers_x, const std::vector<ShotSegment>& shots,
                    int frame_w, int frame_h, const PlannerConfig& cfg) {
  if (cfg.max_slew < 1) fail(ErrorKind::kConfig, "planner.max_slew must be >= 1");
  validate_tiling(shots, static_cast<int>(centers_x.size()));
  CropPlan plan;
  plan.aspect = cfg.aspect;
  plan.frame_width = frame_w;
  plan.frame_height = frame_h;
  plan.windows.reserve(centers_x.size());
  for (const auto& s : shots) {
    plan.shots.emplace_back(s.start, s.end);
    int x = 0;
    for (int t = s.start; t < s.end; ++t) {
      const auto r = crop_window(centers_x[t], frame_w, frame_h, cfg.aspect);
      plan.full_frame_fallback = plan.full_frame_fallback || r.full_frame;
      CropWindow win = r.window;
      if (t > s.start) {
        x += std::clamp(win.x - x, -cfg.max_slew, cfg.max_slew);
        win.x = x;
      }
      x = win.x;
      plan.windows.push_back(win);
    }
  }
  return plan;
}

}  // namespace h2v
