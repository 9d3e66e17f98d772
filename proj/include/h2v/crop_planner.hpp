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

#include <vector>

#include "h2v/crop_plan.hpp"
#include "h2v/shots.hpp"

namespace h2v {

// Nearest even integer; exact halves between evens cannot occur, odd
// integers round up (607.5 -> 608, 607 -> 608).
int round_to_even(double v);

struct CropWindowResult {
  CropWindow window;
  bool full_frame = false;  // requested aspect is wider than the frame
};

// Full-height window of width round_to_even(H * aspect), horizontally
// centered on subject_cx and clamped into the frame.
CropWindowResult crop_window(double subject_cx, int frame_w, int frame_h, const Aspect& aspect);

struct PlannerConfig {
  Aspect aspect;
  int max_slew = 20;  // px/frame within a shot
};

// One window per frame from smoothed subject centers. Within a shot the
// window x moves at most max_slew px per frame; each shot starts exactly on
// its target. Throws kCoverage when centers and shots disagree on length.
CropPlan plan_video(const std::vector<double>& centers_x, const std::vector<ShotSegment>& shots,
                    int frame_w, int frame_h, const PlannerConfig& cfg = {});

}  // namespace h2v
