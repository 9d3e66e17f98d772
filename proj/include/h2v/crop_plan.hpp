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

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "h2v/frame.hpp"
#include "h2v/geometry.hpp"

namespace h2v {

struct Aspect {
  int num = 9;
  int den = 16;

  double ratio() const { return static_cast<double>(num) / den; }
  std::string str() const { return std::to_string(num) + ":" + std::to_string(den); }
  bool operator==(const Aspect&) const = default;
};

// Parses "W:H" with positive integers; throws kConfig otherwise.
Aspect parse_aspect(const std::string& s);

struct CropWindow {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  BBox box() const { return {double(x), double(y), double(w), double(h)}; }
  Point center() const { return box().center(); }
  bool inside(int frame_w, int frame_h) const {
    return w > 0 && h > 0 && x >= 0 && y >= 0 && x + w <= frame_w && y + h <= frame_h;
  }
  bool operator==(const CropWindow&) const = default;
};

enum class SelectionReason { kShotStart, kLowConfidence, kCoverageViolation, kTrackLost };

const char* reason_name(SelectionReason r);
SelectionReason parse_reason(const std::string& s);

// One call into subject selection, with the trigger that caused it.
struct SelectionRecord {
  int frame = 0;
  SelectionReason reason = SelectionReason::kShotStart;
  bool operator==(const SelectionRecord&) const = default;
};

struct CropPlan {
  Aspect aspect;
  int frame_width = 0;
  int frame_height = 0;
  std::vector<CropWindow> windows;  // index = frame t

  // Provenance.
  std::vector<std::pair<int, int>> shots;
  std::vector<SelectionRecord> selections;
  std::vector<int> fallback_shots;  // shot indices planned as center crop
  bool full_frame_fallback = false;  // aspect wider than the frame
  std::string config_hash;

  bool operator==(const CropPlan&) const = default;
};

// Throws kCoverage when a frame index is missing, kGeometry for windows
// outside the frame or with inconsistent dims.
void validate_plan(const CropPlan& plan, std::size_t frame_count);

nlohmann::json to_json(const CropPlan& plan);
CropPlan crop_plan_from_json(const nlohmann::json& doc);
void write_crop_plan(const CropPlan& plan, const std::filesystem::path& path);
CropPlan read_crop_plan(const std::filesystem::path& path);

// Output pixel (u,v) of frame t equals input pixel (window.x+u, window.y+v).
FrameSequence render_vertical(const FrameSequence& frames, const CropPlan& plan);

}  // namespace h2v
