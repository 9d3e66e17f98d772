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

#include "h2v/crop_plan.hpp"

#include <map>

#include "h2v/annotations.hpp"
#include "h2v/error.hpp"

namespace h2v {

using nlohmann::json;

Aspect parse_aspect(const std::string& s) {
  const auto colon = s.find(':');
  Aspect a;
  try {
    if (colon == std::string::npos) throw std::invalid_argument(s);
    std::size_t used = 0;
    a.num = std::stoi(s.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument(s);
    const std::string rest = s.substr(colon + 1);
    a.den = std::stoi(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(s);
  } catch (const std::exception&) {
    fail(ErrorKind::kConfig, "aspect must look like W:H, got '" + s + "'");
  }
  if (a.num <= 0 || a.den <= 0) fail(ErrorKind::kConfig, "aspect terms must be positive");
  return a;
}

const char* reason_name(SelectionReason r) {
  switch (r) {
    case SelectionReason::kShotStart: return "shot_start";
    case SelectionReason::kLowConfidence: return "low_confidence";
    case SelectionReason::kCoverageViolation: return "coverage_violation";
    case SelectionReason::kTrackLost: return "track_lost";
  }
  return "unknown";
}

SelectionReason parse_reason(const std::string& s) {
  static const std::map<std::string, SelectionReason> kByName = {
      {"shot_start", SelectionReason::kShotStart},
      {"low_confidence", SelectionReason::kLowConfidence},
      {"coverage_violation", SelectionReason::kCoverageViolation},
      {"track_lost", SelectionReason::kTrackLost},
  };
  const auto it = kByName.find(s);
  if (it == kByName.end()) fail(ErrorKind::kSchema, "unknown selection reason '" + s + "'");
  return it->second;
}

void validate_plan(const CropPlan& plan, std::size_t frame_count) {
  if (plan.windows.size() < frame_count) {
    fail(ErrorKind::kCoverage, "plan has no window for frame " + std::to_string(plan.windows.size()));
  }
  if (plan.windows.size() > frame_count) {
    fail(ErrorKind::kCoverage, "plan has windows beyond the last frame");
  }
  for (std::size_t t = 0; t < plan.windows.size(); ++t) {
    const CropWindow& w = plan.windows[t];
    if (!w.inside(plan.frame_width, plan.frame_height)) {
      fail(ErrorKind::kGeometry, "window at frame " + std::to_string(t) + " leaves the frame");
    }
    if (w.w != plan.windows.front().w || w.h != plan.windows.front().h) {
      fail(ErrorKind::kGeometry, "window dims change at frame " + std::to_string(t));
    }
  }
}

json to_json(const CropPlan& plan) {
  json frames = json::array();
  for (std::size_t t = 0; t < plan.windows.size(); ++t) {
    const auto& w = plan.windows[t];
    frames.push_back({{"t", t}, {"window", {w.x, w.y, w.w, w.h}}});
  }
  json shots = json::array();
  for (const auto& [s, e] : plan.shots) shots.push_back({s, e});
  json selections = json::array();
  for (const auto& s : plan.selections) {
    selections.push_back({{"t", s.frame}, {"reason", reason_name(s.reason)}});
  }
  return {{"aspect", plan.aspect.str()},
          {"frame", {plan.frame_width, plan.frame_height}},
          {"frames", frames},
          {"shots", shots},
          {"selections", selections},
          {"fallback_shots", plan.fallback_shots},
          {"full_frame_fallback", plan.full_frame_fallback},
          {"config_hash", plan.config_hash}};
}

CropPlan crop_plan_from_json(const json& doc) {
  CropPlan plan;
  try {
    plan.aspect = parse_aspect(doc.at("aspect").get<std::string>());
    if (doc.contains("frame")) {
      plan.frame_width = doc.at("frame").at(0).get<int>();
      plan.frame_height = doc.at("frame").at(1).get<int>();
    }
    const json& frames = doc.at("frames");
    plan.windows.assign(frames.size(), CropWindow{});
    std::vector<bool> seen(frames.size(), false);
    for (const auto& f : frames) {
      const int t = f.at("t").get<int>();
      if (t < 0 || t >= static_cast<int>(frames.size()) || seen[t]) {
        fail(ErrorKind::kCoverage, "plan frame indices must cover 0..T-1 exactly once");
      }
      seen[t] = true;
      const json& w = f.at("window");
      plan.windows[t] = {w.at(0).get<int>(), w.at(1).get<int>(), w.at(2).get<int>(), w.at(3).get<int>()};
    }
    for (const auto& s : doc.value("shots", json::array())) {
      plan.shots.emplace_back(s.at(0).get<int>(), s.at(1).get<int>());
    }
    for (const auto& s : doc.value("selections", json::array())) {
      plan.selections.push_back({s.at("t").get<int>(), parse_reason(s.at("reason").get<std::string>())});
    }
    plan.fallback_shots = doc.value("fallback_shots", std::vector<int>{});
    plan.full_frame_fallback = doc.value("full_frame_fallback", false);
    plan.config_hash = doc.value("config_hash", std::string());
  } catch (const json::exception& e) {
    fail(ErrorKind::kSchema, std::string("malformed crop plan: ") + e.what());
  }
  return plan;
}

void write_crop_plan(const CropPlan& plan, const std::filesystem::path& path) {
  validate_plan(plan, plan.windows.size());
  write_json_file(to_json(plan), path);
}

CropPlan read_crop_plan(const std::filesystem::path& path) {
  return crop_plan_from_json(read_json_file(path));
}

FrameSequence render_vertical(const FrameSequence& frames, const CropPlan& plan) {
  CropPlan checked = plan;
  if (checked.frame_width == 0) {
    checked.frame_width = frames.width();
    checked.frame_height = frames.height();
  }
  if (checked.frame_width != frames.width() || checked.frame_height != frames.height()) {
    fail(ErrorKind::kGeometry, "plan frame dims differ from the input frames");
  }
  validate_plan(checked, frames.size());
  FrameSequence out;
  out.fps_num = frames.fps_num;
  out.fps_den = frames.fps_den;
  out.frames.reserve(frames.size());
  for (std::size_t t = 0; t < frames.size(); ++t) {
    const auto& w = plan.windows[t];
    out.frames.push_back(crop(frames.frames[t], w.x, w.y, w.w, w.h));
  }
  return out;
}

}  // namespace h2v
