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

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "h2v/annotations.hpp"
#include "h2v/crop_plan.hpp"
#include "h2v/crop_planner.hpp"
#include "h2v/select.hpp"
#include "h2v/shots.hpp"
#include "h2v/tracker.hpp"

namespace h2v {

// ---------------------------------------------------------------- config

struct SmoothingConfig {
  bool enabled = true;
  double sigma_p = 1.0;
  double sigma_m = 2.0;
};

struct SelectionConfig {
  std::string mode = "nss";  // nss | dss | rankss
  std::string model;         // checkpoint path for dss / rankss
  // Candidates scoring within this of the primary are co-subjects the crop
  // should keep in view.
  double co_subject_margin = 0.1;
};

struct AblationConfig {
  bool sbd = true;       // false: the whole video is one shot
  bool tracking = true;  // false: per-frame selection, no smoothing
};

struct TrainSection {
  int images = 1000;            // synthetic training images
  unsigned long long data_seed = 11;
  int epochs = 80;
  int batch = 4;
  int rois_per_image = 20;
  LabelMode labels = LabelMode::kHard;
  int head_mid = 4;
  int head_width = 16;
  int head_fc1 = 256;
  int head_fc2 = 64;
  int encoder_channels = 8;
};

struct PipelineConfig {
  Aspect aspect;
  int short_side = 128;
  unsigned long long seed = 1;
  SbdConfig sbd;
  LossConfig loss;
  TrackerConfig tracker;
  SmoothingConfig smoothing;
  int max_slew = 20;
  SelectionConfig selection;
  AblationConfig ablation;
  TrainSection train;
};

void validate(const PipelineConfig& cfg);
nlohmann::json to_json(const PipelineConfig& cfg);
// Missing keys keep their defaults; unknown keys raise kConfig with the key path.
PipelineConfig pipeline_config_from_json(const nlohmann::json& j);
PipelineConfig load_pipeline_config(const std::filesystem::path& path);
// 16 hex digits of FNV-1a over the canonical JSON dump.
std::string config_hash(const PipelineConfig& cfg);

// ---------------------------------------------------------------- scoring

class SubjectScorer {
 public:
  virtual ~SubjectScorer() = default;
  virtual std::vector<double> score(const Frame& frame, const std::vector<Candidate>& cands) = 0;
};

class NssScorer : public SubjectScorer {
 public:
  std::vector<double> score(const Frame& frame, const std::vector<Candidate>& cands) override;
};

class DssScorer : public SubjectScorer {
 public:
  explicit DssScorer(DssModel model) : model_(std::move(model)) {}
  std::vector<double> score(const Frame& frame, const std::vector<Candidate>& cands) override;

 private:
  DssModel model_;
};

class RankSsScorer : public SubjectScorer {
 public:
  explicit RankSsScorer(RankSsModel model) : model_(std::move(model)) {}
  std::vector<double> score(const Frame& frame, const std::vector<Candidate>& cands) override;

 private:
  RankSsModel model_;
};

// Builds the scorer named by cfg.selection (loading checkpoints as needed).
std::unique_ptr<SubjectScorer> make_scorer(const SelectionConfig& cfg);

// ---------------------------------------------------------------- detector

struct BrightDetectorConfig {
  double luma_threshold = 0.75;
  int min_area = 24;  // pixels
};

// Connected (4-neighbour) regions of luma above the threshold, as face boxes.
CandidateRecord detect_bright_regions(const Frame& frame, const std::string& id,
                                      const BrightDetectorConfig& cfg = {});

// ---------------------------------------------------------------- convert

// Candidates of frame t, or nullopt when none are known.
using CandidateSource = std::function<std::optional<CandidateRecord>(int t)>;
CandidateSource candidates_from_file(const CandidateFile& file);
CandidateSource candidates_from_detector(const FrameSequence& frames, BrightDetectorConfig cfg = {});

struct TrajectoryPoint {
  int t = 0;
  BBox box;
  double conf = 0.0;
  std::optional<SelectionReason> event;  // set on frames where selection ran
  bool fallback = false;                 // no subject; center crop
};

struct ConvertResult {
  CropPlan plan;
  std::vector<ShotSegment> shots;
  std::vector<TrajectoryPoint> trajectory;
  std::vector<VerificationEvent> events;
  std::vector<std::string> warnings;
};

ConvertResult convert(const FrameSequence& frames, const CandidateSource& candidates,
                      SubjectScorer& scorer, const PipelineConfig& cfg);

nlohmann::json trajectory_to_json(const std::vector<TrajectoryPoint>& traj);

}  // namespace h2v
