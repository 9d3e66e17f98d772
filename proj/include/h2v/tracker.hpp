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

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "h2v/crop_plan.hpp"
#include "h2v/frame.hpp"
#include "h2v/geometry.hpp"

namespace h2v {

struct TrackerConfig {
  double tau_conf = 0.5;        // below: low_confidence
  double lost_conf = 0.2;       // below: track_lost
  double coverage_slack = 0.05;  // fraction of window width
  double sigma_p = 1.0;         // px/frame^2
  double sigma_m = 2.0;         // px
  double template_alpha = 0.1;
  double search_scale = 0.5;    // search radius as a fraction of box size
};

// Constant-velocity filter on (cx, cy, w, h, vx, vy) observing (cx, cy, w, h).
class BoxKalman {
 public:
  using State = Eigen::Matrix<double, 6, 1>;
  using Cov = Eigen::Matrix<double, 6, 6>;

  BoxKalman() = default;
  BoxKalman(const BBox& box, double sigma_p, double sigma_m);

  void predict();
  void update(const BBox& measured);
  BBox box() const;
  const State& state() const { return x_; }
  const Cov& covariance() const { return p_; }

 private:
  State x_ = State::Zero();
  Cov p_ = Cov::Identity();
  Cov f_ = Cov::Identity();
  Cov q_ = Cov::Zero();
  Eigen::Matrix4d r_ = Eigen::Matrix4d::Identity();
};

struct Track {
  BBox box;
  Frame patch_template;  // gray, box-sized
  double confidence = 1.0;
  bool lost = false;
  BoxKalman kalman;
};

// Normalized cross-correlation template tracker over gray frames.
class Tracker {
 public:
  explicit Tracker(TrackerConfig cfg = {}) : cfg_(cfg) {}

  // Starts one track per box (clamped into the frame) on a gray keyframe.
  void init(const Frame& gray, const std::vector<BBox>& boxes);
  // Advances every live track by one frame.
  void step(const Frame& gray);

  const std::vector<Track>& tracks() const { return tracks_; }
  const TrackerConfig& config() const { return cfg_; }

 private:
  void step_track(Track& tr, const Frame& gray) const;

  TrackerConfig cfg_;
  std::vector<Track> tracks_;
};

enum class VerificationCause { kLowConfidence, kCoverageViolation, kTrackLost };

struct VerificationEvent {
  int frame = 0;
  VerificationCause cause = VerificationCause::kLowConfidence;
};

SelectionReason to_reason(VerificationCause c);

// Horizontal overhang of the union of boxes beyond the window, in pixels.
double coverage_excess(const std::vector<BBox>& boxes, const CropWindow& window);

// First matching cause in order: primary lost, primary confidence below
// tau_conf, union of subject boxes overhanging the window by more than
// coverage_slack * window width.
std::optional<VerificationCause> needs_reselection(const Track& primary,
                                                   const std::vector<BBox>& subject_boxes,
                                                   const CropWindow& window,
                                                   const TrackerConfig& cfg = {});

// Forward constant-velocity Kalman pass over 2-D centers.
std::vector<Point> kalman_smooth(const std::vector<Point>& centers, double sigma_p = 1.0,
                                 double sigma_m = 2.0);

}  // namespace h2v
