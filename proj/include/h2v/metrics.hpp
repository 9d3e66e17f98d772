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

#include <string>
#include <vector>

#include <json.hpp>

#include "h2v/annotations.hpp"
#include "h2v/crop_plan.hpp"
#include "h2v/geometry.hpp"

namespace h2v {

// ---- per-image metrics (best match over the ground-truth set)

double max_iou(const BBox& pred, const std::vector<BBox>& gts);
double min_cdr(const BBox& pred, const std::vector<BBox>& gts, double frame_width);
// Mean absolute displacement of the four edges, left/right over W and
// top/bottom over H.
double min_bde(const BBox& pred, const std::vector<BBox>& gts, double frame_w, double frame_h);
// Fraction of images whose max IoU reaches the threshold.
double map_at(const std::vector<double>& max_ious, double threshold = 0.5);

// ---- per-video metrics

// Sum over consecutive frames of the center displacement, divided by w.
double jdr(const std::vector<Point>& centers, double frame_width);

enum class RecallNorm {
  kCropArea,     // |c ∩ GT| / |c|
  kGroundTruth,  // |c ∩ GT| / |GT|
};

double recall(const std::vector<BBox>& crops, const std::vector<std::vector<BBox>>& gts,
              RecallNorm norm = RecallNorm::kCropArea);

// Mean over frames of the min distance between crop center and the GT
// crop centers, over w.
double avg_min_cdr(const std::vector<Point>& crop_centers, const std::vector<std::vector<BBox>>& gts,
                   double frame_width);

struct ImageEvalResult {
  double max_iou = 0.0;
  double min_cdr = 0.0;
  double min_bde = 0.0;
  bool hit = false;
};

struct VideoEvalResult {
  double avg_min_cdr = 0.0;
  double jdr = 0.0;
  double recall = 0.0;
  int frames = 0;
};

struct ImagePrediction {
  std::string id;
  BBox box;
};

struct ImageReport {
  std::string method;
  std::vector<std::pair<std::string, ImageEvalResult>> items;
  double mean_max_iou = 0.0;
  double mean_min_cdr = 0.0;
  double mean_min_bde = 0.0;
  double map = 0.0;
};

struct EvalOptions {
  bool use_body = false;
  double iou_threshold = 0.5;
  RecallNorm recall_norm = RecallNorm::kCropArea;
};

// Multi-subject records count the best-matching subject. Throws kReport for
// an empty prediction list or ids without annotation (all listed).
ImageReport evaluate_images(const std::string& method, const std::vector<ImagePrediction>& preds,
                            const AnnotationSet& truth, const EvalOptions& opt = {});

// Ground-truth crops for frame t are the plan-aspect windows centered on
// each rank-0 box of the record with id frame_id(t).
std::vector<std::vector<BBox>> ground_truth_crops(const AnnotationSet& truth, int frames,
                                                  int frame_w, int frame_h, const Aspect& aspect,
                                                  bool use_body = false);

VideoEvalResult evaluate_video(const CropPlan& plan, const AnnotationSet& truth,
                               const EvalOptions& opt = {});

nlohmann::json to_json(const ImageReport& r);
nlohmann::json to_json(const VideoEvalResult& r, const std::string& method, double fps);

// CSV tables: image rows (method, max-IoU, min-CDR, min-BDE, mAP) and video
// rows (method, avg-min-CDR, JDR, Recall, FPS), fixed 4-decimal columns.
std::string image_table_csv(const std::vector<ImageReport>& rows);
struct VideoRow {
  std::string method;
  VideoEvalResult result;
  double fps = 0.0;
};
std::string video_table_csv(const std::vector<VideoRow>& rows);

std::vector<ImagePrediction> predictions_from_json(const nlohmann::json& doc);
nlohmann::json predictions_to_json(const std::vector<ImagePrediction>& preds);

}  // namespace h2v
