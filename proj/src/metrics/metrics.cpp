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

#include "h2v/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "h2v/crop_planner.hpp"
#include "h2v/error.hpp"

namespace h2v {

namespace {

void need_gts(const std::vector<BBox>& gts, const char* op) {
  if (gts.empty()) fail(ErrorKind::kMetric, std::string(op) + ": empty ground-truth set");
}

}  // namespace

double max_iou(const BBox& pred, const std::vector<BBox>& gts) {
  need_gts(gts, "max_iou");
  double best = 0.0;
  for (const auto& g : gts) best = std::max(best, iou(pred, g));
  return best;
}

double min_cdr(const BBox& pred, const std::vector<BBox>& gts, double frame_width) {
  need_gts(gts, "min_cdr");
  if (!(frame_width > 0)) fail(ErrorKind::kMetric, "min_cdr: frame width must be positive");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& g : gts) best = std::min(best, distance(pred.center(), g.center()) / frame_width);
  return best;
}

double min_bde(const BBox& pred, const std::vector<BBox>& gts, double frame_w, double frame_h) {
  need_gts(gts, "min_bde");
  if (!(frame_w > 0) || !(frame_h > 0)) fail(ErrorKind::kMetric, "min_bde: frame dims must be positive");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& g : gts) {
    const double d = (std::abs(pred.left() - g.left()) / frame_w + std::abs(pred.right() - g.right()) / frame_w +
                      std::abs(pred.top() - g.top()) / frame_h + std::abs(pred.bottom() - g.bottom()) / frame_h) /
                     4.0;
    best = std::min(best, d);
  }
  return best;
}

double map_at(const std::vector<double>& max_ious, double threshold) {
  if (max_ious.empty()) fail(ErrorKind::kMetric, "map_at: no results");
  const auto hits = std::count_if(max_ious.begin(), max_ious.end(), [&](double v) { return v >= threshold; });
  return static_cast<double>(hits) / static_cast<double>(max_ious.size());
}

double jdr(const std::vector<Point>& centers, double frame_width) {
  if (centers.empty()) fail(ErrorKind::kMetric, "jdr: no frames");
  if (!(frame_width > 0)) fail(ErrorKind::kMetric, "jdr: frame width must be positive");
  double s = 0.0;
  for (std::size_t t = 1; t < centers.size(); ++t) s += distance(centers[t], centers[t - 1]);
  return s / frame_width;
}

double recall(const std::vector<BBox>& crops, const std::vector<std::vector<BBox>>& gts, RecallNorm norm) {
  if (crops.size() != gts.size()) {
    fail(ErrorKind::kMetric, "recall: " + std::to_string(crops.size()) + " crops vs " +
                                 std::to_string(gts.size()) + " ground-truth frames");
  }
  if (crops.empty()) fail(ErrorKind::kMetric, "recall: no frames");
  double s = 0.0;
  for (std::size_t t = 0; t < crops.size(); ++t) {
    need_gts(gts[t], "recall");
    double best = 0.0;
    for (const auto& g : gts[t]) {
      const double denom = norm == RecallNorm::kCropArea ? crops[t].area() : g.area();
      best = std::max(best, intersection_area(crops[t], g) / denom);
    }
    s += best;
  }
  return s / static_cast<double>(crops.size());
}

double avg_min_cdr(const std::vector<Point>& crop_centers, const std::vector<std::vector<BBox>>& gts,
                   double frame_width) {
  if (crop_centers.size() != gts.size() || crop_centers.empty()) {
    fail(ErrorKind::kMetric, "avg_min_cdr: length mismatch or no frames");
  }
  double s = 0.0;
  for (std::size_t t = 0; t < gts.size(); ++t) {
    need_gts(gts[t], "avg_min_cdr");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& g : gts[t]) best = std::min(best, distance(crop_centers[t], g.center()) / frame_width);
    s += best;
  }
  return s / static_cast<double>(gts.size());
}

ImageReport evaluate_images(const std::string& method, const std::vector<ImagePrediction>& preds,
                            const AnnotationSet& truth, const EvalOptions& opt) {
  if (preds.empty()) fail(ErrorKind::kReport, "no predictions to evaluate");
  std::string missing;
  for (const auto& p : preds) {
    if (!truth.find(p.id)) missing += (missing.empty() ? "" : ", ") + p.id;
  }
  if (!missing.empty()) fail(ErrorKind::kReport, "predictions without annotation: " + missing);
  ImageReport rep;
  rep.method = method;
  std::vector<double> ious;
  for (const auto& p : preds) {
    const auto* rec = truth.find(p.id);
    const auto gts = rec->subject_boxes(opt.use_body);
    ImageEvalResult r;
    r.max_iou = max_iou(p.box, gts);
    r.min_cdr = min_cdr(p.box, gts, rec->width);
    r.min_bde = min_bde(p.box, gts, rec->width, rec->height);
    r.hit = r.max_iou >= opt.iou_threshold;
    ious.push_back(r.max_iou);
    rep.mean_max_iou += r.max_iou;
    rep.mean_min_cdr += r.min_cdr;
    rep.mean_min_bde += r.min_bde;
    rep.items.emplace_back(p.id, r);
  }
  const double n = static_cast<double>(preds.size());
  rep.mean_max_iou /= n;
  rep.mean_min_cdr /= n;
  rep.mean_min_bde /= n;
  rep.map = map_at(ious, opt.iou_threshold);
  return rep;
}

std::vector<std::vector<BBox>> ground_truth_crops(const AnnotationSet& truth, int frames,
                                                  int frame_w, int frame_h, const Aspect& aspect,
                                                  bool use_body) {
  std::vector<std::vector<BBox>> out(frames);
  std::string missing;
  for (int t = 0; t < frames; ++t) {
    const auto* rec = truth.find(frame_id(t));
    if (!rec) {
      missing += (missing.empty() ? "" : ", ") + frame_id(t);
      continue;
    }
    for (const auto& b : rec->subject_boxes(use_body)) {
      out[t].push_back(crop_window(b.center().x, frame_w, frame_h, aspect).window.box());
    }
  }
  if (!missing.empty()) fail(ErrorKind::kReport, "frames without annotation: " + missing);
  return out;
}

VideoEvalResult evaluate_video(const CropPlan& plan, const AnnotationSet& truth, const EvalOptions& opt) {
  const int frames = static_cast<int>(plan.windows.size());
  if (frames == 0) fail(ErrorKind::kReport, "crop plan has no frames");
  const auto gts = ground_truth_crops(truth, frames, plan.frame_width, plan.frame_height, plan.aspect,
                                      opt.use_body);
  std::vector<Point> centers;
  std::vector<BBox> crops;
  for (const auto& w : plan.windows) {
    centers.push_back(w.center());
    crops.push_back(w.box());
  }
  VideoEvalResult r;
  r.frames = frames;
  r.avg_min_cdr = avg_min_cdr(centers, gts, plan.frame_width);
  r.jdr = jdr(centers, plan.frame_width);
  r.recall = recall(crops, gts, opt.recall_norm);
  return r;
}

nlohmann::json to_json(const ImageReport& r) {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& [id, m] : r.items) {
    items.push_back({{"id", id}, {"max_iou", m.max_iou}, {"min_cdr", m.min_cdr},
                     {"min_bde", m.min_bde}, {"hit", m.hit}});
  }
  return {{"method", r.method},
          {"mode", "image"},
          {"count", r.items.size()},
          {"max_iou", r.mean_max_iou},
          {"min_cdr", r.mean_min_cdr},
          {"min_bde", r.mean_min_bde},
          {"map", r.map},
          {"items", items}};
}

nlohmann::json to_json(const VideoEvalResult& r, const std::string& method, double fps) {
  return {{"method", method}, {"mode", "video"},  {"frames", r.frames}, {"avg_min_cdr", r.avg_min_cdr},
          {"jdr", r.jdr},     {"recall", r.recall}, {"fps", fps}};
}

namespace {

std::string fmt4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

std::string image_table_csv(const std::vector<ImageReport>& rows) {
  std::string out = "method,max_iou,min_cdr,min_bde,map\n";
  for (const auto& r : rows) {
    out += r.method + "," + fmt4(r.mean_max_iou) + "," + fmt4(r.mean_min_cdr) + "," + fmt4(r.mean_min_bde) +
           "," + fmt4(r.map) + "\n";
  }
  return out;
}

std::string video_table_csv(const std::vector<VideoRow>& rows) {
  std::string out = "method,avg_min_cdr,jdr,recall,fps\n";
  for (const auto& r : rows) {
    out += r.method + "," + fmt4(r.result.avg_min_cdr) + "," + fmt4(r.result.jdr) + "," +
           fmt4(r.result.recall) + "," + fmt4(r.fps) + "\n";
  }
  return out;
}

std::vector<ImagePrediction> predictions_from_json(const nlohmann::json& doc) {
  std::vector<ImagePrediction> out;
  try {
    for (const auto& p : doc.at("predictions")) {
      const auto a = p.at("box").get<std::array<double, 4>>();
      const BBox b = BBox::from_array(a);
      if (!b.valid()) fail(ErrorKind::kSchema, "prediction box must have positive size");
      out.push_back({p.at("id").get<std::string>(), b});
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kSchema, std::string("predictions JSON: ") + e.what());
  }
  return out;
}

nlohmann::json predictions_to_json(const std::vector<ImagePrediction>& preds) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : preds) arr.push_back({{"id", p.id}, {"box", p.box.as_array()}});
  return {{"predictions", arr}};
}

}  // namespace h2v
