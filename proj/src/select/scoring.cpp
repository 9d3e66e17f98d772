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
#include <cmath>

#include "h2v/error.hpp"
#include "h2v/select.hpp"

namespace h2v {

LocPrior location_prior(const BBox& box, int frame_w, int frame_h) {
  const double w = frame_w;
  const double h = frame_h;
  return {std::clamp(box.x / w, 0.0, 1.0), std::clamp(box.y / h, 0.0, 1.0),
          std::clamp(box.w / w, 0.0, 1.0), std::clamp(box.h / h, 0.0, 1.0)};
}

std::vector<Candidate> make_candidates(const CandidateRecord& rec) {
  std::vector<Candidate> out;
  out.reserve(rec.entries.size());
  for (const auto& e : rec.entries) {
    Candidate c;
    c.box = e.primary_box();
    c.body = e.body;
    c.loc = location_prior(c.box, rec.width, rec.height);
    out.push_back(c);
  }
  return out;
}

std::vector<Candidate> make_candidates(const AnnotationRecord& rec, std::vector<int>* ranks) {
  std::vector<Candidate> out;
  out.reserve(rec.entries.size());
  if (ranks) ranks->clear();
  for (const auto& e : rec.entries) {
    Candidate c;
    c.box = e.primary_box();
    c.body = e.body;
    c.loc = location_prior(c.box, rec.width, rec.height);
    out.push_back(c);
    if (ranks) ranks->push_back(e.rank);
  }
  return out;
}

std::optional<std::size_t> select_subject(const std::vector<Candidate>& cands,
                                          const std::vector<double>& scores) {
  if (cands.size() != scores.size()) {
    fail(ErrorKind::kDimensionMismatch, "select_subject: " + std::to_string(scores.size()) +
                                            " scores for " + std::to_string(cands.size()) +
                                            " candidates");
  }
  if (cands.empty()) return std::nullopt;
  std::size_t best = 0;
  for (std::size_t i = 1; i < cands.size(); ++i) {
    if (scores[i] > scores[best] ||
        (scores[i] == scores[best] && cands[i].box.area() > cands[best].box.area())) {
      best = i;
    }
  }
  return best;
}

std::optional<std::size_t> select_subject(const ScoredCandidateSet& set) {
  return select_subject(set.candidates, set.scores);
}

double box_mean(const FeatureMap& map, int channel, const BBox& box, int frame_w, int frame_h) {
  const auto clipped = clamp_to_frame(box, frame_w, frame_h);
  if (!clipped) fail(ErrorKind::kGeometry, "candidate box lies outside the frame");
  const BBox& b = *clipped;
  const int cx0 = static_cast<int>(b.left() / kFeatureStride);
  const int cy0 = static_cast<int>(b.top() / kFeatureStride);
  const int cx1 = std::min(map.width - 1, static_cast<int>(std::ceil(b.right() / kFeatureStride)) - 1);
  const int cy1 = std::min(map.height - 1, static_cast<int>(std::ceil(b.bottom() / kFeatureStride)) - 1);
  double sum = 0.0;
  double wsum = 0.0;
  for (int cy = cy0; cy <= cy1; ++cy) {
    const double oy = std::min(b.bottom(), (cy + 1.0) * kFeatureStride) -
                      std::max(b.top(), cy * static_cast<double>(kFeatureStride));
    if (oy <= 0.0) continue;
    for (int cx = cx0; cx <= cx1; ++cx) {
      const double ox = std::min(b.right(), (cx + 1.0) * kFeatureStride) -
                        std::max(b.left(), cx * static_cast<double>(kFeatureStride));
      if (ox <= 0.0) continue;
      sum += ox * oy * map.at(cx, cy, channel);
      wsum += ox * oy;
    }
  }
  return wsum > 0.0 ? sum / wsum : 0.0;
}

NssTerms nss_terms(const FeatureStack& stack, const BBox& box, int frame_w, int frame_h,
                   bool raw_concat) {
  const auto clipped = clamp_to_frame(box, frame_w, frame_h);
  if (!clipped) fail(ErrorKind::kGeometry, "candidate box lies outside the frame");
  NssTerms t;
  t.sal = box_mean(stack.sal, 0, *clipped, frame_w, frame_h);
  t.blur = box_mean(stack.blur, 0, *clipped, frame_w, frame_h);
  const double w = frame_w;
  const double h = frame_h;
  if (raw_concat) {
    t.size = 0.5 * (clipped->w / w + clipped->h / h);
    t.pos = 0.5 * (clipped->x / w + clipped->y / h);
  } else {
    t.size = clipped->area() / (w * h);
    const double d = distance(clipped->center(), {w / 2.0, h / 2.0});
    t.pos = std::clamp(1.0 - 2.0 * d / std::hypot(w, h), 0.0, 1.0);
  }
  return t;
}

double nss_combine(const NssTerms& t, const NssWeights& w) {
  return w.sal * t.sal + w.blur * t.blur + w.size * t.size + w.pos * t.pos;
}

std::vector<double> nss_score(const FeatureStack& stack, const std::vector<Candidate>& cands,
                              int frame_w, int frame_h, const NssWeights& w, bool raw_concat) {
  std::vector<double> s;
  s.reserve(cands.size());
  for (const auto& c : cands) s.push_back(nss_combine(nss_terms(stack, c.box, frame_w, frame_h, raw_concat), w));
  return s;
}

nn::Tensor dss_inputs(const FeatureStack& stack, const std::vector<Candidate>& cands, int frame_w,
                      int frame_h) {
  nn::Tensor x({static_cast<int>(cands.size()), kDssFeatureDim + 4});
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const auto& c = cands[i];
    const int n = static_cast<int>(i);
    x.at(n, 0) = box_mean(stack.sal, 0, c.box, frame_w, frame_h);
    x.at(n, 1) = box_mean(stack.blur, 0, c.box, frame_w, frame_h);
    for (int k = 0; k < 4; ++k) x.at(n, kDssFeatureDim + k) = c.loc[k];
  }
  return x;
}

DssModel::DssModel() : mlp("dss", dims) {}
DssModel::DssModel(std::vector<int> d) : dims(std::move(d)), mlp("dss", dims) {}

std::vector<double> dss_score(const FeatureStack& stack, const std::vector<Candidate>& cands,
                              int frame_w, int frame_h, DssModel& model) {
  if (model.mlp.in_features() != kDssFeatureDim + 4) {
    fail(ErrorKind::kConfig, "D-SS MLP input width " + std::to_string(model.mlp.in_features()) +
                                 " != " + std::to_string(kDssFeatureDim + 4));
  }
  if (cands.empty()) return {};
  const nn::Tensor y = model.mlp.forward(dss_inputs(stack, cands, frame_w, frame_h));
  return y.data;
}

}  // namespace h2v
