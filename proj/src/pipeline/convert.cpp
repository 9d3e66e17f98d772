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
#include <map>
#include <numeric>

#include "h2v/error.hpp"
#include "h2v/pipeline.hpp"

namespace h2v {

using nlohmann::json;

namespace {

FeatureStack handcrafted_stack(const Frame& frame) {
  SaliencyProvider sal;
  TenengradProvider blur;
  ZeroProvider none(1);
  return build_feature_stack(frame, sal, blur, none);
}

}  // namespace

std::vector<double> NssScorer::score(const Frame& frame, const std::vector<Candidate>& cands) {
  if (cands.empty()) return {};
  return nss_score(handcrafted_stack(frame), cands, frame.width(), frame.height());
}

std::vector<double> DssScorer::score(const Frame& frame, const std::vector<Candidate>& cands) {
  if (cands.empty()) return {};
  return dss_score(handcrafted_stack(frame), cands, frame.width(), frame.height(), model_);
}

std::vector<double> RankSsScorer::score(const Frame& frame, const std::vector<Candidate>& cands) {
  return rankss_score(frame, cands, model_);
}

std::unique_ptr<SubjectScorer> make_scorer(const SelectionConfig& cfg) {
  if (cfg.mode == "nss") return std::make_unique<NssScorer>();
  if (cfg.model.empty()) fail(ErrorKind::kConfig, "selection mode " + cfg.mode + " needs a model path");
  if (cfg.mode == "dss") return std::make_unique<DssScorer>(load_dss(cfg.model));
  if (cfg.mode == "rankss") return std::make_unique<RankSsScorer>(load_rankss(cfg.model));
  fail(ErrorKind::kConfig, "unknown selection mode '" + cfg.mode + "'");
}

CandidateSource candidates_from_file(const CandidateFile& file) {
  std::map<std::string, const CandidateRecord*> index;
  for (const auto& r : file.records) index[r.image_id] = &r;
  return [index = std::move(index)](int t) -> std::optional<CandidateRecord> {
    const auto it = index.find(frame_id(t));
    if (it == index.end()) return std::nullopt;
    return *it->second;
  };
}

CandidateSource candidates_from_detector(const FrameSequence& frames, BrightDetectorConfig cfg) {
  return [&frames, cfg](int t) -> std::optional<CandidateRecord> {
    if (t < 0 || t >= static_cast<int>(frames.size())) return std::nullopt;
    return detect_bright_regions(frames[static_cast<std::size_t>(t)], frame_id(t), cfg);
  };
}

namespace {

struct ShotState {
  const FrameSequence& frames;
  const CandidateSource& source;
  SubjectScorer& scorer;
  const PipelineConfig& cfg;
  ConvertResult& out;
  std::vector<Point>& centers;
  std::vector<bool>& have;

  std::vector<Candidate> candidates_at(int t) const {
    const auto rec = source(t);
    if (!rec) return {};
    return make_candidates(*rec);
  }

  CropWindow window_at(double cx) const {
    return crop_window(cx, frames.width(), frames.height(), cfg.aspect).window;
  }

  // Selection call at frame t. Returns the primary first, then co-subjects
  // that fit the window around the primary. Empty when t has no candidates.
  std::vector<BBox> select(int t, SelectionReason reason) {
    out.plan.selections.push_back({t, reason});
    const auto cands = candidates_at(t);
    if (cands.empty()) return {};
    const Frame& frame = frames[static_cast<std::size_t>(t)];
    const auto scores = scorer.score(frame, cands);
    const std::size_t p = *select_subject(cands, scores);
    std::vector<BBox> group{cands[p].box};
    std::vector<std::size_t> order(cands.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    const CropWindow win = window_at(cands[p].box.center().x);
    for (std::size_t i : order) {
      if (i == p) continue;
      if (scores[i] < scores[p] - cfg.selection.co_subject_margin) break;
      auto trial = group;
      trial.push_back(cands[i].box);
      if (coverage_excess(trial, win) <= cfg.tracker.coverage_slack * win.w) group = trial;
    }
    return group;
  }

  void mark(int t, const BBox& box, double conf, std::optional<SelectionReason> ev) {
    auto& tp = out.trajectory[static_cast<std::size_t>(t)];
    tp.box = box;
    tp.conf = conf;
    if (ev) tp.event = ev;
    centers[static_cast<std::size_t>(t)] = box.center();
    have[static_cast<std::size_t>(t)] = true;
  }

  void tracked(const ShotSegment& shot) {
    Tracker tracker(cfg.tracker);
    bool active = false;
    SelectionReason reason = SelectionReason::kShotStart;
    bool pending = true;  // a selection call is due at the current frame
    int stepped = -1;     // last frame the tracker advanced to
    for (int t = shot.start; t < shot.end; ++t) {
      const Frame gray = frames[static_cast<std::size_t>(t)].to_gray();
      if (pending) {
        const auto group = select(t, reason);
        out.trajectory[static_cast<std::size_t>(t)].event = reason;
        if (!group.empty()) {
          tracker = Tracker(cfg.tracker);
          tracker.init(gray, group);
          active = true;
          pending = false;
          mark(t, tracker.tracks().front().box, 1.0, reason);
          continue;
        }
        if (!active) continue;  // keep looking for a first subject
        // Nothing to select from: keep the running tracks, no event check
        // on this frame.
        pending = false;
        if (stepped != t) tracker.step(gray);
        stepped = t;
        mark(t, tracker.tracks().front().box, tracker.tracks().front().confidence, std::nullopt);
        continue;
      }
      if (!active) continue;
      tracker.step(gray);
      stepped = t;
      const Track& primary = tracker.tracks().front();
      std::vector<BBox> live;
      for (const auto& tr : tracker.tracks()) {
        if (!tr.lost) live.push_back(tr.box);
      }
      const auto cause = needs_reselection(primary, live, window_at(primary.box.center().x), cfg.tracker);
      if (cause) {
        out.events.push_back({t, *cause});
        reason = to_reason(*cause);
        pending = true;
        --t;  // run the selection on this same frame
        continue;
      }
      mark(t, primary.box, primary.confidence, std::nullopt);
    }
  }

  void per_frame(const ShotSegment& shot) {
    for (int t = shot.start; t < shot.end; ++t) {
      const bool start = t == shot.start;
      if (start) out.plan.selections.push_back({t, SelectionReason::kShotStart});
      const auto cands = candidates_at(t);
      if (cands.empty()) continue;
      const auto scores = scorer.score(frames[static_cast<std::size_t>(t)], cands);
      const std::size_t p = *select_subject(cands, scores);
      mark(t, cands[p].box, 1.0, start ? std::optional(SelectionReason::kShotStart) : std::nullopt);
    }
  }
};

}  // namespace

ConvertResult convert(const FrameSequence& frames, const CandidateSource& candidates,
                      SubjectScorer& scorer, const PipelineConfig& cfg) {
  validate(cfg);
  if (frames.empty()) fail(ErrorKind::kEmptyInput, "convert: video has no frames");
  const int n = static_cast<int>(frames.size());
  const int w = frames.width();
  const int h = frames.height();
  ConvertResult out;
  out.shots = cfg.ablation.sbd ? detect_shots(frames, cfg.sbd) : std::vector<ShotSegment>{{0, n}};
  out.trajectory.resize(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t) out.trajectory[static_cast<std::size_t>(t)].t = t;
  std::vector<Point> centers(static_cast<std::size_t>(n), Point{w / 2.0, h / 2.0});
  std::vector<bool> have(static_cast<std::size_t>(n), false);
  ShotState st{frames, candidates, scorer, cfg, out, centers, have};

  std::vector<int> fallback_shots;
  for (std::size_t si = 0; si < out.shots.size(); ++si) {
    const auto& shot = out.shots[si];
    if (cfg.ablation.tracking) {
      st.tracked(shot);
    } else {
      st.per_frame(shot);
    }
    // Frames without a subject hold the nearest known center; a shot with
    // none at all is a center crop.
    int first = -1;
    for (int t = shot.start; t < shot.end; ++t) {
      if (have[static_cast<std::size_t>(t)]) {
        first = t;
        break;
      }
    }
    if (first < 0) {
      fallback_shots.push_back(static_cast<int>(si));
      out.warnings.push_back("shot " + std::to_string(si) + " [" + std::to_string(shot.start) + "," +
                             std::to_string(shot.end) + "): no candidates, center crop");
      for (int t = shot.start; t < shot.end; ++t) {
        auto& tp = out.trajectory[static_cast<std::size_t>(t)];
        tp.fallback = true;
        tp.box = {w / 2.0, h / 2.0, 0.0, 0.0};
      }
      continue;
    }
    Point last = centers[static_cast<std::size_t>(first)];
    for (int t = shot.start; t < shot.end; ++t) {
      if (have[static_cast<std::size_t>(t)]) {
        last = centers[static_cast<std::size_t>(t)];
      } else {
        centers[static_cast<std::size_t>(t)] = last;
        out.trajectory[static_cast<std::size_t>(t)].box = {last.x, last.y, 0.0, 0.0};
      }
    }
    if (cfg.ablation.tracking && cfg.smoothing.enabled) {
      const std::vector<Point> seg(centers.begin() + shot.start, centers.begin() + shot.end);
      const auto sm = kalman_smooth(seg, cfg.smoothing.sigma_p, cfg.smoothing.sigma_m);
      std::copy(sm.begin(), sm.end(), centers.begin() + shot.start);
    }
  }

  std::vector<double> cx(static_cast<std::size_t>(n));
  std::transform(centers.begin(), centers.end(), cx.begin(), [](const Point& p) { return p.x; });
  const auto selections = std::move(out.plan.selections);
  out.plan = plan_video(cx, out.shots, w, h, {cfg.aspect, cfg.max_slew});
  out.plan.selections = selections;
  out.plan.fallback_shots = fallback_shots;
  out.plan.config_hash = config_hash(cfg);
  return out;
}

json trajectory_to_json(const std::vector<TrajectoryPoint>& traj) {
  json arr = json::array();
  for (const auto& p : traj) {
    json e = {{"t", p.t}, {"box", {p.box.x, p.box.y, p.box.w, p.box.h}}, {"conf", p.conf}};
    if (p.event) e["event"] = reason_name(*p.event);
    if (p.fallback) e["fallback"] = true;
    arr.push_back(e);
  }
  return {{"trajectory", arr}};
}

}  // namespace h2v
