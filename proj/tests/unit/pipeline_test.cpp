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

#include <doctest.h>

#include <string>

#include "h2v/error.hpp"
#include "h2v/pipeline.hpp"
#include "h2v/synth.hpp"

using namespace h2v;
using nlohmann::json;

namespace {

std::string error_message(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

ConvertResult run(const SyntheticVideo& v, const PipelineConfig& cfg) {
  NssScorer scorer;
  return convert(v.frames, candidates_from_file(v.candidates), scorer, cfg);
}

}  // namespace

TEST_CASE("config defaults validate and round trip") {
  const PipelineConfig cfg;
  CHECK_NOTHROW(validate(cfg));
  const PipelineConfig back = pipeline_config_from_json(to_json(cfg));
  CHECK(to_json(back) == to_json(cfg));
  CHECK(config_hash(back) == config_hash(cfg));
  CHECK(config_hash(cfg).size() == 16);
}

TEST_CASE("config overrides and hash sensitivity") {
  const json j = {{"aspect", "4:5"}, {"sbd", {{"threshold", 4.0}}}, {"planner", {{"max_slew", 12}}}};
  const PipelineConfig cfg = pipeline_config_from_json(j);
  CHECK(cfg.aspect == Aspect{4, 5});
  CHECK(cfg.sbd.threshold == 4.0);
  CHECK(cfg.sbd.bins == SbdConfig{}.bins);
  CHECK(cfg.max_slew == 12);
  CHECK(config_hash(cfg) != config_hash(PipelineConfig{}));
}

TEST_CASE("config errors name the key") {
  const auto msg = error_message([] { pipeline_config_from_json({{"sbd", {{"treshold", 4.0}}}}); });
  CHECK(msg.find("sbd.treshold") != std::string::npos);
  CHECK(error_message([] { pipeline_config_from_json({{"colour", 1}}); }).find("colour") != std::string::npos);
  CHECK_THROWS_AS(pipeline_config_from_json({{"seed", "one"}}), Error);
  CHECK_THROWS_AS(pipeline_config_from_json({{"selection", {{"mode", "best"}}}}), Error);
  try {
    pipeline_config_from_json({{"max_slew", 0}});
    FAIL("expected a config error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kConfig);
    CHECK(e.exit_code() == 2);
  }
}

TEST_CASE("scorer factory") {
  SelectionConfig s;
  CHECK(make_scorer(s) != nullptr);
  s.mode = "rankss";
  CHECK_THROWS_AS(make_scorer(s), Error);
  s.model = "/nonexistent/model.bin";
  CHECK_THROWS_AS(make_scorer(s), Error);
}

TEST_CASE("bright-region detector finds separate blobs") {
  Frame f(64, 32, 3, 0.1f);
  for (int y = 4; y < 12; ++y) {
    for (int x = 4; x < 12; ++x) {
      for (int c = 0; c < 3; ++c) f.at(x, y, c) = 0.95f;
    }
  }
  for (int y = 10; y < 20; ++y) {
    for (int x = 40; x < 50; ++x) {
      for (int c = 0; c < 3; ++c) f.at(x, y, c) = 0.9f;
    }
  }
  f.at(30, 30, 0) = f.at(30, 30, 1) = f.at(30, 30, 2) = 1.0f;  // below min_area
  const auto rec = detect_bright_regions(f, "0");
  REQUIRE(rec.entries.size() == 2);
  CHECK(rec.entries[0].face->x == 4);
  CHECK(rec.entries[0].face->w == 8);
  CHECK(rec.entries[1].face->x == 40);
  CHECK(rec.entries[1].face->h == 10);
}

TEST_CASE("two-shot convert: selection at each shot start, deterministic") {
  const auto v = render_video(two_shot_fixture(1));
  PipelineConfig cfg;
  const auto a = run(v, cfg);
  const auto b = run(v, cfg);
  CHECK(to_json(a.plan).dump() == to_json(b.plan).dump());
  REQUIRE(a.shots.size() == 2);
  CHECK(a.shots[1].start == 40);
  REQUIRE(a.plan.selections.size() >= 2);
  CHECK(a.plan.selections[0] == SelectionRecord{0, SelectionReason::kShotStart});
  bool at_boundary = false;
  for (const auto& s : a.plan.selections) at_boundary = at_boundary || s == SelectionRecord{40, SelectionReason::kShotStart};
  CHECK(at_boundary);
  CHECK(a.plan.config_hash == config_hash(cfg));
  CHECK_NOTHROW(validate_plan(a.plan, v.frames.size()));
  // The window follows the subject: left half in shot 0, right half in shot 1.
  const double mid = v.frames.width() / 2.0;
  CHECK(a.plan.windows[10].x + a.plan.windows[10].w / 2.0 < mid);
  CHECK(a.plan.windows[70].x + a.plan.windows[70].w / 2.0 > mid);
  CHECK(a.trajectory.size() == v.frames.size());
  CHECK(a.trajectory[40].event == SelectionReason::kShotStart);
}

TEST_CASE("frames without candidates fall back to a center crop") {
  const auto v = render_video(two_shot_fixture(1));
  NssScorer scorer;
  const CandidateSource none = [](int) { return std::optional<CandidateRecord>(); };
  const auto res = convert(v.frames, none, scorer, PipelineConfig{});
  CHECK(res.plan.fallback_shots == std::vector<int>{0, 1});
  CHECK_FALSE(res.warnings.empty());
  const int w = res.plan.windows[0].w;
  CHECK(res.plan.windows[0].x == (v.frames.width() - w) / 2);
  CHECK(res.trajectory[5].fallback);
}

TEST_CASE("ablations") {
  const auto v = render_video(two_shot_fixture(1));
  PipelineConfig no_sbd;
  no_sbd.ablation.sbd = false;
  const auto one = run(v, no_sbd);
  CHECK(one.shots.size() == 1);

  PipelineConfig no_track;
  no_track.ablation.tracking = false;
  const auto per_frame = run(v, no_track);
  CHECK(per_frame.plan.selections.size() == 2);
  CHECK_NOTHROW(validate_plan(per_frame.plan, v.frames.size()));
}

TEST_CASE("a subject jump inside a shot triggers re-selection") {
  // Same background in both halves, so no cut; only the actor moves.
  auto spec = two_shot_fixture(1);
  spec.shots[1].scene.style = spec.shots[0].scene.style;
  const auto v = render_video(spec);
  PipelineConfig cfg;
  const auto res = run(v, cfg);
  REQUIRE(res.shots.size() == 1);
  bool event = false;
  for (const auto& s : res.plan.selections) {
    if (s.reason != SelectionReason::kShotStart && s.frame >= 40 && s.frame <= 43) event = true;
  }
  CHECK(event);
  CHECK_FALSE(res.events.empty());
}
