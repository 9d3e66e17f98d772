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

#include <algorithm>
#include <random>

#include "h2v/error.hpp"
#include "h2v/shots.hpp"
#include "h2v/synth.hpp"

using namespace h2v;

namespace {

ActorSpec actor(double cx, double cy, double h, double blur, bool facing) {
  ActorSpec a;
  a.cx = cx;
  a.cy = cy;
  a.height = h;
  a.blur = blur;
  a.facing = facing;
  return a;
}

}  // namespace

TEST_CASE("composite of a centered sharp facing full-height actor") {
  const CriteriaWeights w;
  const auto a = actor(112, 64, 128, 0.0, true);
  CHECK(actor_composite(a, 224, 128, w) == doctest::Approx(1.0));
  const auto back = actor(112, 64, 128, 0.0, false);
  CHECK(actor_composite(back, 224, 128, w) == doctest::Approx(0.8));
  const auto soft = actor(112, 64, 64, 0.5, true);
  CHECK(actor_composite(soft, 224, 128, w) == doctest::Approx(0.3 + 0.15 + 0.1 + 0.2));
}

TEST_CASE("composite ranks order actors") {
  SyntheticSceneSpec s;
  s.actors = {actor(40, 64, 50, 0.8, false), actor(112, 64, 100, 0.0, true), actor(180, 64, 70, 0.2, true)};
  CHECK(composite_ranks(s) == std::vector<int>{2, 0, 1});
  const auto ann = scene_annotation(s, "x");
  REQUIRE(ann.entries.size() == 3);
  CHECK(ann.entries[1].rank == 0);
  CHECK(ann.entries[1].face.has_value());
  CHECK(ann.entries[1].body.has_value());
}

TEST_CASE("actor boxes") {
  const auto a = actor(100, 60, 80, 0.0, true);
  const BBox b = actor_body(a);
  CHECK(b.w == doctest::Approx(36.0));
  CHECK(b.h == doctest::Approx(80.0));
  CHECK(b.x == doctest::Approx(82.0));
  const BBox f = actor_face(a);
  CHECK(f.w == doctest::Approx(0.8 * 36.0));
  CHECK(f.x + f.w / 2 == doctest::Approx(100.0));
  CHECK(f.y >= b.y);
  ActorSpec moving = a;
  moving.vx = 2.0;
  CHECK(actor_body(moving, 5).x == doctest::Approx(92.0));
}

TEST_CASE("validate rejects bad scenes") {
  SyntheticSceneSpec s;
  CHECK_THROWS_AS(validate(s), Error);
  s.actors = {actor(5, 64, 100, 0.0, true)};
  CHECK_THROWS_AS(validate(s), Error);
  s.actors = {actor(112, 64, 100, 0.0, true)};
  CHECK_NOTHROW(validate(s));
}

TEST_CASE("sampled scenes respect the margin and are deterministic") {
  SceneSampler sampler;
  std::mt19937_64 a(7), b(7);
  for (int i = 0; i < 50; ++i) {
    const auto sa = sample_scene(sampler, a);
    const auto sb = sample_scene(sampler, b);
    CHECK(to_json(sa) == to_json(sb));
    std::vector<double> comp;
    for (const auto& act : sa.actors) comp.push_back(actor_composite(act, sa.width, sa.height, sa.weights));
    std::sort(comp.rbegin(), comp.rend());
    REQUIRE(comp.size() >= 2);
    CHECK(comp[0] - comp[1] >= sampler.margin);
    CHECK(static_cast<int>(sa.actors.size()) >= sampler.min_actors);
    CHECK(static_cast<int>(sa.actors.size()) <= sampler.max_actors);
  }
}

TEST_CASE("rendering is deterministic and in range") {
  const auto data = make_image_dataset(3, SceneSampler{}, 12);
  const auto again = make_image_dataset(3, SceneSampler{}, 12);
  REQUIRE(data.size() == 3);
  CHECK(data[0].annotation.image_id == "img00000");
  for (std::size_t i = 0; i < data.size(); ++i) {
    CHECK(data[i].image == again[i].image);
    const auto& px = data[i].image.data();
    CHECK(*std::min_element(px.begin(), px.end()) >= 0.0f);
    CHECK(*std::max_element(px.begin(), px.end()) <= 1.0f);
    CHECK(data[i].candidates.entries.size() == data[i].annotation.entries.size());
  }
  CHECK_FALSE(data[0].image == data[1].image);
}

TEST_CASE("hard-cut videos report their cuts and are detected") {
  VideoSampler vs;
  std::mt19937_64 rng(3);
  const auto spec = sample_video(vs, rng);
  const auto v = render_video(spec);
  int total = 0;
  for (const auto& s : spec.shots) total += s.length;
  CHECK(static_cast<int>(v.frames.size()) == total);
  CHECK(v.annotations.records.size() == v.frames.size());
  CHECK(v.cut_frames.size() == spec.shots.size() - 1);
  const auto shots = detect_shots(v.frames);
  std::vector<int> starts;
  for (std::size_t i = 1; i < shots.size(); ++i) starts.push_back(shots[i].start);
  CHECK(starts == v.cut_frames);
}

TEST_CASE("crossfade videos have no cuts") {
  VideoSampler vs;
  vs.transition = Transition::kCrossfade;
  std::mt19937_64 rng(4);
  const auto v = render_video(sample_video(vs, rng));
  CHECK(v.cut_frames.empty());
  CHECK(detect_shots(v.frames).size() == 1);
}

TEST_CASE("two-shot fixture") {
  const auto spec = two_shot_fixture(1);
  REQUIRE(spec.shots.size() == 2);
  const auto v = render_video(spec);
  CHECK(v.cut_frames == std::vector<int>{40});
  const auto& r0 = v.annotations.records[0];
  const auto& r1 = v.annotations.records[40];
  const auto subject = [](const AnnotationRecord& r) {
    for (const auto& e : r.entries) {
      if (e.rank == 0) return e.primary_box().center().x;
    }
    return -1.0;
  };
  CHECK(subject(r0) < spec.width / 2.0);
  CHECK(subject(r1) > spec.width / 2.0);
}

TEST_CASE("box jitter moves candidates but not annotations") {
  auto spec = two_shot_fixture(1);
  spec.box_jitter = 3.0;
  const auto v = render_video(spec);
  const auto plain = render_video(two_shot_fixture(1));
  CHECK(v.frames.frames == plain.frames.frames);
  bool moved = false;
  for (std::size_t t = 0; t < v.candidates.records.size(); ++t) {
    const auto& a = v.candidates.records[t].entries[0].primary_box();
    const auto& b = plain.candidates.records[t].entries[0].primary_box();
    CHECK(std::abs(a.x - b.x) <= 3.0 + 1e-9);
    moved = moved || a.x != b.x;
  }
  CHECK(moved);
}
