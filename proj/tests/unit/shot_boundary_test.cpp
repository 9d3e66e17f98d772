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

using namespace h2v;

namespace {

Frame solid(float r, float g, float b, int w = 32, int h = 32) {
  Frame f(w, h, 3);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      f.at(x, y, 0) = r;
      f.at(x, y, 1) = g;
      f.at(x, y, 2) = b;
    }
  }
  return f;
}

// Shot k: textured scene in its own palette with a slowly drifting block.
FrameSequence multi_shot(const std::vector<int>& lengths, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  FrameSequence seq;
  for (std::size_t k = 0; k < lengths.size(); ++k) {
    const float base[3] = {0.15f + 0.7f * ((k * 37) % 5) / 4.0f, 0.15f + 0.7f * ((k * 11 + 2) % 5) / 4.0f,
                           0.15f + 0.7f * ((k * 23 + 4) % 5) / 4.0f};
    for (int t = 0; t < lengths[k]; ++t) {
      Frame f(48, 32, 3);
      for (int y = 0; y < 32; ++y) {
        for (int x = 0; x < 48; ++x) {
          const bool block = x >= 5 + t && x < 15 + t && y >= 8 && y < 20;
          for (int c = 0; c < 3; ++c) {
            const float v = base[c] + (block ? 0.1f : 0.0f) + 0.02f * (u(rng) - 0.5f);
            f.at(x, y, c) = std::clamp(v, 0.0f, 1.0f);
          }
        }
      }
      seq.frames.push_back(std::move(f));
    }
  }
  return seq;
}

}  // namespace

TEST_CASE("identical frames form one shot") {
  FrameSequence seq;
  for (int i = 0; i < 20; ++i) seq.frames.push_back(solid(0.3f, 0.5f, 0.2f));
  CHECK(detect_shots(seq) == std::vector<ShotSegment>{{0, 20}});
}

TEST_CASE("red then blue splits at frame 20") {
  FrameSequence seq;
  for (int i = 0; i < 20; ++i) seq.frames.push_back(solid(1, 0, 0));
  for (int i = 0; i < 20; ++i) seq.frames.push_back(solid(0, 0, 1));
  const auto d = frame_distances(seq, 16);
  // Histogram oracle: red and blue channels move all mass between the end
  // bins, green stays put, so the distance is (1 + 0 + 1) / 3.
  CHECK(d[19] == doctest::Approx(2.0 / 3.0));
  for (int t = 0; t < 39; ++t) {
    if (t != 19) CHECK(d[t] == 0.0);
  }
  CHECK(detect_shots(seq) == std::vector<ShotSegment>{{0, 20}, {20, 40}});
}

TEST_CASE("linear crossfade stays one shot") {
  FrameSequence seq;
  for (int t = 0; t < 40; ++t) {
    const float a = t / 39.0f;
    seq.frames.push_back(solid(1 - a, 0, a));
  }
  const auto d = frame_distances(seq, 16);
  const double peak = *std::max_element(d.begin(), d.end());
  CHECK(peak < 0.5);
  CHECK(detect_shots(seq) == std::vector<ShotSegment>{{0, 40}});
}

TEST_CASE("histogram soft binning") {
  const auto h = frame_histogram(solid(0.5f, 0.0f, 1.0f, 16, 16), 16);
  REQUIRE(h.size() == 48);
  // 0.5 * 16 - 0.5 = 7.5: split evenly between bins 7 and 8.
  CHECK(h[7] == doctest::Approx(0.5));
  CHECK(h[8] == doctest::Approx(0.5));
  CHECK(h[16] == doctest::Approx(1.0));
  CHECK(h[47] == doctest::Approx(1.0));
}

TEST_CASE("short segments merge") {
  CHECK(segments_from_cuts({10, 13, 30}, 40, 8) ==
        std::vector<ShotSegment>{{0, 13}, {13, 30}, {30, 40}});
  CHECK(segments_from_cuts({3, 20}, 40, 8) == std::vector<ShotSegment>{{0, 20}, {20, 40}});
  CHECK(segments_from_cuts({35}, 40, 8) == std::vector<ShotSegment>{{0, 40}});
  CHECK(segments_from_cuts({}, 5, 8) == std::vector<ShotSegment>{{0, 5}});
}

TEST_CASE("multi-shot sequences split at every cut") {
  const std::vector<int> lengths = {14, 9, 22, 12};
  const auto seq = multi_shot(lengths, 5);
  const auto shots = detect_shots(seq);
  CHECK(shots == std::vector<ShotSegment>{{0, 14}, {14, 23}, {23, 45}, {45, 57}});
}

TEST_CASE("random inputs always tile") {
  std::mt19937 rng(9);
  std::uniform_real_distribution<float> u(0, 1);
  for (int trial = 0; trial < 30; ++trial) {
    FrameSequence seq;
    const int n = 1 + static_cast<int>(rng() % 40);
    for (int i = 0; i < n; ++i) {
      Frame f(16, 16, 3);
      const float level = u(rng);
      for (auto& v : f.data()) v = std::clamp(level + 0.3f * (u(rng) - 0.5f), 0.0f, 1.0f);
      seq.frames.push_back(std::move(f));
    }
    SbdConfig cfg;
    cfg.min_len = 1 + static_cast<int>(rng() % 10);
    CHECK_NOTHROW(validate_tiling(detect_shots(seq, cfg), n));
  }
}

TEST_CASE("pixel permutation leaves boundaries unchanged") {
  const auto seq = multi_shot({12, 15, 10}, 3);
  std::vector<std::size_t> perm(48 * 32);
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), std::mt19937(1));
  FrameSequence shuffled;
  for (const auto& f : seq.frames) {
    Frame g(48, 32, 3);
    for (std::size_t i = 0; i < perm.size(); ++i) {
      for (int c = 0; c < 3; ++c) g.data()[i * 3 + c] = f.data()[perm[i] * 3 + c];
    }
    shuffled.frames.push_back(std::move(g));
  }
  CHECK(detect_shots(shuffled) == detect_shots(seq));
  CHECK(frame_distances(shuffled, 16) == frame_distances(seq, 16));
}

TEST_CASE("frame duplication doubles the boundaries") {
  const auto seq = multi_shot({12, 15, 10, 9}, 4);
  FrameSequence doubled;
  for (const auto& f : seq.frames) {
    doubled.frames.push_back(f);
    doubled.frames.push_back(f);
  }
  const auto a = detect_shots(seq);
  const auto b = detect_shots(doubled);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(b[i].start == 2 * a[i].start);
    CHECK(b[i].end == 2 * a[i].end);
  }
}

TEST_CASE("shot errors and json") {
  CHECK_THROWS_AS(detect_shots(FrameSequence{}), Error);
  SbdConfig bad;
  bad.bins = 4;
  FrameSequence one;
  one.frames.push_back(solid(0, 0, 0));
  CHECK_THROWS_AS(detect_shots(one, bad), Error);
  const std::vector<ShotSegment> s = {{0, 5}, {5, 9}};
  CHECK(shots_from_json(shots_to_json(s)) == s);
  CHECK(shots_to_json(s).dump() == R"({"shots":[[0,5],[5,9]]})");
  CHECK_THROWS_AS(validate_tiling({{0, 5}, {6, 9}}, 9), Error);
}
