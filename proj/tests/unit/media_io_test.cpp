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

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "h2v/annotations.hpp"
#include "h2v/crop_plan.hpp"
#include "h2v/error.hpp"
#include "h2v/image_io.hpp"
#include "h2v/sequence_io.hpp"
#include "h2v/y4m.hpp"

namespace fs = std::filesystem;
using namespace h2v;
using nlohmann::json;

namespace {

fs::path scratch_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("h2v_media_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

Frame random_rgb_frame(int w, int h, std::mt19937& rng) {
  std::uniform_int_distribution<int> byte(0, 255);
  Frame f(w, h, 3);
  for (auto& v : f.data()) v = byte(rng) / 255.0f;
  return f;
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an h2v::Error");
  return ErrorKind::kFault;
}

// Smooth mid-range content; stays inside the RGB gamut after chroma
// subsampling so clamping never kicks in.
Frame smooth_rgb_frame(int w, int h, std::mt19937& rng) {
  std::uniform_real_distribution<float> noise(-0.02f, 0.02f);
  std::uniform_real_distribution<float> phase(0.0f, 6.28f);
  const float p[3] = {phase(rng), phase(rng), phase(rng)};
  Frame f(w, h, 3);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < 3; ++c) {
        const float v = 0.5f + 0.3f * std::sin(0.11f * x + 0.07f * y + p[c]) + noise(rng);
        f.at(x, y, c) = to_byte(v) / 255.0f;
      }
    }
  }
  return f;
}

json one_record(json entries) {
  return {{"images", json::array({{{"id", "img0"}, {"width", 320}, {"height", 180}, {"entries", entries}}})}};
}

}  // namespace

TEST_CASE("directory of identical PPMs loads in order") {
  const auto dir = scratch_dir("ppm3");
  Frame f(64, 64, 3, 0.5f);
  for (int i = 0; i < 3; ++i) write_pnm(f, dir / ("f" + std::to_string(i) + ".ppm"));
  const FrameSequence seq = load_frame_sequence(dir);
  CHECK(seq.size() == 3);
  CHECK(seq.width() == 64);
  CHECK(seq.height() == 64);
  CHECK(seq[0] == read_pnm(dir / "f0.ppm"));
}

TEST_CASE("PNG round trip is exact for 8-bit content") {
  std::mt19937 rng(3);
  const auto dir = scratch_dir("png");
  const Frame f = random_rgb_frame(33, 17, rng);
  write_png(f, dir / "a.png");
  CHECK(read_png(dir / "a.png") == f);
}

TEST_CASE("mixed dimensions are rejected") {
  const auto dir = scratch_dir("mixed");
  write_pnm(Frame(64, 64, 3), dir / "a.ppm");
  write_pnm(Frame(32, 32, 3), dir / "b.ppm");
  CHECK(kind_of([&] { load_frame_sequence(dir); }) == ErrorKind::kDimensionMismatch);
}

TEST_CASE("empty directory and unreadable frames") {
  const auto dir = scratch_dir("empty");
  CHECK(kind_of([&] { load_frame_sequence(dir); }) == ErrorKind::kEmptyInput);
  write_pnm(Frame(64, 64, 1), dir / "a.pgm");
  std::ofstream(dir / "b.ppm") << "garbage";
  try {
    load_frame_sequence(dir);
    FAIL("expected an I/O error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kIo);
    CHECK(std::string(e.what()).find("frame 1") != std::string::npos);
  }
}

TEST_CASE("Y4M W64 H32 stream of 10 frames") {
  std::mt19937 rng(5);
  const auto dir = scratch_dir("y4m");
  FrameSequence seq;
  for (int i = 0; i < 10; ++i) seq.frames.push_back(random_rgb_frame(64, 32, rng));
  write_y4m(seq, dir / "a.y4m");
  std::ifstream in(dir / "a.y4m", std::ios::binary);
  std::string header;
  std::getline(in, header);
  CHECK(header.find("W64 H32 F25:1") != std::string::npos);
  const FrameSequence back = load_frame_sequence(dir / "a.y4m");
  CHECK(back.size() == 10);
  CHECK(back.width() == 64);
  CHECK(back.height() == 32);
}

TEST_CASE("Y4M header parsing") {
  const Y4mHeader h = parse_y4m_header("YUV4MPEG2 W1920 H1080 F30000:1001 It A1:1 C444 XYSCSS=444");
  CHECK(h.width == 1920);
  CHECK(h.height == 1080);
  CHECK(h.fps_num == 30000);
  CHECK(h.fps_den == 1001);
  CHECK(h.chroma == Y4mChroma::k444);
  CHECK(parse_y4m_header("YUV4MPEG2 W8 H8 C420paldv").chroma == Y4mChroma::k420);
  CHECK(kind_of([] { parse_y4m_header("YUV4MPEG2 W8 H8 C422"); }) == ErrorKind::kIo);
  CHECK(kind_of([] { parse_y4m_header("YUV4MPEG W8 H8"); }) == ErrorKind::kIo);
}

TEST_CASE("Y4M byte round trip: exact for 4:4:4, within one step for 4:2:0") {
  std::mt19937 rng(11);
  for (const auto chroma : {Y4mChroma::k444, Y4mChroma::k420}) {
    for (int trial = 0; trial < 5; ++trial) {
      const Frame src = smooth_rgb_frame(24 + trial, 18 + 2 * trial, rng);
      const YuvPicture pic = frame_to_yuv(src, chroma);
      const YuvPicture again = frame_to_yuv(yuv_to_frame(pic), chroma);
      int worst = 0;
      for (const auto& [a, b] : {std::pair{&pic.y, &again.y}, {&pic.u, &again.u}, {&pic.v, &again.v}}) {
        for (std::size_t i = 0; i < a->size(); ++i) worst = std::max(worst, std::abs(int((*a)[i]) - int((*b)[i])));
      }
      if (chroma == Y4mChroma::k444) {
        CHECK(worst == 0);
      } else {
        CHECK(worst <= 1);
      }
    }
  }
}

TEST_CASE("Y4M stream bytes survive decode and re-encode") {
  std::mt19937 rng(13);
  FrameSequence seq;
  for (int i = 0; i < 3; ++i) seq.frames.push_back(smooth_rgb_frame(20, 16, rng));
  Y4mHeader h;
  h.width = 20;
  h.height = 16;
  h.chroma = Y4mChroma::k444;
  std::vector<YuvPicture> pics;
  for (const auto& f : seq.frames) pics.push_back(frame_to_yuv(f, h.chroma));
  std::ostringstream first;
  write_y4m_pictures(first, h, pics);
  std::istringstream in(first.str());
  std::vector<YuvPicture> decoded;
  for (const auto& p : read_y4m_pictures(in)) decoded.push_back(frame_to_yuv(yuv_to_frame(p), h.chroma));
  std::ostringstream second;
  write_y4m_pictures(second, h, decoded);
  CHECK(first.str() == second.str());
}

TEST_CASE("annotation parsing: valid, multi-subject and schema errors") {
  const json face_body = {{"face", {10, 10, 20, 20}}, {"body", {5, 10, 30, 90}}, {"rank", 0}};
  SUBCASE("one rank-0 pair") {
    const AnnotationSet set = annotations_from_json(one_record(json::array({face_body})));
    REQUIRE(set.records.size() == 1);
    CHECK_FALSE(set.records[0].is_multi_subject());
    CHECK(set.records[0].subject_boxes().front() == BBox{10, 10, 20, 20});
    CHECK(set.records[0].subject_boxes(true).front() == BBox{5, 10, 30, 90});
  }
  SUBCASE("duplicate ranks") {
    json e1 = face_body;
    json e2 = face_body;
    e2["rank"] = 1;
    json e3 = face_body;
    e3["rank"] = 1;
    CHECK(kind_of([&] { annotations_from_json(one_record({e1, e2, e3})); }) == ErrorKind::kSchema);
  }
  SUBCASE("rank outside 0..6") {
    json e1 = face_body;
    json e2 = face_body;
    e2["rank"] = 7;
    CHECK(kind_of([&] { annotations_from_json(one_record({e1, e2})); }) == ErrorKind::kSchema);
  }
  SUBCASE("no subject") {
    json e1 = face_body;
    e1["rank"] = 2;
    CHECK(kind_of([&] { annotations_from_json(one_record({e1})); }) == ErrorKind::kSchema);
  }
  SUBCASE("co-subjects are accepted") {
    json e2 = face_body;
    e2["face"] = {100, 10, 20, 20};
    const AnnotationSet set = annotations_from_json(one_record({face_body, e2}));
    CHECK(set.records[0].is_multi_subject());
    CHECK(set.records[0].subject_boxes().size() == 2);
  }
  SUBCASE("entry without any box") {
    json e1 = {{"face", nullptr}, {"body", nullptr}, {"rank", 0}};
    CHECK(kind_of([&] { annotations_from_json(one_record({e1})); }) == ErrorKind::kSchema);
  }
}

TEST_CASE("annotation parser accepts exactly the valid mutations") {
  // Random documents; each mutation is checked against an independent
  // statement of the schema rules.
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> rank_dist(-1, 7);
  std::uniform_int_distribution<int> count_dist(1, 5);
  std::uniform_int_distribution<int> box_dist(-2, 40);
  std::bernoulli_distribution coin(0.15);
  int accepted = 0;
  int rejected = 0;
  for (int trial = 0; trial < 400; ++trial) {
    json entries = json::array();
    std::vector<int> ranks;
    bool boxes_ok = true;
    const int n = count_dist(rng);
    for (int i = 0; i < n; ++i) {
      const int r = rank_dist(rng);
      ranks.push_back(r);
      json face = json::array({box_dist(rng), box_dist(rng), box_dist(rng) + 3, box_dist(rng) + 3});
      if (face[2].get<int>() <= 0 || face[3].get<int>() <= 0) boxes_ok = false;
      json body = coin(rng) ? json(nullptr) : json::array({0, 0, 10, 10});
      entries.push_back({{"face", face}, {"body", body}, {"rank", r}});
    }
    bool valid = boxes_ok;
    bool has0 = false;
    for (std::size_t i = 0; i < ranks.size(); ++i) {
      if (ranks[i] < 0 || ranks[i] > 6) valid = false;
      if (ranks[i] == 0) has0 = true;
      for (std::size_t j = 0; j < i; ++j) {
        if (ranks[i] == ranks[j] && ranks[i] != 0) valid = false;
      }
    }
    valid = valid && has0;
    bool parsed = true;
    try {
      annotations_from_json(one_record(entries));
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kSchema);
      parsed = false;
    }
    CHECK(parsed == valid);
    (parsed ? accepted : rejected)++;
  }
  CHECK(accepted > 20);
  CHECK(rejected > 20);
}

TEST_CASE("candidate file clamps boxes and checks confidence") {
  json doc = {{"images", json::array({{{"id", "0"}, {"width", 100}, {"height", 50},
                                        {"entries", json::array({{{"face", {-10, 5, 30, 10}}, {"conf", 0.7}}})}}})}};
  const CandidateFile file = candidates_from_json(doc);
  CHECK(file.records[0].entries[0].face == BBox{0, 5, 20, 10});
  CHECK(file.records[0].entries[0].conf == doctest::Approx(0.7));
  doc["images"][0]["entries"][0]["conf"] = 1.5;
  CHECK(kind_of([&] { candidates_from_json(doc); }) == ErrorKind::kSchema);
  doc["images"][0]["entries"][0]["conf"] = 0.5;
  doc["images"][0]["entries"][0]["face"] = {200, 5, 30, 10};
  CHECK(kind_of([&] { candidates_from_json(doc); }) == ErrorKind::kSchema);
}

TEST_CASE("crop plan serialization and rendering") {
  CropPlan plan;
  plan.frame_width = 1920;
  plan.frame_height = 1080;
  plan.windows = {{656, 0, 608, 1080}};
  plan.shots = {{0, 1}};
  plan.selections = {{0, SelectionReason::kShotStart}};
  plan.config_hash = "abc";

  SUBCASE("round trip") {
    const auto dir = scratch_dir("plan");
    write_crop_plan(plan, dir / "plan.json");
    CHECK(read_crop_plan(dir / "plan.json") == plan);
    const json doc = read_json_file(dir / "plan.json");
    CHECK(doc["aspect"] == "9:16");
    CHECK(doc["frames"][0]["window"] == json::array({656, 0, 608, 1080}));
  }
  SUBCASE("render dims") {
    FrameSequence seq;
    seq.frames.push_back(Frame(1920, 1080, 3, 0.25f));
    const FrameSequence out = render_vertical(seq, plan);
    CHECK(out[0].width() == 608);
    CHECK(out[0].height() == 1080);
  }
  SUBCASE("out of bounds window") {
    plan.windows[0].x = 1400;
    CHECK(kind_of([&] { validate_plan(plan, 1); }) == ErrorKind::kGeometry);
  }
  SUBCASE("missing frame") {
    CHECK(kind_of([&] { validate_plan(plan, 2); }) == ErrorKind::kCoverage);
  }
}

TEST_CASE("rendered pixels equal the source window pixels") {
  std::mt19937 rng(23);
  FrameSequence seq;
  for (int i = 0; i < 4; ++i) seq.frames.push_back(random_rgb_frame(48, 32, rng));
  CropPlan plan;
  plan.frame_width = 48;
  plan.frame_height = 32;
  std::uniform_int_distribution<int> xd(0, 48 - 18);
  for (int i = 0; i < 4; ++i) plan.windows.push_back({xd(rng), 0, 18, 32});
  const FrameSequence out = render_vertical(seq, plan);
  for (int t = 0; t < 4; ++t) {
    const auto& w = plan.windows[t];
    for (int v = 0; v < w.h; ++v) {
      for (int u = 0; u < w.w; ++u) {
        for (int c = 0; c < 3; ++c) REQUIRE(out[t].at(u, v, c) == seq[t].at(w.x + u, w.y + v, c));
      }
    }
  }
}

TEST_CASE("aspect parsing") {
  CHECK(parse_aspect("9:16") == Aspect{9, 16});
  CHECK(parse_aspect("3:4").ratio() == doctest::Approx(0.75));
  CHECK(kind_of([] { parse_aspect("9x16"); }) == ErrorKind::kConfig);
  CHECK(kind_of([] { parse_aspect("0:16"); }) == ErrorKind::kConfig);
}
