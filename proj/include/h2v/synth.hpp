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

#include <cstdint>
#include <random>
#include <vector>

#include <json.hpp>

#include "h2v/annotations.hpp"
#include "h2v/frame.hpp"
#include "h2v/geometry.hpp"

namespace h2v {

// Weights of the subject criteria composite. Each criterion term is in [0,1].
struct CriteriaWeights {
  double central = 0.3;       // 1 - |body center - frame center| / half diagonal
  double proportional = 0.3;  // body height / frame height
  double focal = 0.2;         // 1 - blur
  double postural = 0.2;      // 1 when facing the camera

  double sum() const { return central + proportional + focal + postural; }
};

struct ActorSpec {
  double cx = 0.0;      // body center at t = 0, pixels
  double cy = 0.0;
  double height = 0.0;  // body height, pixels; width is 0.45 of it
  double blur = 0.0;    // 0 sharp .. 1 strongly defocused
  bool facing = true;
  double vx = 0.0;      // px/frame
  double vy = 0.0;
  std::uint64_t texture_seed = 0;
};

struct SceneStyle {
  float base[3] = {0.35f, 0.38f, 0.42f};  // background color
  std::uint64_t seed = 0;                 // background texture
};

struct SyntheticSceneSpec {
  int width = 224;
  int height = 128;
  std::vector<ActorSpec> actors;
  CriteriaWeights weights;
  SceneStyle style;
};

BBox actor_body(const ActorSpec& a, int t = 0);
BBox actor_face(const ActorSpec& a, int t = 0);

double actor_composite(const ActorSpec& a, int frame_w, int frame_h, const CriteriaWeights& w);

// Rank of each actor: 0 for the composite maximum, then descending composite.
// Ties go to the lower index.
std::vector<int> composite_ranks(const SyntheticSceneSpec& spec);

// Throws kConfig when there are no actors, more than kMaxRank + 1 actors, or
// an actor does not fit the frame at t = 0.
void validate(const SyntheticSceneSpec& spec);

Frame render_scene(const SyntheticSceneSpec& spec, int t = 0);

AnnotationRecord scene_annotation(const SyntheticSceneSpec& spec, const std::string& id, int t = 0);
CandidateRecord scene_candidates(const SyntheticSceneSpec& spec, const std::string& id, int t = 0);

struct SceneSampler {
  int width = 224;
  int height = 128;
  int min_actors = 2;
  int max_actors = 4;
  double min_height = 0.3;   // body height range as a fraction of frame height
  double max_height = 0.75;
  double margin = 0.05;      // composite gap between rank 0 and rank 1
  double facing_prob = 0.6;
  double sharp_prob = 0.4;   // chance of blur = 0
  double max_speed = 0.0;    // px/frame per axis
  CriteriaWeights weights;
};

// Actors whose faces stay clear of other actors' bodies, with the composite
// margin enforced. Deterministic given the rng state.
SyntheticSceneSpec sample_scene(const SceneSampler& s, std::mt19937_64& rng);

struct SyntheticImage {
  Frame image;
  AnnotationRecord annotation;
  CandidateRecord candidates;
  SyntheticSceneSpec spec;
};

std::vector<SyntheticImage> make_image_dataset(int count, const SceneSampler& s, std::uint64_t seed,
                                               const std::string& id_prefix = "img");

// ---------------------------------------------------------------- video

enum class Transition { kHardCut, kCrossfade };

struct SyntheticShot {
  int length = 40;
  SyntheticSceneSpec scene;
};

struct SyntheticVideoSpec {
  int width = 320;
  int height = 180;
  std::vector<SyntheticShot> shots;
  Transition transition = Transition::kHardCut;
  int crossfade = 16;       // frames of blend at each boundary when crossfading
  double box_jitter = 0.0;  // uniform +- px added to candidate boxes per frame
  std::uint64_t seed = 0;
};

struct SyntheticVideo {
  FrameSequence frames;
  AnnotationSet annotations;   // per frame, id frame_id(t)
  CandidateFile candidates;    // per frame, jittered boxes
  std::vector<int> cut_frames;  // first frame of every shot after the first
};

// Hard cuts switch scenes at shot starts. Crossfades blend the last
// `crossfade` frames of a shot into the next scene; annotations then follow
// the outgoing shot until the blend ends and cut_frames is empty.
SyntheticVideo render_video(const SyntheticVideoSpec& spec);

struct VideoSampler {
  int width = 320;
  int height = 180;
  int min_shots = 2;
  int max_shots = 4;
  int min_len = 24;
  int max_len = 60;
  double max_speed = 0.5;
  double box_jitter = 0.0;
  Transition transition = Transition::kHardCut;
  int crossfade = 16;
  int min_actors = 1;
  int max_actors = 3;
};

// Consecutive shots get backgrounds far apart in color so hard cuts show up
// in the histograms.
SyntheticVideoSpec sample_video(const VideoSampler& s, std::mt19937_64& rng);

// Two hard-cut shots whose primary subjects differ: large, centered-left in
// shot 0 and centered-right in shot 1, each with a small blurred extra.
SyntheticVideoSpec two_shot_fixture(std::uint64_t seed, int length = 40);

nlohmann::json to_json(const SyntheticSceneSpec& spec);

}  // namespace h2v
