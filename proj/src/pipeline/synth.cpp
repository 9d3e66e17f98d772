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

#include "h2v/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "h2v/error.hpp"

namespace h2v {

namespace {

constexpr double kBodyAspect = 0.45;  // body width / height
constexpr double kFaceScale = 0.8;    // face side / body width

// Deterministic hash to [0,1) for per-pixel texture.
double hash01(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = seed ^ (a * 0x9E3779B97F4A7C15ULL) ^ (b * 0xC2B2AE3D27D4EB4FULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return static_cast<double>(z >> 11) * (1.0 / 9007199254740992.0);
}

struct Rgb {
  float r, g, b;
};

Rgb clothing_color(std::uint64_t seed) {
  // Mid-saturation colors that stay away from skin and hair tones.
  static const Rgb palette[] = {{0.20f, 0.35f, 0.75f}, {0.15f, 0.60f, 0.30f}, {0.70f, 0.20f, 0.25f},
                                {0.55f, 0.25f, 0.65f}, {0.20f, 0.55f, 0.60f}, {0.65f, 0.55f, 0.15f}};
  return palette[seed % 6];
}

// Premultiplied RGBA layer covering [x0,x0+w) x [y0,y0+h).
struct Layer {
  int x0 = 0, y0 = 0, w = 0, h = 0;
  std::vector<float> rgba;
  float* px(int x, int y) { return &rgba[(static_cast<std::size_t>(y) * w + x) * 4]; }
};

void gaussian_blur_layer(Layer& l, double sigma) {
  if (sigma < 0.3) return;
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * r + 1);
  double sum = 0.0;
  for (int i = -r; i <= r; ++i) sum += k[i + r] = std::exp(-0.5 * i * i / (sigma * sigma));
  for (auto& v : k) v /= sum;
  std::vector<float> tmp(l.rgba.size(), 0.0f);
  for (int y = 0; y < l.h; ++y) {
    for (int x = 0; x < l.w; ++x) {
      for (int c = 0; c < 4; ++c) {
        double acc = 0.0;
        for (int i = -r; i <= r; ++i) {
          const int xx = x + i;
          if (xx >= 0 && xx < l.w) acc += k[i + r] * l.rgba[(static_cast<std::size_t>(y) * l.w + xx) * 4 + c];
        }
        tmp[(static_cast<std::size_t>(y) * l.w + x) * 4 + c] = static_cast<float>(acc);
      }
    }
  }
  for (int y = 0; y < l.h; ++y) {
    for (int x = 0; x < l.w; ++x) {
      for (int c = 0; c < 4; ++c) {
        double acc = 0.0;
        for (int i = -r; i <= r; ++i) {
          const int yy = y + i;
          if (yy >= 0 && yy < l.h) acc += k[i + r] * tmp[(static_cast<std::size_t>(yy) * l.w + x) * 4 + c];
        }
        l.rgba[(static_cast<std::size_t>(y) * l.w + x) * 4 + c] = static_cast<float>(acc);
      }
    }
  }
}

Layer render_actor(const ActorSpec& a, int t) {
  const BBox body = actor_body(a, t);
  const BBox face = actor_face(a, t);
  const double sigma = 3.0 * a.blur;
  const int pad = static_cast<int>(std::ceil(3.0 * sigma)) + 1;
  Layer l;
  l.x0 = static_cast<int>(std::floor(body.x)) - pad;
  l.y0 = static_cast<int>(std::floor(body.y)) - pad;
  l.w = static_cast<int>(std::ceil(body.w)) + 2 * pad + 1;
  l.h = static_cast<int>(std::ceil(body.h)) + 2 * pad + 1;
  l.rgba.assign(static_cast<std::size_t>(l.w) * l.h * 4, 0.0f);
  const Rgb cloth = clothing_color(a.texture_seed);
  for (int y = 0; y < l.h; ++y) {
    for (int x = 0; x < l.w; ++x) {
      // Pixel center in actor-local coordinates (origin at the body box).
      const double gx = l.x0 + x + 0.5;
      const double gy = l.y0 + y + 0.5;
      const double u = gx - body.x;
      const double v = gy - body.y;
      Rgb c{};
      if (gx >= face.x && gx < face.right() && gy >= face.y && gy < face.bottom()) {
        const double fu = (gx - face.x) / face.w;
        const double fv = (gy - face.y) / face.h;
        if (a.facing) {
          c = {0.93f, 0.77f, 0.63f};
          const bool eye = fv > 0.28 && fv < 0.42 &&
                           ((fu > 0.18 && fu < 0.38) || (fu > 0.62 && fu < 0.82));
          const bool mouth = fv > 0.66 && fv < 0.76 && fu > 0.30 && fu < 0.70;
          if (eye || mouth) c = {0.12f, 0.08f, 0.08f};
        } else {
          const bool strand = static_cast<int>(std::floor(u / 2.0)) % 2 == 0;
          c = strand ? Rgb{0.30f, 0.20f, 0.12f} : Rgb{0.18f, 0.11f, 0.07f};
        }
      } else if (gy >= face.bottom() && u >= 0.0 && u < body.w && v < body.h) {
        const int stripe = static_cast<int>(std::floor((gy - face.bottom()) / 3.0)) % 2;
        const float k = stripe ? 1.0f : 0.65f;
        c = {cloth.r * k, cloth.g * k, cloth.b * k};
      } else {
        continue;
      }
      float* p = l.px(x, y);
      p[0] = c.r;
      p[1] = c.g;
      p[2] = c.b;
      p[3] = 1.0f;
    }
  }
  gaussian_blur_layer(l, sigma);
  return l;
}

void composite(Frame& f, const Layer& l, float alpha_scale = 1.0f) {
  for (int y = 0; y < l.h; ++y) {
    const int fy = l.y0 + y;
    if (fy < 0 || fy >= f.height()) continue;
    for (int x = 0; x < l.w; ++x) {
      const int fx = l.x0 + x;
      if (fx < 0 || fx >= f.width()) continue;
      const float* p = &l.rgba[(static_cast<std::size_t>(y) * l.w + x) * 4];
      const float a = p[3] * alpha_scale;
      if (a <= 0.0f) continue;
      for (int c = 0; c < 3; ++c) f.at(fx, fy, c) = f.at(fx, fy, c) * (1.0f - a) + p[c] * alpha_scale;
    }
  }
}

Frame render_background(const SceneStyle& s, int w, int h) {
  Frame f(w, h, 3);
  const double fx = 1.0 + 2.0 * hash01(s.seed, 1, 0);
  const double fy = 1.0 + 2.0 * hash01(s.seed, 2, 0);
  const double ph = 6.283185307179586 * hash01(s.seed, 3, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double shade = 0.05 * std::sin(ph + 6.283185307179586 * (fx * x / w + fy * y / h));
      const double noise = 0.02 * (hash01(s.seed, static_cast<std::uint64_t>(x), static_cast<std::uint64_t>(y)) - 0.5);
      for (int c = 0; c < 3; ++c) {
        f.at(x, y, c) = static_cast<float>(std::clamp(s.base[c] + shade + noise, 0.0, 1.0));
      }
    }
  }
  return f;
}

}  // namespace

BBox actor_body(const ActorSpec& a, int t) {
  const double w = a.height * kBodyAspect;
  return {a.cx + a.vx * t - w / 2.0, a.cy + a.vy * t - a.height / 2.0, w, a.height};
}

BBox actor_face(const ActorSpec& a, int t) {
  const BBox b = actor_body(a, t);
  const double s = b.w * kFaceScale;
  return {b.x + (b.w - s) / 2.0, b.y + 0.02 * b.h, s, s};
}

double actor_composite(const ActorSpec& a, int frame_w, int frame_h, const CriteriaWeights& w) {
  const double half_diag = 0.5 * std::hypot(frame_w, frame_h);
  const double central =
      std::clamp(1.0 - distance({a.cx, a.cy}, {frame_w / 2.0, frame_h / 2.0}) / half_diag, 0.0, 1.0);
  const double proportional = std::clamp(a.height / frame_h, 0.0, 1.0);
  const double focal = 1.0 - std::clamp(a.blur, 0.0, 1.0);
  const double postural = a.facing ? 1.0 : 0.0;
  return w.central * central + w.proportional * proportional + w.focal * focal + w.postural * postural;
}

std::vector<int> composite_ranks(const SyntheticSceneSpec& spec) {
  const std::size_t n = spec.actors.size();
  std::vector<double> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = actor_composite(spec.actors[i], spec.width, spec.height, spec.weights);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return c[a] > c[b]; });
  std::vector<int> ranks(n);
  for (std::size_t r = 0; r < n; ++r) ranks[order[r]] = static_cast<int>(r);
  return ranks;
}

void validate(const SyntheticSceneSpec& spec) {
  if (spec.width < Frame::kMinDim || spec.height < Frame::kMinDim) {
    fail(ErrorKind::kConfig, "synthetic frame must be at least 16x16");
  }
  if (spec.actors.empty()) fail(ErrorKind::kConfig, "synthetic scene has no actors");
  if (spec.actors.size() > static_cast<std::size_t>(kMaxRank) + 1) {
    fail(ErrorKind::kConfig, "synthetic scene has more than 7 actors");
  }
  for (std::size_t i = 0; i < spec.actors.size(); ++i) {
    const BBox b = actor_body(spec.actors[i]);
    if (!(b.h > 4.0) || b.left() < 0.0 || b.top() < 0.0 || b.right() > spec.width ||
        b.bottom() > spec.height) {
      fail(ErrorKind::kConfig, "actor " + std::to_string(i) + " does not fit the frame");
    }
  }
}

Frame render_scene(const SyntheticSceneSpec& spec, int t) {
  validate(spec);
  Frame f = render_background(spec.style, spec.width, spec.height);
  std::vector<std::size_t> order(spec.actors.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Larger actors are nearer and drawn last.
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return spec.actors[a].height < spec.actors[b].height; });
  for (std::size_t i : order) composite(f, render_actor(spec.actors[i], t));
  return f;
}

AnnotationRecord scene_annotation(const SyntheticSceneSpec& spec, const std::string& id, int t) {
  AnnotationRecord r;
  r.image_id = id;
  r.width = spec.width;
  r.height = spec.height;
  const auto ranks = composite_ranks(spec);
  for (std::size_t i = 0; i < spec.actors.size(); ++i) {
    AnnotationEntry e;
    e.face = clamp_to_frame(actor_face(spec.actors[i], t), spec.width, spec.height);
    e.body = clamp_to_frame(actor_body(spec.actors[i], t), spec.width, spec.height);
    if (!e.body) continue;
    e.rank = ranks[i];
    r.entries.push_back(e);
  }
  return r;
}

CandidateRecord scene_candidates(const SyntheticSceneSpec& spec, const std::string& id, int t) {
  CandidateRecord r;
  r.image_id = id;
  r.width = spec.width;
  r.height = spec.height;
  for (const auto& a : spec.actors) {
    CandidateEntry e;
    e.face = clamp_to_frame(actor_face(a, t), spec.width, spec.height);
    e.body = clamp_to_frame(actor_body(a, t), spec.width, spec.height);
    if (!e.body) continue;
    r.entries.push_back(e);
  }
  return r;
}

SyntheticSceneSpec sample_scene(const SceneSampler& s, std::mt19937_64& rng) {
  if (s.min_actors < 1 || s.max_actors < s.min_actors || s.max_actors > kMaxRank + 1) {
    fail(ErrorKind::kConfig, "actor count range must lie in 1..7");
  }
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_int_distribution<int> count(s.min_actors, s.max_actors);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    SyntheticSceneSpec spec;
    spec.width = s.width;
    spec.height = s.height;
    spec.weights = s.weights;
    spec.style.seed = rng();
    const float tone = static_cast<float>(0.30 + 0.15 * u01(rng));
    for (int c = 0; c < 3; ++c) spec.style.base[c] = tone + static_cast<float>(0.06 * (u01(rng) - 0.5));
    const int n = count(rng);
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      bool placed = false;
      for (int k = 0; k < 200 && !placed; ++k) {
        ActorSpec a;
        a.height = s.height * (s.min_height + (s.max_height - s.min_height) * u01(rng));
        const double w = a.height * kBodyAspect;
        a.cx = w / 2.0 + (s.width - w) * u01(rng);
        a.cy = a.height / 2.0 + (s.height - a.height) * u01(rng);
        a.blur = u01(rng) < s.sharp_prob ? 0.0 : 0.2 + 0.8 * u01(rng);
        a.facing = u01(rng) < s.facing_prob;
        a.vx = s.max_speed * (2.0 * u01(rng) - 1.0);
        a.vy = s.max_speed * (2.0 * u01(rng) - 1.0);
        a.texture_seed = rng();
        bool clear = true;
        for (const auto& o : spec.actors) {
          const BBox ob = actor_body(o);
          const BBox ab = actor_body(a);
          if (intersection_area(actor_face(a), ob) > 0.0 || intersection_area(actor_face(o), ab) > 0.0 ||
              iou(ab, ob) > 0.2) {
            clear = false;
            break;
          }
        }
        if (clear) {
          spec.actors.push_back(a);
          placed = true;
        }
      }
      ok = placed;
    }
    if (!ok) continue;
    if (spec.actors.size() > 1) {
      std::vector<double> c;
      for (const auto& a : spec.actors) c.push_back(actor_composite(a, spec.width, spec.height, spec.weights));
      std::sort(c.begin(), c.end(), std::greater<>());
      if (c[0] - c[1] < s.margin) continue;
    }
    return spec;
  }
  fail(ErrorKind::kConfig, "could not place actors with the requested margin");
}

std::vector<SyntheticImage> make_image_dataset(int count, const SceneSampler& s, std::uint64_t seed,
                                               const std::string& id_prefix) {
  std::mt19937_64 rng(seed);
  std::vector<SyntheticImage> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    SyntheticImage im;
    im.spec = sample_scene(s, rng);
    char id[32];
    std::snprintf(id, sizeof id, "%s%05d", id_prefix.c_str(), i);
    im.image = render_scene(im.spec);
    im.annotation = scene_annotation(im.spec, id);
    im.candidates = scene_candidates(im.spec, id);
    out.push_back(std::move(im));
  }
  return out;
}

// ---------------------------------------------------------------- video

SyntheticVideo render_video(const SyntheticVideoSpec& spec) {
  if (spec.shots.empty()) fail(ErrorKind::kConfig, "synthetic video has no shots");
  SyntheticVideo v;
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> jit(-1.0, 1.0);
  int t = 0;
  for (std::size_t si = 0; si < spec.shots.size(); ++si) {
    const auto& shot = spec.shots[si];
    if (shot.length < 1) fail(ErrorKind::kConfig, "synthetic shot length must be positive");
    SyntheticSceneSpec scene = shot.scene;
    scene.width = spec.width;
    scene.height = spec.height;
    validate(scene);
    if (si > 0 && spec.transition == Transition::kHardCut) v.cut_frames.push_back(t);
    const bool fade_out = spec.transition == Transition::kCrossfade && si + 1 < spec.shots.size();
    const int fade = fade_out ? std::min(spec.crossfade, shot.length - 1) : 0;
    for (int k = 0; k < shot.length; ++k, ++t) {
      Frame f = render_scene(scene, k);
      if (fade > 0 && k >= shot.length - fade) {
        SyntheticSceneSpec next = spec.shots[si + 1].scene;
        next.width = spec.width;
        next.height = spec.height;
        const Frame g = render_scene(next, 0);
        const float a = static_cast<float>(k - (shot.length - fade) + 1) / (fade + 1);
        for (std::size_t i = 0; i < f.data().size(); ++i) {
          f.data()[i] = f.data()[i] * (1.0f - a) + g.data()[i] * a;
        }
      }
      v.frames.frames.push_back(std::move(f));
      v.annotations.records.push_back(scene_annotation(scene, frame_id(t), k));
      CandidateRecord c = scene_candidates(scene, frame_id(t), k);
      if (spec.box_jitter > 0.0) {
        for (auto& e : c.entries) {
          const double dx = spec.box_jitter * jit(rng);
          const double dy = spec.box_jitter * jit(rng);
          for (auto* b : {&e.face, &e.body}) {
            if (!*b) continue;
            BBox moved{(*b)->x + dx, (*b)->y + dy, (*b)->w, (*b)->h};
            *b = clamp_to_frame(moved, spec.width, spec.height);
          }
          if (!e.body) e.body = e.face;
        }
      }
      v.candidates.records.push_back(std::move(c));
    }
  }
  return v;
}

SyntheticVideoSpec sample_video(const VideoSampler& s, std::mt19937_64& rng) {
  if (s.min_shots < 1 || s.max_shots < s.min_shots) fail(ErrorKind::kConfig, "bad shot count range");
  if (s.min_len < 2 || s.max_len < s.min_len) fail(ErrorKind::kConfig, "bad shot length range");
  // Backgrounds far apart in hue so each cut moves histogram mass.
  static const float palette[][3] = {{0.70f, 0.25f, 0.20f}, {0.20f, 0.55f, 0.25f}, {0.20f, 0.30f, 0.70f},
                                     {0.75f, 0.70f, 0.25f}, {0.55f, 0.25f, 0.60f}, {0.25f, 0.65f, 0.70f}};
  std::uniform_int_distribution<int> shots(s.min_shots, s.max_shots);
  std::uniform_int_distribution<int> len(s.min_len, s.max_len);
  std::uniform_int_distribution<int> pick(0, 5);
  SyntheticVideoSpec v;
  v.width = s.width;
  v.height = s.height;
  v.transition = s.transition;
  v.crossfade = s.crossfade;
  v.box_jitter = s.box_jitter;
  v.seed = rng();
  const int n = shots(rng);
  int prev = -1;
  for (int i = 0; i < n; ++i) {
    SyntheticShot shot;
    shot.length = len(rng);
    SceneSampler ss;
    ss.width = s.width;
    ss.height = s.height;
    ss.min_actors = s.min_actors;
    ss.max_actors = s.max_actors;
    ss.min_height = 0.4;
    ss.max_height = 0.7;
    shot.scene = sample_scene(ss, rng);
    int p = pick(rng);
    while (p == prev) p = pick(rng);
    prev = p;
    for (int c = 0; c < 3; ++c) shot.scene.style.base[c] = palette[p][c];
    // Speeds that keep every actor inside the frame for the whole shot.
    std::uniform_real_distribution<double> sp(-s.max_speed, s.max_speed);
    for (auto& a : shot.scene.actors) {
      const BBox b = actor_body(a);
      const double span = std::max(1, shot.length - 1);
      a.vx = std::clamp(sp(rng), -b.left() / span, (s.width - b.right()) / span);
      a.vy = std::clamp(sp(rng), -b.top() / span, (s.height - b.bottom()) / span);
    }
    v.shots.push_back(shot);
  }
  return v;
}

nlohmann::json to_json(const SyntheticSceneSpec& spec) {
  nlohmann::json actors = nlohmann::json::array();
  for (const auto& a : spec.actors) {
    actors.push_back({{"cx", a.cx}, {"cy", a.cy}, {"height", a.height}, {"blur", a.blur},
                      {"facing", a.facing}, {"vx", a.vx}, {"vy", a.vy}});
  }
  return {{"width", spec.width},
          {"height", spec.height},
          {"actors", actors},
          {"weights",
           {{"central", spec.weights.central},
            {"proportional", spec.weights.proportional},
            {"focal", spec.weights.focal},
            {"postural", spec.weights.postural}}},
          {"ranks", composite_ranks(spec)}};
}

}  // namespace h2v

namespace h2v {

SyntheticVideoSpec two_shot_fixture(std::uint64_t seed, int length) {
  SyntheticVideoSpec v;
  v.seed = seed;
  std::mt19937_64 rng(seed);
  const float bases[2][3] = {{0.20f, 0.30f, 0.70f}, {0.70f, 0.25f, 0.20f}};
  const double main_x[2] = {0.38, 0.64};
  const double extra_x[2] = {0.85, 0.14};
  for (int s = 0; s < 2; ++s) {
    SyntheticShot shot;
    shot.length = length;
    auto& sc = shot.scene;
    sc.width = v.width;
    sc.height = v.height;
    sc.style.seed = rng();
    for (int c = 0; c < 3; ++c) sc.style.base[c] = bases[s][c];
    ActorSpec main;
    main.height = 0.62 * v.height;
    main.cx = main_x[s] * v.width;
    main.cy = 0.52 * v.height;
    main.vx = s == 0 ? 0.3 : -0.3;
    main.texture_seed = rng();
    ActorSpec extra;
    extra.height = 0.36 * v.height;
    extra.cx = extra_x[s] * v.width;
    extra.cy = 0.4 * v.height;
    extra.blur = 0.7;
    extra.facing = false;
    extra.texture_seed = rng();
    sc.actors = {main, extra};
    v.shots.push_back(shot);
  }
  return v;
}

}  // namespace h2v
