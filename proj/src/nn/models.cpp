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

#include "h2v/nn/models.hpp"

#include <algorithm>
#include <cmath>

#include "h2v/error.hpp"

namespace h2v::nn {

namespace {

struct AxisTap {
  int i0, i1;
  double w1;  // weight of i1; i0 gets 1 - w1
};

std::vector<AxisTap> axis_taps(int in, int out) {
  std::vector<AxisTap> taps(out);
  const double scale = static_cast<double>(in) / out;
  for (int o = 0; o < out; ++o) {
    double s = (o + 0.5) * scale - 0.5;
    s = std::clamp(s, 0.0, static_cast<double>(in - 1));
    const int i0 = static_cast<int>(std::floor(s));
    const int i1 = std::min(i0 + 1, in - 1);
    taps[o] = {i0, i1, s - i0};
  }
  return taps;
}

}  // namespace

Tensor resize_map_forward(const Tensor& x, int oh, int ow) {
  const int n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
  if (oh == h && ow == w) return x;
  const auto ty = axis_taps(h, oh);
  const auto tx = axis_taps(w, ow);
  Tensor y({n, c, oh, ow});
  for (int p = 0; p < n * c; ++p) {
    const double* src = x.data.data() + static_cast<std::size_t>(p) * h * w;
    double* dst = y.data.data() + static_cast<std::size_t>(p) * oh * ow;
    for (int oy = 0; oy < oh; ++oy) {
      const auto& a = ty[oy];
      for (int ox = 0; ox < ow; ++ox) {
        const auto& b = tx[ox];
        const double top = src[a.i0 * w + b.i0] * (1 - b.w1) + src[a.i0 * w + b.i1] * b.w1;
        const double bot = src[a.i1 * w + b.i0] * (1 - b.w1) + src[a.i1 * w + b.i1] * b.w1;
        dst[oy * ow + ox] = top * (1 - a.w1) + bot * a.w1;
      }
    }
  }
  return y;
}

Tensor resize_map_backward(const Tensor& dy, const std::vector<int>& in_shape) {
  const int n = in_shape[0], c = in_shape[1], h = in_shape[2], w = in_shape[3];
  const int oh = dy.dim(2), ow = dy.dim(3);
  if (oh == h && ow == w) return dy;
  const auto ty = axis_taps(h, oh);
  const auto tx = axis_taps(w, ow);
  Tensor dx(in_shape);
  for (int p = 0; p < n * c; ++p) {
    const double* g = dy.data.data() + static_cast<std::size_t>(p) * oh * ow;
    double* dst = dx.data.data() + static_cast<std::size_t>(p) * h * w;
    for (int oy = 0; oy < oh; ++oy) {
      const auto& a = ty[oy];
      for (int ox = 0; ox < ow; ++ox) {
        const auto& b = tx[ox];
        const double v = g[oy * ow + ox];
        dst[a.i0 * w + b.i0] += v * (1 - a.w1) * (1 - b.w1);
        dst[a.i0 * w + b.i1] += v * (1 - a.w1) * b.w1;
        dst[a.i1 * w + b.i0] += v * a.w1 * (1 - b.w1);
        dst[a.i1 * w + b.i1] += v * a.w1 * b.w1;
      }
    }
  }
  return dx;
}

// ---------------------------------------------------------------- encoder

EncoderModel::EncoderModel(const EncoderConfig& cfg) : cfg_(cfg) {
  if (cfg.channels <= 0) fail(ErrorKind::kConfig, "encoder channel count must be positive");
  if (cfg.width <= 0 || cfg.stages < 1 || cfg.stages > 4) {
    fail(ErrorKind::kConfig, "encoder needs width > 0 and 1..4 stages");
  }
  int in = 3;
  for (int s = 0; s < cfg.stages; ++s) {
    stages_.emplace_back("encoder.stage" + std::to_string(s + 1), in, cfg.width, 3, 2);
    in = cfg.width;
  }
  relus_.resize(stages_.size());
  project_ = Conv2d("encoder.project", cfg.width, cfg.channels, 1, 1);
}

void EncoderModel::init(Rng& rng) {
  for (auto& s : stages_) s.init(rng);
  project_.init(rng);
}

Tensor EncoderModel::forward(const Tensor& image) {
  Tensor h = image;
  for (std::size_t i = 0; i < stages_.size(); ++i) h = relus_[i].forward(stages_[i].forward(h));
  return project_.forward(h);
}

Tensor EncoderModel::backward(const Tensor& dy) {
  Tensor d = project_.backward(dy);
  for (std::size_t i = stages_.size(); i-- > 0;) d = stages_[i].backward(relus_[i].backward(d));
  return d;
}

ParamList EncoderModel::params() {
  ParamList p;
  for (auto& s : stages_) s.collect(p);
  project_.collect(p);
  return p;
}

std::vector<bool> EncoderModel::pattern() const {
  std::vector<bool> out;
  for (const auto& r : relus_) out.insert(out.end(), r.mask().begin(), r.mask().end());
  return out;
}

// ---------------------------------------------------------------- rank head

RankHead::RankHead(const RankHeadConfig& cfg)
    : cfg_(cfg),
      b1_("head.block1", cfg.in_channels, cfg.mid, cfg.width, 2),
      b2_("head.block2", cfg.width, cfg.mid, cfg.width, 1),
      b3_("head.block3", cfg.width, cfg.mid, cfg.width, 1),
      fc1_("head.fc1", cfg.width + cfg.loc_dim, cfg.fc1),
      fc2_("head.fc2", cfg.fc1, cfg.fc2),
      fc3_("head.fc3", cfg.fc2, 1) {
  if (cfg.in_channels <= 0 || cfg.roi_size <= 0 || cfg.mid <= 0 || cfg.width <= 0 ||
      cfg.fc1 <= 0 || cfg.fc2 <= 0 || cfg.loc_dim < 0) {
    fail(ErrorKind::kConfig, "rank head sizes must be positive");
  }
}

void RankHead::init(Rng& rng) {
  b1_.init(rng);
  b2_.init(rng);
  b3_.init(rng);
  fc1_.init(rng);
  fc2_.init(rng);
  fc3_.init(rng);
}

Tensor RankHead::forward(const Tensor& pooled, const Tensor& loc) {
  if (pooled.rank() != 4 || pooled.dim(1) != cfg_.in_channels) {
    fail(ErrorKind::kConfig, "rank head expects " + std::to_string(cfg_.in_channels) +
                                 " input channels, got " + shape_str(pooled.shape));
  }
  if (loc.rank() != 2 || loc.dim(0) != pooled.dim(0) || loc.dim(1) != cfg_.loc_dim) {
    fail(ErrorKind::kConfig, "rank head location prior shape " + shape_str(loc.shape));
  }
  Tensor h = b3_.forward(b2_.forward(b1_.forward(pooled)));
  block_out_shape_ = h.shape;
  Tensor v = concat_features(gap_forward(h), loc);
  v = r1_.forward(fc1_.forward(v));
  v = r2_.forward(fc2_.forward(v));
  return fc3_.forward(v);
}

Tensor RankHead::backward(const Tensor& dscore) {
  Tensor d = fc1_.backward(r1_.backward(fc2_.backward(r2_.backward(fc3_.backward(dscore)))));
  d = gap_backward(split_features_head(d, cfg_.width), block_out_shape_);
  return b1_.backward(b2_.backward(b3_.backward(d)));
}

ParamList RankHead::params() {
  ParamList p;
  b1_.collect(p);
  b2_.collect(p);
  b3_.collect(p);
  fc1_.collect(p);
  fc2_.collect(p);
  fc3_.collect(p);
  return p;
}

std::vector<bool> RankHead::pattern() const {
  std::vector<bool> out;
  b1_.append_pattern(out);
  b2_.append_pattern(out);
  b3_.append_pattern(out);
  out.insert(out.end(), r1_.mask().begin(), r1_.mask().end());
  out.insert(out.end(), r2_.mask().begin(), r2_.mask().end());
  return out;
}

// ---------------------------------------------------------------- MLP

Mlp::Mlp(const std::string& name, const std::vector<int>& dims) : dims_(dims) {
  if (dims.size() < 2) fail(ErrorKind::kConfig, "mlp needs at least input and output sizes");
  for (int d : dims) {
    if (d <= 0) fail(ErrorKind::kConfig, "mlp layer sizes must be positive");
  }
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    layers_.emplace_back(name + ".fc" + std::to_string(i + 1), dims[i], dims[i + 1]);
  }
  relus_.resize(layers_.size() - 1);
}

void Mlp::init(Rng& rng) {
  for (auto& l : layers_) l.init(rng);
}

Tensor Mlp::forward(const Tensor& x) {
  Tensor h = x;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    h = layers_[i].forward(h);
    if (i < relus_.size()) h = relus_[i].forward(h);
  }
  return h;
}

Tensor Mlp::backward(const Tensor& dy) {
  Tensor d = dy;
  for (std::size_t i = layers_.size(); i-- > 0;) {
    if (i < relus_.size()) d = relus_[i].backward(d);
    d = layers_[i].backward(d);
  }
  return d;
}

ParamList Mlp::params() {
  ParamList p;
  for (auto& l : layers_) l.collect(p);
  return p;
}

std::vector<bool> Mlp::pattern() const {
  std::vector<bool> out;
  for (const auto& r : relus_) out.insert(out.end(), r.mask().begin(), r.mask().end());
  return out;
}

}  // namespace h2v::nn
