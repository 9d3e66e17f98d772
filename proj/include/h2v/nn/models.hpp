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

#include <string>
#include <vector>

#include "h2v/nn/layers.hpp"
#include "h2v/nn/tensor.hpp"

namespace h2v::nn {

// Bilinear resize of (N,C,H,W) to (N,C,oh,ow), pixel-center aligned, plus
// its adjoint.
Tensor resize_map_forward(const Tensor& x, int oh, int ow);
Tensor resize_map_backward(const Tensor& dy, const std::vector<int>& in_shape);

struct EncoderConfig {
  int channels = 8;  // C, embedding channels
  int width = 8;     // channels of the strided stages
  int stages = 3;    // 3x3 stride-2 conv + ReLU each
};

// Strided conv stack then a 1x1 projection to C channels; output stride
// is 2^stages.
class EncoderModel {
 public:
  explicit EncoderModel(const EncoderConfig& cfg = {});

  void init(Rng& rng);
  // image (1,3,H,W) -> (1,C,H/2^s,W/2^s) rounded up per stage.
  Tensor forward(const Tensor& image);
  Tensor backward(const Tensor& dy);
  ParamList params();
  std::vector<bool> pattern() const;

  const EncoderConfig& config() const { return cfg_; }
  int output_stride() const { return 1 << cfg_.stages; }

 private:
  EncoderConfig cfg_;
  std::vector<Conv2d> stages_;
  std::vector<ReLU> relus_;
  Conv2d project_;
};

struct RankHeadConfig {
  int in_channels = 10;  // 2 + C
  int roi_size = 14;
  int mid = 8;
  int width = 32;
  int fc1 = 256;
  int fc2 = 64;
  int loc_dim = 4;
};

// Three bottleneck blocks (the first one strided) -> GAP -> concat location
// prior -> FC -> ReLU -> FC -> ReLU -> FC -> scalar score.
class RankHead {
 public:
  explicit RankHead(const RankHeadConfig& cfg = {});

  void init(Rng& rng);
  // pooled (N,in,r,r), loc (N,loc_dim) -> (N,1)
  Tensor forward(const Tensor& pooled, const Tensor& loc);
  // dscore (N,1) -> dL/dpooled
  Tensor backward(const Tensor& dscore);
  ParamList params();
  // Concatenated ReLU masks of the latest forward.
  std::vector<bool> pattern() const;

  const RankHeadConfig& config() const { return cfg_; }

 private:
  RankHeadConfig cfg_;
  Bottleneck b1_, b2_, b3_;
  Linear fc1_, fc2_, fc3_;
  ReLU r1_, r2_;
  std::vector<int> block_out_shape_;
};

// Plain MLP: Linear layers with ReLU between them, linear output.
class Mlp {
 public:
  Mlp() = default;
  Mlp(const std::string& name, const std::vector<int>& dims);

  void init(Rng& rng);
  Tensor forward(const Tensor& x);
  Tensor backward(const Tensor& dy);
  ParamList params();
  std::vector<bool> pattern() const;

  const std::vector<int>& dims() const { return dims_; }
  int in_features() const { return dims_.front(); }

 private:
  std::vector<int> dims_;
  std::vector<Linear> layers_;
  std::vector<ReLU> relus_;
};

}  // namespace h2v::nn
