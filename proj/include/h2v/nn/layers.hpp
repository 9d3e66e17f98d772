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

#include <random>
#include <string>
#include <vector>

#include "h2v/nn/tensor.hpp"

namespace h2v::nn {

using Rng = std::mt19937_64;

// Each layer caches what its backward pass needs from the latest forward
// call; backward accumulates into parameter grads and returns dL/dinput.

class Conv2d {
 public:
  Conv2d() = default;
  Conv2d(std::string name, int in_ch, int out_ch, int kernel, int stride);

  // He-uniform weights scaled by gain, zero bias.
  void init(Rng& rng, double gain = 1.0);

  Tensor forward(const Tensor& x);
  Tensor backward(const Tensor& dy);
  void collect(ParamList& out) { out.push_back(&weight_); out.push_back(&bias_); }

  int in_channels() const { return in_ch_; }
  int out_channels() const { return out_ch_; }
  int stride() const { return stride_; }
  int out_size(int in) const { return (in + 2 * pad_ - kernel_) / stride_ + 1; }

  Parameter& weight() { return weight_; }
  Parameter& bias() { return bias_; }

 private:
  int in_ch_ = 0;
  int out_ch_ = 0;
  int kernel_ = 1;
  int stride_ = 1;
  int pad_ = 0;
  Parameter weight_;
  Parameter bias_;
  std::vector<int> in_shape_;
  // Batch im2col buffer, (in_ch*k*k) x (N*Ho*Wo).
  std::vector<double> cols_;
};

class Linear {
 public:
  Linear() = default;
  Linear(std::string name, int in, int out);

  void init(Rng& rng, double gain = 1.0);

  Tensor forward(const Tensor& x);
  Tensor backward(const Tensor& dy);
  void collect(ParamList& out) { out.push_back(&weight_); out.push_back(&bias_); }

  int in_features() const { return in_; }
  int out_features() const { return out_; }
  Parameter& weight() { return weight_; }
  Parameter& bias() { return bias_; }

 private:
  int in_ = 0;
  int out_ = 0;
  Parameter weight_;
  Parameter bias_;
  Tensor x_;
};

class ReLU {
 public:
  Tensor forward(const Tensor& x);
  Tensor backward(const Tensor& dy) const;
  // Active set of the latest forward; used to detect kink crossings.
  const std::vector<bool>& mask() const { return mask_; }

 private:
  std::vector<bool> mask_;
};

// Global average pooling (N,C,H,W) -> (N,C).
Tensor gap_forward(const Tensor& x);
Tensor gap_backward(const Tensor& dy, const std::vector<int>& in_shape);

// Concatenates (N,A) and (N,B) along features.
Tensor concat_features(const Tensor& a, const Tensor& b);
// Splits a gradient of concat_features back into its first A columns.
Tensor split_features_head(const Tensor& d, int a);

// 1x1 reduce -> 3x3 (stride) -> 1x1 expand, identity or 1x1 projection skip,
// ReLU after each conv and after the sum. No normalization layers; the
// expand conv is initialized with a reduced gain instead.
class Bottleneck {
 public:
  Bottleneck() = default;
  Bottleneck(const std::string& name, int in_ch, int mid_ch, int out_ch, int stride);

  void init(Rng& rng);
  Tensor forward(const Tensor& x);
  Tensor backward(const Tensor& dy);
  void collect(ParamList& out);
  void append_pattern(std::vector<bool>& out) const;

  int out_channels() const { return expand_.out_channels(); }

 private:
  Conv2d reduce_, conv_, expand_, project_;
  bool has_projection_ = false;
  ReLU relu1_, relu2_, relu_out_;
};

// Mean squared error over all elements and its gradient.
double mse_loss(const Tensor& pred, const Tensor& target, Tensor* grad);

}  // namespace h2v::nn
