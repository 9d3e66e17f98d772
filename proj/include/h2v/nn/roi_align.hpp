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

#include <vector>

#include "h2v/geometry.hpp"
#include "h2v/nn/tensor.hpp"

namespace h2v::nn {

struct RoiAlignConfig {
  int out_size = 14;
  double spatial_scale = 1.0 / 16.0;  // input pixels -> feature cells
  int sampling_ratio = 2;             // samples per output cell per axis
};

// Bilinear sample of channel plane (h x w) at continuous feature coords, with
// the usual RoIAlign border rule (zero beyond one cell outside, clamp inside).
double bilinear_sample(const double* plane, int h, int w, double y, double x);

// Pools every box (input-pixel coords) from fmap (1,C,H,W) into
// (N,C,out,out). Feature index i sits at continuous coordinate i, so a box
// is mapped by multiplying with spatial_scale only. Throws kGeometry for
// boxes that are degenerate after mapping.
Tensor roi_align_forward(const Tensor& fmap, const std::vector<BBox>& boxes,
                         const RoiAlignConfig& cfg = {});

// Scatters dy (N,C,out,out) back to the four neighbours of each sample.
Tensor roi_align_backward(const Tensor& dy, const std::vector<int>& fmap_shape,
                          const std::vector<BBox>& boxes, const RoiAlignConfig& cfg = {});

}  // namespace h2v::nn
