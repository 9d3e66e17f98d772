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

#include <cstddef>
#include <functional>
#include <vector>

#include "h2v/nn/tensor.hpp"

namespace h2v::nn {

struct GradCheckConfig {
  double eps = 1e-3;
  // Coordinates checked per variable; 0 checks all of them.
  std::size_t max_coords = 0;
  unsigned long long seed = 1;
};

struct GradCheckVar {
  Tensor* value;           // perturbed in place, restored afterwards
  const Tensor* analytic;  // gradient from the backward pass
};

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
  // Coordinates whose +-eps probe changed the piecewise-linear pattern
  // (ReLU masks, active hinges); there the central difference is not a
  // derivative estimate.
  std::size_t skipped_kinks = 0;
};

// loss() recomputes the scalar objective from the current tensor values.
// pattern() reports the activation pattern of the latest loss() call; pass an
// empty function for smooth objectives.
GradCheckResult grad_check(const std::function<double()>& loss,
                           const std::function<std::vector<bool>()>& pattern,
                           const std::vector<GradCheckVar>& vars, const GradCheckConfig& cfg = {});

inline double rel_error(double a, double n) {
  const double d = a > n ? a - n : n - a;
  const double s = (a < 0 ? -a : a) + (n < 0 ? -n : n);
  return d / (s > 1e-8 ? s : 1e-8);
}

}  // namespace h2v::nn
