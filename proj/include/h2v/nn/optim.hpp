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

#include "h2v/nn/tensor.hpp"

namespace h2v::nn {

struct LrSchedule {
  double base = 0.01;
  double decay = 0.1;
  int step_epochs = 10;
};

// Step decay: base * decay^floor(epoch / step_epochs).
double lr_schedule(int epoch, const LrSchedule& s = {});

// Momentum SGD: v <- momentum*v + g; w <- w - lr*v. Throws kFault naming the
// parameter when a gradient is not finite, before any parameter is touched.
void sgd_step(const ParamList& params, double lr, double momentum = 0.9);

}  // namespace h2v::nn
