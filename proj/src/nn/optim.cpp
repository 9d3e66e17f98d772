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

#include "h2v/nn/optim.hpp"

#include <cmath>

#include "h2v/error.hpp"

namespace h2v::nn {

double lr_schedule(int epoch, const LrSchedule& s) {
  if (epoch < 0) fail(ErrorKind::kConfig, "lr_schedule: negative epoch");
  return s.base * std::pow(s.decay, epoch / s.step_epochs);
}

void sgd_step(const ParamList& params, double lr, double momentum) {
  if (!(lr > 0.0) || !std::isfinite(lr)) fail(ErrorKind::kConfig, "sgd_step: lr must be positive");
  for (const auto* p : params) {
    for (double g : p->grad.data) {
      if (!std::isfinite(g)) fail(ErrorKind::kFault, "non-finite gradient in parameter " + p->name);
    }
  }
  for (auto* p : params) {
    auto& v = p->velocity.data;
    auto& w = p->value.data;
    const auto& g = p->grad.data;
    for (std::size_t i = 0; i < w.size(); ++i) {
      v[i] = momentum * v[i] + g[i];
      w[i] -= lr * v[i];
    }
  }
}

}  // namespace h2v::nn
