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

#include "h2v/nn/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "h2v/error.hpp"

namespace h2v::nn {

GradCheckResult grad_check(const std::function<double()>& loss,
                           const std::function<std::vector<bool>()>& pattern,
                           const std::vector<GradCheckVar>& vars, const GradCheckConfig& cfg) {
  GradCheckResult res;
  std::mt19937_64 rng(cfg.seed);
  const auto eval = [&](std::vector<bool>* pat) {
    const double l = loss();
    if (!std::isfinite(l)) fail(ErrorKind::kFault, "grad_check: non-finite loss");
    if (pat && pattern) *pat = pattern();
    return l;
  };
  std::vector<bool> base;
  eval(&base);
  for (const auto& var : vars) {
    if (var.value->size() != var.analytic->size()) {
      fail(ErrorKind::kConfig, "grad_check: gradient shape differs from value shape");
    }
    std::vector<std::size_t> idx(var.value->size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    if (cfg.max_coords && idx.size() > cfg.max_coords) {
      std::shuffle(idx.begin(), idx.end(), rng);
      idx.resize(cfg.max_coords);
    }
    for (std::size_t i : idx) {
      double& x = var.value->data[i];
      const double saved = x;
      std::vector<bool> pp, pm;
      x = saved + cfg.eps;
      const double lp = eval(&pp);
      x = saved - cfg.eps;
      const double lm = eval(&pm);
      x = saved;
      if (pattern && (pp != base || pm != base)) {
        ++res.skipped_kinks;
        continue;
      }
      const double numeric = (lp - lm) / (2.0 * cfg.eps);
      const double a = var.analytic->data[i];
      if (!std::isfinite(a)) fail(ErrorKind::kFault, "grad_check: non-finite analytic gradient");
      res.max_rel_error = std::max(res.max_rel_error, rel_error(a, numeric));
      ++res.checked;
    }
  }
  eval(nullptr);
  return res;
}

}  // namespace h2v::nn
