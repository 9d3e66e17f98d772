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

#include <algorithm>
#include <cmath>

#include "h2v/error.hpp"
#include "h2v/select.hpp"

namespace h2v {

double loss_pt(const std::vector<double>& scores, const std::vector<double>& labels,
               std::vector<double>* grad) {
  if (scores.size() != labels.size() || scores.empty()) {
    fail(ErrorKind::kDimensionMismatch, "loss_pt needs equal, non-empty score and label lists");
  }
  const double n = static_cast<double>(scores.size());
  double sum = 0.0;
  if (grad) grad->assign(scores.size(), 0.0);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double d = scores[i] - labels[i];
    sum += d * d;
    if (grad) (*grad)[i] = 2.0 * d / n;
  }
  return sum / n;
}

PairLoss loss_pair(const std::vector<double>& scores, const std::vector<int>& ranks, double eps,
                   std::vector<double>* grad, std::vector<bool>* hinge) {
  if (scores.size() != ranks.size()) {
    fail(ErrorKind::kDimensionMismatch, "loss_pair needs one rank per score");
  }
  if (grad) grad->assign(scores.size(), 0.0);
  if (hinge) hinge->clear();
  PairLoss out;
  const auto ranked = std::count_if(ranks.begin(), ranks.end(), [](int r) { return r >= 0; });
  if (ranked < 2) return out;
  out.active = true;
  double sum = 0.0;
  struct Term {
    std::size_t i, j;
    double gamma;
  };
  std::vector<Term> active;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (ranks[i] < 0) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (j == i || ranks[j] < 0 || ranks[i] == ranks[j]) continue;
      const double gamma = ranks[i] < ranks[j] ? 1.0 : -1.0;
      const double arg = (scores[j] - scores[i]) * gamma + eps;
      ++out.pairs;
      if (hinge) hinge->push_back(arg > 0.0);
      if (arg > 0.0) {
        sum += arg;
        active.push_back({i, j, gamma});
      }
    }
  }
  if (out.pairs == 0) {
    // Every ranked candidate shares one rank: no ordering constraint.
    out.active = false;
    return out;
  }
  const double norm = static_cast<double>(out.pairs);
  out.value = sum / norm;
  if (grad) {
    for (const auto& t : active) {
      (*grad)[t.j] += t.gamma / norm;
      (*grad)[t.i] -= t.gamma / norm;
    }
  }
  return out;
}

void validate(const LossConfig& c) {
  if (!(c.epsilon > 0.0)) fail(ErrorKind::kConfig, "loss epsilon must be positive");
  if (c.w_pt < 0.0 || c.w_pair < 0.0) fail(ErrorKind::kConfig, "loss weights must be non-negative");
  if (c.warmup_epochs < 0) fail(ErrorKind::kConfig, "warmup_epochs must be non-negative");
}

CombinedLoss combined_loss(const std::vector<double>& scores, const std::vector<double>& labels,
                           const std::vector<int>& ranks, const LossConfig& cfg, int epoch,
                           std::vector<double>* grad, std::vector<bool>* hinge) {
  CombinedLoss out;
  std::vector<double> gpt, gpair;
  out.l_pt = loss_pt(scores, labels, grad ? &gpt : nullptr);
  const PairLoss pair = loss_pair(scores, ranks, cfg.epsilon, grad ? &gpair : nullptr, hinge);
  out.l_pair = pair.value;
  const double w_pair = epoch < cfg.warmup_epochs ? 0.0 : cfg.w_pair;
  out.total = cfg.w_pt * out.l_pt + w_pair * out.l_pair;
  if (grad) {
    grad->assign(scores.size(), 0.0);
    for (std::size_t i = 0; i < scores.size(); ++i) {
      (*grad)[i] = cfg.w_pt * gpt[i] + w_pair * gpair[i];
    }
  }
  return out;
}

}  // namespace h2v
