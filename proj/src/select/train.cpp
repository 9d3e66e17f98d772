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
#include <numeric>

#include "h2v/error.hpp"
#include "h2v/select.hpp"

namespace h2v {

using nlohmann::json;

LabelMode parse_label_mode(const std::string& s) {
  if (s == "soft") return LabelMode::kSoft;
  if (s == "hard") return LabelMode::kHard;
  fail(ErrorKind::kConfig, "label mode must be soft or hard, got '" + s + "'");
}

const char* label_mode_name(LabelMode m) { return m == LabelMode::kSoft ? "soft" : "hard"; }

std::vector<int> mode_ranks(const std::vector<int>& ranks, LabelMode mode) {
  if (mode == LabelMode::kHard) return ranks;
  std::vector<int> out(ranks.size());
  std::transform(ranks.begin(), ranks.end(), out.begin(), [](int r) { return r <= 0 ? r : 1; });
  return out;
}

BBox perturb_box(const BBox& src, int frame_w, int frame_h, std::mt19937_64& rng, double jitter,
                 double min_iou) {
  std::uniform_real_distribution<double> u(-jitter, jitter);
  for (int attempt = 0; attempt < 64; ++attempt) {
    const double w = src.w * (1.0 + u(rng));
    const double h = src.h * (1.0 + u(rng));
    const Point c = src.center();
    const double cx = c.x + u(rng) * src.w;
    const double cy = c.y + u(rng) * src.h;
    const BBox b{cx - w / 2.0, cy - h / 2.0, w, h};
    if (b.left() < 0.0 || b.top() < 0.0 || b.right() > frame_w || b.bottom() > frame_h) continue;
    if (iou(b, src) >= min_iou) return b;
  }
  return src;
}

json to_json(const EpochLog& e) {
  return {{"epoch", e.epoch}, {"l_pt", e.l_pt}, {"l_pair", e.l_pair},
          {"violation_rate", e.violation_rate}, {"lr", e.lr}};
}

double violation_rate(const std::vector<std::vector<double>>& scores,
                      const std::vector<std::vector<int>>& ranks, LabelMode mode) {
  std::size_t pairs = 0;
  std::size_t bad = 0;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    const auto r = mode_ranks(ranks[k], mode);
    const auto& s = scores[k];
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t j = 0; j < s.size(); ++j) {
        if (r[i] < 0 || r[j] < 0 || r[i] >= r[j]) continue;
        ++pairs;
        if (!(s[i] > s[j])) ++bad;
      }
    }
  }
  return pairs ? static_cast<double>(bad) / pairs : 0.0;
}

namespace {

struct PreparedSample {
  std::vector<BBox> boxes;
  std::vector<int> ranks;  // mode-adjusted
  std::vector<int> hard_ranks;
  int width = 0;
  int height = 0;
};

PreparedSample prepare(const TrainSample& s, LabelMode mode) {
  PreparedSample p;
  std::vector<int> ranks;
  for (const auto& c : make_candidates(s.record, &ranks)) p.boxes.push_back(c.box);
  if (p.boxes.empty()) fail(ErrorKind::kConfig, "training record " + s.record.image_id + " has no entries");
  p.hard_ranks = ranks;
  p.ranks = mode_ranks(ranks, mode);
  p.width = s.image.width();
  p.height = s.image.height();
  return p;
}

// Originals first, then perturbed copies cycling over the sources.
void sample_rois(const PreparedSample& p, int count, std::mt19937_64& rng, std::vector<BBox>* boxes,
                 std::vector<int>* ranks) {
  *boxes = p.boxes;
  *ranks = p.ranks;
  for (std::size_t k = 0; static_cast<int>(boxes->size()) < count; ++k) {
    const std::size_t src = k % p.boxes.size();
    boxes->push_back(perturb_box(p.boxes[src], p.width, p.height, rng));
    ranks->push_back(p.ranks[src]);
  }
}

std::vector<double> labels_of(const std::vector<int>& ranks) {
  std::vector<double> l(ranks.size());
  std::transform(ranks.begin(), ranks.end(), l.begin(), [](int r) { return r == 0 ? 1.0 : 0.0; });
  return l;
}

void check_common(const std::vector<TrainSample>& data, int epochs, int batch) {
  if (data.empty()) fail(ErrorKind::kConfig, "training dataset is empty");
  if (epochs < 0 || batch < 1) fail(ErrorKind::kConfig, "epochs must be >= 0 and batch >= 1");
}

std::vector<std::size_t> shuffled(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

nn::Tensor stack_rows(const std::vector<nn::Tensor>& parts) {
  std::vector<int> shape = parts.front().shape;
  shape[0] = 0;
  for (const auto& p : parts) shape[0] += p.dim(0);
  nn::Tensor out(shape);
  std::size_t off = 0;
  for (const auto& p : parts) {
    std::copy(p.data.begin(), p.data.end(), out.data.begin() + static_cast<std::ptrdiff_t>(off));
    off += p.size();
  }
  return out;
}

}  // namespace

RankSsModel train_rankss(const std::vector<TrainSample>& data, const TrainConfig& cfg,
                         std::vector<EpochLog>* log, const EpochCallback& on_epoch) {
  check_common(data, cfg.epochs, cfg.batch);
  validate(cfg.loss);
  std::mt19937_64 rng(cfg.seed);
  RankSsModel model(cfg.model);
  model.init(rng);

  std::vector<PreparedSample> prepared;
  std::vector<RankSsInput> inputs;
  prepared.reserve(data.size());
  inputs.reserve(data.size());
  for (const auto& s : data) {
    prepared.push_back(prepare(s, cfg.labels));
    inputs.push_back(prepare_rankss_input(s.image, model));
  }

  const nn::ParamList params = model.head.params();
  std::vector<std::vector<double>> eval_scores(data.size());
  std::vector<std::vector<int>> eval_ranks(data.size());
  for (std::size_t k = 0; k < data.size(); ++k) eval_ranks[k] = prepared[k].hard_ranks;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double lr = nn::lr_schedule(epoch, cfg.lr);
    const auto order = shuffled(data.size(), rng);
    double sum_pt = 0.0;
    double sum_pair = 0.0;
    for (std::size_t b0 = 0; b0 < order.size(); b0 += static_cast<std::size_t>(cfg.batch)) {
      const std::size_t b1 = std::min(order.size(), b0 + static_cast<std::size_t>(cfg.batch));
      std::vector<nn::Tensor> pooled_parts, loc_parts;
      std::vector<std::vector<int>> batch_ranks;
      for (std::size_t b = b0; b < b1; ++b) {
        const std::size_t k = order[b];
        std::vector<BBox> boxes;
        std::vector<int> ranks;
        sample_rois(prepared[k], cfg.rois_per_image, rng, &boxes, &ranks);
        nn::Tensor pooled, loc;
        rankss_rois(inputs[k], boxes, model, &pooled, &loc);
        pooled_parts.push_back(std::move(pooled));
        loc_parts.push_back(std::move(loc));
        batch_ranks.push_back(std::move(ranks));
      }
      const nn::Tensor scores = model.head.forward(stack_rows(pooled_parts), stack_rows(loc_parts));
      nn::Tensor dscore(scores.shape);
      const double inv_b = 1.0 / static_cast<double>(b1 - b0);
      std::size_t off = 0;
      for (const auto& ranks : batch_ranks) {
        const std::vector<double> s(scores.data.begin() + static_cast<std::ptrdiff_t>(off),
                                    scores.data.begin() + static_cast<std::ptrdiff_t>(off + ranks.size()));
        std::vector<double> g;
        const CombinedLoss l = combined_loss(s, labels_of(ranks), ranks, cfg.loss, epoch, &g);
        sum_pt += l.l_pt;
        sum_pair += l.l_pair;
        for (std::size_t i = 0; i < g.size(); ++i) dscore.data[off + i] = g[i] * inv_b;
        off += ranks.size();
      }
      nn::zero_grads(params);
      model.head.backward(dscore);
      nn::sgd_step(params, lr, cfg.momentum);
    }

    for (std::size_t k = 0; k < data.size(); ++k) {
      nn::Tensor pooled, loc;
      rankss_rois(inputs[k], prepared[k].boxes, model, &pooled, &loc);
      eval_scores[k] = model.head.forward(pooled, loc).data;
    }
    EpochLog e;
    e.epoch = epoch + 1;
    e.l_pt = sum_pt / static_cast<double>(data.size());
    e.l_pair = sum_pair / static_cast<double>(data.size());
    e.violation_rate = violation_rate(eval_scores, eval_ranks, cfg.labels);
    e.lr = lr;
    if (log) log->push_back(e);
    if (on_epoch) on_epoch(e);
  }
  return model;
}

DssModel train_dss(const std::vector<TrainSample>& data, const DssTrainConfig& cfg,
                   std::vector<EpochLog>* log) {
  check_common(data, cfg.epochs, cfg.batch);
  std::mt19937_64 rng(cfg.seed);
  DssModel model;
  model.init(rng);

  std::vector<PreparedSample> prepared;
  std::vector<FeatureStack> stacks;
  SaliencyProvider sal;
  TenengradProvider blur;
  ZeroProvider none(1);
  for (const auto& s : data) {
    prepared.push_back(prepare(s, LabelMode::kHard));
    stacks.push_back(build_feature_stack(s.image, sal, blur, none));
  }
  const auto to_cands = [](const std::vector<BBox>& boxes, int w, int h) {
    std::vector<Candidate> c(boxes.size());
    for (std::size_t i = 0; i < boxes.size(); ++i) c[i] = {boxes[i], std::nullopt, location_prior(boxes[i], w, h)};
    return c;
  };

  const nn::ParamList params = model.mlp.params();
  std::vector<std::vector<double>> eval_scores(data.size());
  std::vector<std::vector<int>> eval_ranks(data.size());
  for (std::size_t k = 0; k < data.size(); ++k) eval_ranks[k] = prepared[k].hard_ranks;
  const int rois = TrainConfig{}.rois_per_image;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double lr = nn::lr_schedule(epoch, cfg.lr);
    const auto order = shuffled(data.size(), rng);
    double sum_pt = 0.0;
    for (std::size_t b0 = 0; b0 < order.size(); b0 += static_cast<std::size_t>(cfg.batch)) {
      const std::size_t b1 = std::min(order.size(), b0 + static_cast<std::size_t>(cfg.batch));
      std::vector<nn::Tensor> parts;
      std::vector<std::vector<int>> batch_ranks;
      for (std::size_t b = b0; b < b1; ++b) {
        const std::size_t k = order[b];
        std::vector<BBox> boxes;
        std::vector<int> ranks;
        sample_rois(prepared[k], rois, rng, &boxes, &ranks);
        parts.push_back(dss_inputs(stacks[k], to_cands(boxes, prepared[k].width, prepared[k].height),
                                   prepared[k].width, prepared[k].height));
        batch_ranks.push_back(std::move(ranks));
      }
      const nn::Tensor scores = model.mlp.forward(stack_rows(parts));
      nn::Tensor dscore(scores.shape);
      const double inv_b = 1.0 / static_cast<double>(b1 - b0);
      std::size_t off = 0;
      for (const auto& ranks : batch_ranks) {
        const std::vector<double> s(scores.data.begin() + static_cast<std::ptrdiff_t>(off),
                                    scores.data.begin() + static_cast<std::ptrdiff_t>(off + ranks.size()));
        std::vector<double> g;
        sum_pt += loss_pt(s, labels_of(ranks), &g);
        for (std::size_t i = 0; i < g.size(); ++i) dscore.data[off + i] = g[i] * inv_b;
        off += ranks.size();
      }
      nn::zero_grads(params);
      model.mlp.backward(dscore);
      nn::sgd_step(params, lr, cfg.momentum);
    }
    if (log) {
      for (std::size_t k = 0; k < data.size(); ++k) {
        eval_scores[k] = model.mlp.forward(dss_inputs(stacks[k], to_cands(prepared[k].boxes, prepared[k].width,
                                                                         prepared[k].height),
                                                      prepared[k].width, prepared[k].height))
                             .data;
      }
      log->push_back({epoch + 1, sum_pt / static_cast<double>(data.size()), 0.0,
                      violation_rate(eval_scores, eval_ranks, LabelMode::kHard), lr});
    }
  }
  return model;
}

double top1_accuracy(const std::vector<TrainSample>& data, const Scorer& scorer) {
  if (data.empty()) fail(ErrorKind::kEmptyInput, "top-1 accuracy over an empty set");
  std::size_t hits = 0;
  for (const auto& s : data) {
    std::vector<int> ranks;
    const auto cands = make_candidates(s.record, &ranks);
    const auto pick = select_subject(cands, scorer(s, cands));
    if (pick && ranks[*pick] == 0) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(data.size());
}

}  // namespace h2v
